"""Exact rational linear algebra, strict feasibility and integer normal forms.

Everything here works on plain Python lists of :class:`fractions.Fraction`.
The matrices met in this package are tiny (a handful of rows and columns),
so Gaussian elimination and Fourier-Motzkin elimination are fast enough and
keep every answer exact.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

Vector = list
Matrix = list


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def vec(xs: Iterable) -> tuple:
    return tuple(as_fraction(x) for x in xs)


def fmt(q: Fraction) -> str:
    """Render a rational as ``p/q`` text (integers keep the ``/1``)."""
    q = as_fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse(text: str) -> Fraction:
    return Fraction(text)


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def add(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, u: Sequence) -> tuple:
    return tuple(c * a for a in u)


def sign(x) -> int:
    return (x > 0) - (x < 0)


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    cols = list(zip(*b))
    return tuple(tuple(dot(row, col) for col in cols) for row in a)


def matvec(a: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in a)


def identity(n: int) -> tuple:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def transpose(a: Sequence[Sequence]) -> tuple:
    return tuple(tuple(r) for r in zip(*a))


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [[as_fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1]) if rows else 0


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple]:
    """Basis of ``{x : rows . x = 0}``."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for i in range(ncols)) for j in range(ncols)]
    red, piv = rref(rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, pc in enumerate(piv):
            x[pc] = -red[r][f]
        basis.append(tuple(x))
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> tuple | None:
    """One solution of ``a x = b`` or ``None``."""
    n = len(a[0]) if a else 0
    aug = [list(r) + [bi] for r, bi in zip(a, b)]
    red, piv = rref(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for r, pc in enumerate(piv):
        x[pc] = red[r][n]
    return tuple(x)


def inverse(a: Sequence[Sequence]) -> tuple | None:
    n = len(a)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(a)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        return None
    return tuple(tuple(row[n:]) for row in red)


def column_space_basis(vectors: Sequence[Sequence]) -> list[tuple]:
    """A maximal independent subfamily of ``vectors`` (kept in input order)."""
    chosen: list[tuple] = []
    for v in vectors:
        if rank(chosen + [tuple(v)]) > len(chosen):
            chosen.append(tuple(v))
    return chosen


def primitive_integer(v: Sequence) -> tuple:
    """Positive rescaling of a rational vector to a primitive integer vector."""
    den = 1
    for x in v:
        den = lcm(den, as_fraction(x).denominator)
    ints = [int(as_fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    g = g or 1
    return tuple(Fraction(x // g) for x in ints)


# --------------------------------------------------------------------------
# Fourier-Motzkin feasibility


def _normalize(coeffs: tuple, const: Fraction) -> tuple[tuple, Fraction]:
    lead = next((abs(c) for c in coeffs if c != 0), None)
    if lead is None or lead == 1:
        return coeffs, const
    return tuple(c / lead for c in coeffs), const / lead


def _prune(system: list) -> list:
    best: dict[tuple, Fraction] = {}
    for coeffs, const in system:
        coeffs, const = _normalize(coeffs, const)
        if coeffs not in best or const > best[coeffs]:
            best[coeffs] = const
    return list(best.items())


def fm_feasible(system: Sequence[tuple[Sequence, object]], nvars: int) -> tuple | None:
    """Solve ``a . y >= c`` for all rows by Fourier-Motzkin elimination.

    Returns an exact rational witness ``y`` or ``None`` when infeasible.
    """
    current = _prune([(tuple(as_fraction(x) for x in a), as_fraction(c)) for a, c in system])
    if nvars == 0:
        return () if all(c <= 0 for _, c in current) else None
    stages = []
    for k in range(nvars - 1, -1, -1):
        stages.append(current)
        pos = [r for r in current if r[0][k] > 0]
        neg = [r for r in current if r[0][k] < 0]
        nxt = [r for r in current if r[0][k] == 0]
        for pa, pc in pos:
            for na, nc in neg:
                fp, fn = 1 / pa[k], -1 / na[k]
                coeffs = tuple(fp * x + fn * y for x, y in zip(pa, na))
                nxt.append((coeffs, fp * pc + fn * nc))
        current = []
        for coeffs, const in _prune(nxt):
            if all(c == 0 for c in coeffs):
                if const > 0:
                    return None
            else:
                current.append((coeffs, const))
    # back substitution: stages[-1] constrains variable 0 only, etc.
    y = [Fraction(0)] * nvars
    for k, stage in zip(range(nvars), reversed(stages)):
        lo, hi = None, None
        for coeffs, const in stage:
            a = coeffs[k]
            rest = sum((coeffs[j] * y[j] for j in range(k)), Fraction(0))
            if a == 0:
                continue
            bound = (const - rest) / a
            if a > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        if lo is not None and hi is not None:
            if lo > hi:
                return None
            y[k] = lo if lo == hi else (lo + hi) / 2
        elif lo is not None:
            y[k] = lo
        elif hi is not None:
            y[k] = hi
    return tuple(y)


def strict_feasible(strict: Sequence[Sequence], equal: Sequence[Sequence] = (), nvars: int | None = None) -> tuple | None:
    """Find ``x`` with ``s . x > 0`` for every strict row and ``e . x = 0`` for every equal row.

    The system is homogeneous, so strict inequalities are rescaled to ``>= 1``.
    Returns a witness or ``None``.
    """
    if nvars is None:
        rows = list(strict) + list(equal)
        nvars = len(rows[0]) if rows else 0
    basis = nullspace([list(e) for e in equal], nvars) if equal else [
        tuple(Fraction(int(i == j)) for i in range(nvars)) for j in range(nvars)
    ]
    if not strict:
        return tuple(Fraction(0) for _ in range(nvars))
    if not basis:
        return None
    # x = sum_j y_j basis_j
    reduced = [tuple(dot(s, b) for b in basis) for s in strict]
    y = fm_feasible([(r, Fraction(1)) for r in reduced], len(basis))
    if y is None:
        return None
    x = [Fraction(0)] * nvars
    for yj, b in zip(y, basis):
        for i in range(nvars):
            x[i] += yj * b[i]
    x = tuple(x)
    assert all(dot(s, x) > 0 for s in strict)
    assert all(dot(e, x) == 0 for e in equal)
    return x


# --------------------------------------------------------------------------
# Integer normal forms


def smith_invariants(rows: Sequence[Sequence[int]], ncols: int) -> list[int]:
    """Nonzero invariant factors of an integer matrix with ``ncols`` columns."""
    if not rows or ncols == 0:
        return []
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import invariant_factors

    m = Matrix([[int(x) for x in r] for r in rows])
    return [int(abs(f)) for f in invariant_factors(m, domain=ZZ) if f != 0]


def abelian_group_from_relations(rows: Sequence[Sequence[int]], ngens: int) -> dict:
    """Structure of ``Z^ngens / rowspace(rows)``: free rank and torsion factors."""
    factors = smith_invariants([r for r in rows if any(r)], ngens)
    return {
        "free_rank": ngens - len(factors),
        "torsion": [f for f in factors if f > 1],
    }


def describe_abelian(group: dict) -> str:
    parts = []
    if group["free_rank"]:
        parts.append("Z" if group["free_rank"] == 1 else f"Z^{group['free_rank']}")
    parts.extend(f"Z/{t}" for t in group["torsion"])
    return " + ".join(parts) if parts else "0"
