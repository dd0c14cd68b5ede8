"""Crystallographic root systems in rational coordinates and their Weyl groups.

Realizations:

* ``A_{n-1}`` lives in Q^n with roots ``e_i - e_j``; the all-ones vector spans the
  common kernel, so ``lineality_dim == 1``.
* ``B_n``, ``C_n``, ``D_n`` and ``F4`` use the usual orthonormal coordinates.
* ``G2`` has no rational orthonormal model in the plane, so it sits in the
  sum-zero plane of Q^3 (lineality 1), like ``A_2``.

Simple roots follow the Bourbaki numbering.  Positive roots are ordered by
height, and within one height by the simple-root coefficient vector read
left to right (larger first), so ``alpha_1`` precedes ``alpha_2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations, product

from .errors import UnsupportedType
from .linalg import dot, fmt, matmul, rank, solve, identity, transpose

SERIES = ("A", "B", "C", "D", "G2", "F4")


def _e(n: int, i: int, c=1) -> list:
    v = [Fraction(0)] * n
    v[i] = Fraction(c)
    return v


def _combo(n: int, terms) -> tuple:
    v = [Fraction(0)] * n
    for i, c in terms:
        v[i] += Fraction(c)
    return tuple(v)


def _raw_roots(series: str, rank: int) -> tuple[int, list[tuple], list[tuple]]:
    """(ambient dimension, all roots, simple roots) before ordering."""
    if series == "A":
        n = rank + 1
        roots = [_combo(n, [(i, 1), (j, -1)]) for i in range(n) for j in range(n) if i != j]
        simple = [_combo(n, [(i, 1), (i + 1, -1)]) for i in range(rank)]
        return n, roots, simple
    if series in ("B", "C", "D"):
        n = rank
        roots = []
        for i, j in combinations(range(n), 2):
            for si, sj in product((1, -1), repeat=2):
                roots.append(_combo(n, [(i, si), (j, sj)]))
        if series == "B":
            roots += [_combo(n, [(i, s)]) for i in range(n) for s in (1, -1)]
            last = _combo(n, [(n - 1, 1)])
        elif series == "C":
            roots += [_combo(n, [(i, 2 * s)]) for i in range(n) for s in (1, -1)]
            last = _combo(n, [(n - 1, 2)])
        else:
            last = _combo(n, [(n - 2, 1), (n - 1, 1)])
        simple = [_combo(n, [(i, 1), (i + 1, -1)]) for i in range(n - 1)] + [last]
        return n, roots, simple
    if series == "G2":
        n = 3
        roots = [_combo(n, [(i, 1), (j, -1)]) for i in range(3) for j in range(3) if i != j]
        for i in range(3):
            others = [k for k in range(3) if k != i]
            for s in (1, -1):
                roots.append(_combo(n, [(i, 2 * s)] + [(k, -s) for k in others]))
        simple = [_combo(n, [(0, 1), (1, -1)]), _combo(n, [(0, -2), (1, 1), (2, 1)])]
        return n, roots, simple
    if series == "F4":
        n = 4
        roots = [_combo(n, [(i, s)]) for i in range(4) for s in (1, -1)]
        for i, j in combinations(range(4), 2):
            for si, sj in product((1, -1), repeat=2):
                roots.append(_combo(n, [(i, si), (j, sj)]))
        half = Fraction(1, 2)
        for signs in product((1, -1), repeat=4):
            roots.append(tuple(half * s for s in signs))
        simple = [
            _combo(n, [(1, 1), (2, -1)]),
            _combo(n, [(2, 1), (3, -1)]),
            _combo(n, [(3, 1)]),
            tuple(half * s for s in (1, -1, -1, -1)),
        ]
        return n, roots, simple
    raise UnsupportedType(f"unsupported root system type {series!r}")


@dataclass(frozen=True)
class RootSystem:
    series: str
    rank: int
    ambient_dim: int
    roots: tuple            # positive roots first (in frozen order), then their negatives
    positive_roots: tuple   # indices 0..N-1
    simple_roots: tuple     # indices into roots
    coroots: tuple          # coroot of roots[k] at position k
    lineality_dim: int
    coefficients: tuple = field(repr=False)  # simple-root coefficients of each positive root

    @property
    def name(self) -> str:
        return self.series if self.series in ("G2", "F4") else f"{self.series}{self.rank}"

    @property
    def n_pos(self) -> int:
        return len(self.positive_roots)

    def neg(self, k: int) -> int:
        """Index of the negative of root ``k``."""
        n = self.n_pos
        return k + n if k < n else k - n

    @cached_property
    def index(self) -> dict:
        return {r: k for k, r in enumerate(self.roots)}

    def height(self, k: int) -> int:
        c = self.coefficients[k if k < self.n_pos else k - self.n_pos]
        h = int(sum(c))
        return h if k < self.n_pos else -h

    def simple_index(self, k: int) -> int:
        """Position of root ``k`` in the simple-root list."""
        return self.simple_roots.index(k)

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "series": self.series,
            "rank": self.rank,
            "roots": [[fmt(x) for x in r] for r in self.roots],
            "positive": list(self.positive_roots),
            "simple": list(self.simple_roots),
        }


def _check_rank(series: str, rank_: int) -> None:
    ok = (
        (series == "A" and rank_ >= 1)
        or (series in ("B", "C") and rank_ >= 2)
        or (series == "D" and rank_ >= 3)
        or (series == "G2" and rank_ == 2)
        or (series == "F4" and rank_ == 4)
    )
    if not ok:
        raise UnsupportedType(f"unsupported root system {series}{rank_}")


@lru_cache(maxsize=None)
def build_root_system(series: str, rank: int | None = None) -> RootSystem:
    """Build a root system, e.g. ``build_root_system("D", 4)`` or ``("G2", 2)``."""
    series = series.upper()
    if series in ("G", "F"):
        series = {"G": "G2", "F": "F4"}[series]
    if series not in SERIES:
        raise UnsupportedType(f"unsupported root system type {series!r}")
    if rank is None:
        rank = {"G2": 2, "F4": 4}.get(series)
        if rank is None:
            raise UnsupportedType(f"unsupported root system type {series!r}")
    _check_rank(series, rank)
    n, roots, simple = _raw_roots(series, rank)
    simple_cols = transpose(simple)
    coeffs = {}
    for r in roots:
        c = solve(simple_cols, r)
        assert c is not None and all(x.denominator == 1 for x in c)
        assert all(x >= 0 for x in c) or all(x <= 0 for x in c)
        coeffs[r] = c
    pos = [r for r in roots if all(x >= 0 for x in coeffs[r])]
    pos.sort(key=lambda r: (sum(coeffs[r]), tuple(-x for x in coeffs[r])))
    ordered = pos + [tuple(-x for x in r) for r in pos]
    index = {r: k for k, r in enumerate(ordered)}
    coroots = tuple(tuple(2 * x / dot(r, r) for x in r) for r in ordered)
    lineality = n - rank_of(ordered)
    return RootSystem(
        series=series,
        rank=rank,
        ambient_dim=n,
        roots=tuple(ordered),
        positive_roots=tuple(range(len(pos))),
        simple_roots=tuple(index[s] for s in simple),
        coroots=coroots,
        lineality_dim=lineality,
        coefficients=tuple(coeffs[r] for r in pos),
    )


def rank_of(vectors) -> int:
    return rank([list(v) for v in vectors])


def parse_system(text: str) -> RootSystem:
    """Parse names such as ``A2``, ``B3``, ``D4``, ``G2``, ``F4``."""
    t = text.strip().upper()
    if t in ("G2", "F4"):
        return build_root_system(t)
    if len(t) < 2 or not t[1:].isdigit():
        raise UnsupportedType(f"cannot parse root system {text!r}")
    return build_root_system(t[0], int(t[1:]))


# --------------------------------------------------------------------------
# Weyl groups


@dataclass(frozen=True, eq=False)
class WeylElement:
    """Exact orthogonal matrix together with the root permutation it induces."""

    matrix: tuple
    root_perm: tuple

    @property
    def canonical_key(self) -> tuple:
        return self.root_perm

    def __eq__(self, other) -> bool:
        return isinstance(other, WeylElement) and self.root_perm == other.root_perm

    def __hash__(self) -> int:
        return hash(self.root_perm)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        perm = tuple(self.root_perm[k] for k in other.root_perm)
        return WeylElement(matmul(self.matrix, other.matrix), perm)

    def inverse(self) -> "WeylElement":
        inv = [0] * len(self.root_perm)
        for k, v in enumerate(self.root_perm):
            inv[v] = k
        return WeylElement(transpose(self.matrix), tuple(inv))

    def __call__(self, root_index: int) -> int:
        return self.root_perm[root_index]

    @property
    def n_pos(self) -> int:
        return len(self.root_perm) // 2

    @property
    def length(self) -> int:
        n = self.n_pos
        return sum(1 for k in range(n) if self.root_perm[k] >= n)

    @property
    def is_identity(self) -> bool:
        return all(k == v for k, v in enumerate(self.root_perm))

    def sort_key(self) -> tuple:
        return (self.length, self.root_perm)


def reflection_matrix(root) -> tuple:
    n = len(root)
    rr = dot(root, root)
    return tuple(
        tuple(Fraction(int(i == j)) - 2 * root[i] * root[j] / rr for j in range(n)) for i in range(n)
    )


def reflection(rs: RootSystem, root) -> WeylElement:
    """The reflection ``s_alpha`` for a root given by index or by coordinates."""
    if isinstance(root, int):
        root = rs.roots[root]
    root = tuple(Fraction(x) for x in root)
    m = reflection_matrix(root)
    perm = tuple(rs.index[tuple(dot(row, r) for row in m)] for r in rs.roots)
    return WeylElement(m, perm)


def identity_element(rs: RootSystem) -> WeylElement:
    return WeylElement(identity(rs.ambient_dim), tuple(range(len(rs.roots))))


class WeylGroup:
    """The full Weyl group as an explicit, deterministically ordered element list."""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        self.simple = [reflection(rs, k) for k in rs.simple_roots]
        e = identity_element(rs)
        seen = {e.root_perm: e}
        frontier = [e]
        while frontier:
            nxt = []
            for w in frontier:
                for s in self.simple:
                    v = s * w
                    if v.root_perm not in seen:
                        seen[v.root_perm] = v
                        nxt.append(v)
            frontier = nxt
        self.elements = sorted(seen.values(), key=WeylElement.sort_key)
        self.position = {w.root_perm: i for i, w in enumerate(self.elements)}
        self.identity = self.elements[0]
        self._mul: dict = {}

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, w) -> bool:
        return w.root_perm in self.position

    def idx(self, w: WeylElement) -> int:
        return self.position[w.root_perm]

    def mul(self, i: int, j: int) -> int:
        key = (i, j)
        r = self._mul.get(key)
        if r is None:
            a, b = self.elements[i].root_perm, self.elements[j].root_perm
            r = self.position[tuple(a[k] for k in b)]
            self._mul[key] = r
        return r

    def inv(self, i: int) -> int:
        return self.idx(self.elements[i].inverse())

    @cached_property
    def longest(self) -> WeylElement:
        return self.elements[-1]

    def closure(self, generators) -> list[WeylElement]:
        """Subgroup generated by the given elements, sorted deterministically."""
        e = self.identity
        seen = {e.root_perm: e}
        frontier = [e]
        gens = list(generators)
        while frontier:
            nxt = []
            for w in frontier:
                for s in gens:
                    v = s * w
                    if v.root_perm not in seen:
                        seen[v.root_perm] = v
                        nxt.append(v)
            frontier = nxt
        return sorted(seen.values(), key=WeylElement.sort_key)


@lru_cache(maxsize=None)
def weyl_group(rs: RootSystem) -> WeylGroup:
    return WeylGroup(rs)


def length(w: WeylElement) -> int:
    return w.length


def reduced_word(rs: RootSystem, w: WeylElement) -> list[int]:
    """A reduced word (simple-reflection positions, 0-based) multiplying to ``w``."""
    simple = [reflection(rs, k) for k in rs.simple_roots]
    word: list[int] = []
    n = rs.n_pos
    while not w.is_identity:
        for i, k in enumerate(rs.simple_roots):
            if w.root_perm[k] >= n:  # right descent
                w = w * simple[i]
                word.append(i)
                break
    return word[::-1]


def from_word(rs: RootSystem, word) -> WeylElement:
    w = identity_element(rs)
    for i in word:
        w = w * reflection(rs, rs.simple_roots[i])
    return w


def parabolic_subgroup(rs: RootSystem, subset) -> list[WeylElement]:
    """``W_I`` for a set of simple-root positions ``I``."""
    W = weyl_group(rs)
    return W.closure(reflection(rs, rs.simple_roots[i]) for i in sorted(subset))


def act_on_vector(w: WeylElement, x) -> tuple:
    return tuple(dot(row, x) for row in w.matrix)


# Simple-root names used on the command line and in reports.
def simple_root_names(rs: RootSystem) -> list[str]:
    """Human names of the simple roots in Bourbaki order.

    Rank-two systems use ``alpha``/``beta`` with ``alpha`` the short root where
    lengths differ; ``D4`` uses ``1``, ``*``, ``2``, ``3`` with ``*`` the
    trivalent node; everything else uses ``1..r``.
    """
    if rs.rank == 2 and rs.series in ("A", "B", "C", "G2"):
        lens = [dot(rs.roots[k], rs.roots[k]) for k in rs.simple_roots]
        if rs.series == "A" or lens[0] == lens[1]:
            return ["alpha", "beta"]
        return ["alpha", "beta"] if lens[0] < lens[1] else ["beta", "alpha"]
    if rs.series == "D" and rs.rank == 4:
        return ["1", "*", "2", "3"]
    return [str(i + 1) for i in range(rs.rank)]


def parse_simple_subset(rs: RootSystem, text: str) -> frozenset:
    """Parse a set of simple roots such as ``alpha``, ``alpha,beta``, ``*``, ``1,2`` or ``none``."""
    names = simple_root_names(rs)
    t = text.strip()
    if t.lower() in ("", "none", "empty", "b", "borel"):
        return frozenset()
    if t.lower() in ("all", "g", "full"):
        return frozenset(range(rs.rank))
    out = set()
    for tok in t.replace("{", "").replace("}", "").split(","):
        tok = tok.strip()
        if tok.startswith("alpha") and tok not in names:
            tok = tok[len("alpha"):] or tok
        if tok in names:
            out.add(names.index(tok))
        else:
            raise ValueError(f"unknown simple root {tok!r}; expected one of {names}")
    return frozenset(out)
