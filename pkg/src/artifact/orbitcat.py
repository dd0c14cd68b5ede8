"""Finite linear categories with a finite group action, on finite-dimensional inputs.

Everything is exact linear algebra over the rationals.  A category is given by
basis morphisms and structure constants; its total algebra is the direct sum
of all Hom spaces.  A strict group action permutes objects and acts linearly
on morphisms.  From these we build the semidirect product, the invariant and
coinvariant orbit categories, the corner algebra at the averaging idempotent
and the induction/invariants descent for modules.

Vectors are dense tuples of Fractions indexed by the basis of the relevant
space.  The corpus is small and made of hand-built examples, not of the
infinite-dimensional categories met elsewhere in the package.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .errors import NotFreeAction, ShapeMismatch
from .linalg import identity, inverse, matmul, matvec, nullspace, rank, rref, solve, transpose

Vec = tuple


def _zero(n: int) -> Vec:
    return (Fraction(0),) * n


def _unit(n: int, i: int) -> Vec:
    return tuple(Fraction(int(k == i)) for k in range(n))


def _add(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def _scale(c, u: Vec) -> Vec:
    return tuple(c * a for a in u)


def _comb(vectors: Sequence[Vec], coeffs: Sequence, n: int) -> Vec:
    out = [Fraction(0)] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for k, x in enumerate(v):
                if x:
                    out[k] += c * x
    return tuple(out)


def _coords(basis: Sequence[Vec], v: Vec):
    """Coordinates of ``v`` in ``basis`` or None."""
    if not basis:
        return () if not any(v) else None
    return solve(transpose(basis), v)


# ---------------------------------------------------------------------- groups


class FiniteGroup:
    """A finite group given by its multiplication table on ``0..n-1``."""

    def __init__(self, table: Sequence[Sequence[int]], names: Sequence[str] | None = None):
        self.table = [list(r) for r in table]
        n = len(self.table)
        self.names = list(names) if names else [str(i) for i in range(n)]
        self.e = next(i for i in range(n) if all(self.table[i][j] == j for j in range(n)))
        self._inv = [next(j for j in range(n) if self.table[i][j] == self.e) for i in range(n)]

    def __len__(self) -> int:
        return len(self.table)

    def __iter__(self):
        return iter(range(len(self.table)))

    def mul(self, g: int, h: int) -> int:
        return self.table[g][h]

    def inv(self, g: int) -> int:
        return self._inv[g]


def cyclic_group(k: int) -> FiniteGroup:
    return FiniteGroup([[(i + j) % k for j in range(k)] for i in range(k)])


def trivial_group() -> FiniteGroup:
    return cyclic_group(1)


def klein_group() -> FiniteGroup:
    els = [(a, b) for a in range(2) for b in range(2)]
    return FiniteGroup([[els.index(((a + c) % 2, (b + d) % 2)) for (c, d) in els] for (a, b) in els])


# ---------------------------------------------------------------------- algebras


class Algebra:
    """A finite-dimensional algebra: ``mult[i][j]`` is the product of basis elements ``i`` and ``j``."""

    def __init__(self, labels: Sequence[str], mult, unit: Vec):
        self.labels = list(labels)
        self.dim = len(self.labels)
        self.mult = mult
        self.unit = tuple(unit)

    def mul(self, x: Vec, y: Vec) -> Vec:
        out = [Fraction(0)] * self.dim
        for i, a in enumerate(x):
            if not a:
                continue
            row = self.mult[i]
            for j, b in enumerate(y):
                if not b:
                    continue
                for k, c in enumerate(row[j]):
                    if c:
                        out[k] += a * b * c
        return tuple(out)

    def basis(self, i: int) -> Vec:
        return _unit(self.dim, i)

    def is_associative(self) -> bool:
        e = [self.basis(i) for i in range(self.dim)]
        return all(self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)) for a in e for b in e for c in e)

    def is_unital(self) -> bool:
        return all(self.mul(self.unit, self.basis(i)) == self.basis(i) == self.mul(self.basis(i), self.unit)
                   for i in range(self.dim))

    def structure_constants(self) -> dict:
        return {(self.labels[i], self.labels[j]): {self.labels[k]: c for k, c in enumerate(self.mult[i][j]) if c}
                for i in range(self.dim) for j in range(self.dim)}

    def left_matrix(self, x: Vec) -> tuple:
        """Matrix of ``y -> x y``."""
        cols = [self.mul(x, self.basis(j)) for j in range(self.dim)]
        return transpose(cols)


def algebra_from_table(labels, products: dict, unit: dict) -> Algebra:
    """Build an algebra from ``{(a, b): {c: coeff}}`` and a unit ``{label: coeff}``."""
    n = len(labels)
    idx = {l: i for i, l in enumerate(labels)}
    mult = [[_zero(n) for _ in range(n)] for _ in range(n)]
    for (a, b), v in products.items():
        mult[idx[a]][idx[b]] = tuple(Fraction(v.get(l, 0)) for l in labels)
    return Algebra(labels, mult, tuple(Fraction(unit.get(l, 0)) for l in labels))


def matrix_algebra(n: int) -> Algebra:
    labels = [f"E{i}{j}" for i in range(n) for j in range(n)]
    prods = {}
    for i, j, k, l in product(range(n), repeat=4):
        prods[(f"E{i}{j}", f"E{k}{l}")] = {f"E{i}{l}": 1} if j == k else {}
    return algebra_from_table(labels, prods, {f"E{i}{i}": 1 for i in range(n)})


# ---------------------------------------------------------------------- categories


class FiniteLinearCategory:
    """Objects, basis morphisms per ordered pair and composition structure constants."""

    def __init__(self, objects: Sequence, homs: dict, comp: dict, identities: dict, validate: bool = True):
        self.objects = list(objects)
        self.basis: list[tuple[str, object, object]] = []
        for x in self.objects:
            for y in self.objects:
                for lab in homs.get((x, y), []):
                    self.basis.append((lab, x, y))
        self.index = {b[0]: i for i, b in enumerate(self.basis)}
        if len(self.index) != len(self.basis):
            raise ValueError("basis labels must be unique")
        n = len(self.basis)
        self.table: dict = {}
        for (lb, la), v in comp.items():
            self.table[(self.index[lb], self.index[la])] = self.vector(v)
        self.ids = {x: self.vector(v) if isinstance(v, dict) else _unit(n, self.index[v]) for x, v in identities.items()}
        if validate:
            self.validate()

    def vector(self, v: dict) -> Vec:
        out = [Fraction(0)] * len(self.basis)
        for lab, c in v.items():
            out[self.index[lab]] += Fraction(c)
        return tuple(out)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def hom(self, x, y) -> list[int]:
        return [i for i, (_, s, t) in enumerate(self.basis) if s == x and t == y]

    def composable(self, i: int, j: int) -> bool:
        """Basis ``i`` after basis ``j``."""
        return self.basis[j][2] == self.basis[i][1]

    def compose(self, vb: Vec, va: Vec) -> Vec:
        n = self.dim
        out = [Fraction(0)] * n
        for i, b in enumerate(vb):
            if not b:
                continue
            for j, a in enumerate(va):
                if not a or not self.composable(i, j):
                    continue
                r = self.table.get((i, j))
                if r is None:
                    continue
                for k, c in enumerate(r):
                    if c:
                        out[k] += a * b * c
        return tuple(out)

    def validate(self) -> None:
        n = self.dim
        for (i, j), v in self.table.items():
            if not self.composable(i, j):
                raise ValueError("structure constant given for a non-composable pair")
            src, dst = self.basis[j][1], self.basis[i][2]
            if any(c and (self.basis[k][1], self.basis[k][2]) != (src, dst) for k, c in enumerate(v)):
                raise ValueError("composite lands in the wrong Hom space")
        for i, (_, x, y) in enumerate(self.basis):
            e = _unit(n, i)
            if self.compose(self.ids[y], e) != e or self.compose(e, self.ids[x]) != e:
                raise ValueError(f"identity law fails at {self.basis[i][0]}")
        for i in range(n):
            for j in range(n):
                if not self.composable(i, j):
                    continue
                for k in range(n):
                    if not self.composable(j, k):
                        continue
                    a, b, c = _unit(n, i), _unit(n, j), _unit(n, k)
                    if self.compose(self.compose(a, b), c) != self.compose(a, self.compose(b, c)):
                        raise ValueError("composition is not associative")

    def to_json(self) -> dict:
        return {
            "objects": [str(x) for x in self.objects],
            "homs": {f"{x}->{y}": [self.basis[i][0] for i in self.hom(x, y)] for x in self.objects for y in self.objects},
        }


def total_algebra(V: FiniteLinearCategory) -> Algebra:
    """``A(V)``: all morphisms, with composition as product (zero when not composable)."""
    n = V.dim
    mult = [[V.compose(_unit(n, i), _unit(n, j)) for j in range(n)] for i in range(n)]
    unit = _zero(n)
    for x in V.objects:
        unit = _add(unit, V.ids[x])
    return Algebra([b[0] for b in V.basis], mult, unit)


def object_idempotents(V: FiniteLinearCategory) -> dict:
    return dict(V.ids)


def category_from_algebra(A: Algebra, obj="*") -> FiniteLinearCategory:
    """The one-object category with endomorphism algebra ``A``."""
    labels = A.labels
    comp = {(labels[i], labels[j]): {labels[k]: c for k, c in enumerate(A.mult[i][j]) if c}
            for i in range(A.dim) for j in range(A.dim)}
    return FiniteLinearCategory([obj], {(obj, obj): labels}, comp,
                                {obj: {labels[k]: c for k, c in enumerate(A.unit) if c}})


def poset_category(elements: Sequence, relations: Sequence[tuple]) -> FiniteLinearCategory:
    """Linear envelope of a finite poset; ``relations`` lists the strict pairs ``x < y`` (transitively closed)."""
    less = set(relations)
    homs, ids = {}, {}
    for x in elements:
        homs[(x, x)] = [f"1_{x}"]
        ids[x] = f"1_{x}"
    for x, y in less:
        homs[(x, y)] = [f"{x}<{y}"]
    def arrow(x, y):
        return f"1_{x}" if x == y else f"{x}<{y}"
    comp = {}
    pairs = [(x, x) for x in elements] + list(less)
    for (x, y) in pairs:
        for (y2, z) in pairs:
            if y2 == y:
                comp[(arrow(y, z), arrow(x, y))] = {arrow(x, z): 1}
    return FiniteLinearCategory(list(elements), homs, comp, ids)


# ---------------------------------------------------------------------- actions


class StrictAction:
    """A finite group acting on a category by permuting objects and linearly on morphisms."""

    def __init__(self, V: FiniteLinearCategory, group: FiniteGroup, obj_perm: Sequence[dict], maps: Sequence,
                 validate: bool = True):
        self.V = V
        self.G = group
        self.obj_perm = [dict(p) for p in obj_perm]
        n = V.dim
        self.mats = []
        for m in maps:
            if isinstance(m, dict):
                cols = []
                for i, (lab, _, _) in enumerate(V.basis):
                    img = m.get(lab, lab)
                    cols.append(V.vector(img if isinstance(img, dict) else {img: 1}))
                self.mats.append(transpose(cols))
            else:
                self.mats.append(tuple(tuple(Fraction(x) for x in r) for r in m))
        if len(self.mats) != len(group) or len(self.obj_perm) != len(group):
            raise ShapeMismatch("one object permutation and one matrix per group element")
        if any(len(m) != n for m in self.mats):
            raise ShapeMismatch("matrices must act on the whole morphism space")
        if validate:
            self.validate()

    def act(self, g: int, v: Vec) -> Vec:
        return matvec(self.mats[g], v)

    def act_obj(self, g: int, x):
        return self.obj_perm[g][x]

    def is_free(self) -> bool:
        return all(self.act_obj(g, x) != x for g in self.G if g != self.G.e for x in self.V.objects)

    def orbits(self) -> list[list]:
        seen, out = set(), []
        for x in self.V.objects:
            if x in seen:
                continue
            orb = []
            for y in self.V.objects:
                if any(self.act_obj(g, x) == y for g in self.G):
                    orb.append(y)
                    seen.add(y)
            out.append(orb)
        return out

    def validate(self) -> None:
        V, G, n = self.V, self.G, self.V.dim
        for g in G:
            for i, (_, x, y) in enumerate(V.basis):
                img = self.act(g, _unit(n, i))
                gx, gy = self.act_obj(g, x), self.act_obj(g, y)
                if any(c and (V.basis[k][1], V.basis[k][2]) != (gx, gy) for k, c in enumerate(img)):
                    raise ValueError("group element does not respect Hom spaces")
            for x in V.objects:
                if self.act(g, V.ids[x]) != V.ids[self.act_obj(g, x)]:
                    raise ValueError("identities are not preserved")
            for i in range(n):
                for j in range(n):
                    if V.composable(i, j):
                        a, b = _unit(n, i), _unit(n, j)
                        if self.act(g, V.compose(a, b)) != V.compose(self.act(g, a), self.act(g, b)):
                            raise ValueError("action is not functorial")
        for g in G:
            for h in G:
                gh = G.mul(g, h)
                for x in V.objects:
                    if self.act_obj(g, self.act_obj(h, x)) != self.act_obj(gh, x):
                        raise ValueError("object action is not a group action")
                for i in range(n):
                    e = _unit(n, i)
                    if self.act(g, self.act(h, e)) != self.act(gh, e):
                        raise ValueError("action is not strict")


def algebra_action_ok(A: Algebra, G: FiniteGroup, mats) -> bool:
    """Each matrix is a unital algebra automorphism and the assignment is a homomorphism."""
    e = [A.basis(i) for i in range(A.dim)]
    for g in G:
        m = mats[g]
        if matvec(m, A.unit) != A.unit:
            return False
        if any(matvec(m, A.mul(a, b)) != A.mul(matvec(m, a), matvec(m, b)) for a in e for b in e):
            return False
        for h in G:
            if any(matvec(m, matvec(mats[h], a)) != matvec(mats[G.mul(g, h)], a) for a in e):
                return False
    return True


def invariant_basis(mats: Sequence, G: FiniteGroup, support: Sequence[int] | None = None, n: int | None = None) -> list[Vec]:
    """Basis of the fixed vectors of all group elements, inside the span of ``support``."""
    n = n if n is not None else len(mats[0])
    support = list(range(n)) if support is None else list(support)
    rows = []
    for g in G:
        m = mats[g]
        for r in range(n):
            rows.append([m[r][s] - (1 if r == s else 0) for s in support])
    if all(not any(r) for r in rows):
        sols = [_unit(len(support), k) for k in range(len(support))]
    else:
        sols = nullspace(rows, len(support))
    out = []
    for s in sols:
        v = [Fraction(0)] * n
        for k, idx in enumerate(support):
            v[idx] = s[k]
        out.append(tuple(v))
    return out


# ---------------------------------------------------------------------- semidirect products


def semidirect(V: FiniteLinearCategory, action: StrictAction) -> FiniteLinearCategory:
    """``V x| G``: morphisms ``V -> W`` are sums of ``(xi, g)`` with ``xi: gV -> W``."""
    G = action.G
    n = V.dim
    homs: dict = {}
    labels = {}
    for g in G:
        for i, (lab, x, y) in enumerate(V.basis):
            src = action.act_obj(G.inv(g), x)
            name = f"({lab},{G.names[g]})"
            homs.setdefault((src, y), []).append(name)
            labels[(i, g)] = name
    comp = {}
    for (i, g), nb in labels.items():
        for (j, h), na in labels.items():
            # (xi, g) o (zeta, h) = (xi o g(zeta), gh)
            if V.basis[j][2] != action.act_obj(G.inv(g), V.basis[i][1]):
                continue
            img = V.compose(_unit(n, i), action.act(g, _unit(n, j)))
            gh = G.mul(g, h)
            comp[(nb, na)] = {labels[(k, gh)]: c for k, c in enumerate(img) if c}
    ids = {x: {labels[(k, G.e)]: c for k, c in enumerate(V.ids[x]) if c} for x in V.objects}
    return FiniteLinearCategory(V.objects, homs, comp, ids)


def twisted_group_algebra(A: Algebra, G: FiniteGroup, mats) -> Algebra:
    """``A[G]`` with ``(a, g)(b, h) = (a g(b), gh)``."""
    n = A.dim
    labels = [f"({A.labels[i]},{G.names[g]})" for g in G for i in range(n)]
    pos = {(i, g): g * n + i for g in G for i in range(n)}
    N = len(labels)
    mult = [[_zero(N) for _ in range(N)] for _ in range(N)]
    for (i, g), p in pos.items():
        for (j, h), q in pos.items():
            prod_ = A.mul(A.basis(i), matvec(mats[g], A.basis(j)))
            gh = G.mul(g, h)
            v = [Fraction(0)] * N
            for k, c in enumerate(prod_):
                if c:
                    v[pos[(k, gh)]] = c
            mult[p][q] = tuple(v)
    unit = [Fraction(0)] * N
    for k, c in enumerate(A.unit):
        unit[pos[(k, G.e)]] = c
    return Algebra(labels, mult, tuple(unit))


def semidirect_vs_twisted(V: FiniteLinearCategory, action: StrictAction) -> dict:
    """Compare ``A(V x| G)`` with ``A(V)[G]`` through the basis match ``(xi, g) <-> (xi, g)``."""
    S = total_algebra(semidirect(V, action))
    T = twisted_group_algebra(total_algebra(V), action.G, action.mats)
    same_labels = sorted(S.labels) == sorted(T.labels)
    match = same_labels and S.structure_constants() == T.structure_constants() and \
        dict(zip(S.labels, S.unit)) == dict(zip(T.labels, T.unit))
    return {"dim_semidirect": S.dim, "dim_twisted": T.dim, "match": match}


# ---------------------------------------------------------------------- orbit categories


def _orbit_name(orb) -> str:
    return "{" + ",".join(str(x) for x in orb) + "}"


def invariant_category(V: FiniteLinearCategory, action: StrictAction) -> FiniteLinearCategory:
    """Objects are orbits; ``Hom(O1, O2) = (sum of Hom(V1, V2))^G``; composition is the product in ``A(V)``."""
    orbs = action.orbits()
    names = [_orbit_name(o) for o in orbs]
    homs, comp, ids = {}, {}, {}
    vecs: dict = {}
    for a, O1 in enumerate(orbs):
        for b, O2 in enumerate(orbs):
            support = [i for i, (_, x, y) in enumerate(V.basis) if x in O1 and y in O2]
            basis = invariant_basis(action.mats, action.G, support, V.dim) if support else []
            labs = [f"{names[a]}->{names[b]}#{k}" for k in range(len(basis))]
            homs[(names[a], names[b])] = labs
            vecs[(a, b)] = (labs, basis)
    for a, O in enumerate(orbs):
        labs, basis = vecs[(a, a)]
        e = _zero(V.dim)
        for x in O:
            e = _add(e, V.ids[x])
        c = _coords(basis, e)
        ids[names[a]] = {labs[k]: x for k, x in enumerate(c) if x}
    for a in range(len(orbs)):
        for b in range(len(orbs)):
            la, ba = vecs[(a, b)]
            for c_ in range(len(orbs)):
                lb, bb = vecs[(b, c_)]
                lc, bc = vecs[(a, c_)]
                for p, u in zip(la, ba):
                    for q, v in zip(lb, bb):
                        w = V.compose(v, u)
                        co = _coords(bc, w)
                        if co is None:
                            raise AssertionError("invariant composite left the invariant space")
                        comp[(q, p)] = {lc[k]: x for k, x in enumerate(co) if x}
    cat = FiniteLinearCategory(names, homs, comp, ids)
    cat.embedding = {lab: vec for key, (labs, basis) in vecs.items() for lab, vec in zip(labs, basis)}
    return cat


def coinvariant_category(V: FiniteLinearCategory, action: StrictAction) -> FiniteLinearCategory:
    """For a free object action: ``Hom(O1, O2) = sum over y in O2 of Hom(r1, y)`` with ``r1`` the orbit representative.

    Composing ``a: r1 -> y`` with ``b: r2 -> z`` uses the unique ``g`` with ``g r2 = y``; the result is ``g(b) o a``.
    """
    if not action.is_free():
        raise NotFreeAction("coinvariants need a free action on objects")
    G = action.G
    orbs = action.orbits()
    names = [_orbit_name(o) for o in orbs]
    rep = [o[0] for o in orbs]
    orbit_of = {x: k for k, o in enumerate(orbs) for x in o}
    homs, comp, ids = {}, {}, {}
    label = {}
    for a, r in enumerate(rep):
        for i, (lab, x, y) in enumerate(V.basis):
            if x == r:
                name = f"[{lab}]"
                homs.setdefault((names[a], names[orbit_of[y]]), []).append(name)
                label[i] = name
    n = V.dim
    for i, na in label.items():
        y = V.basis[i][2]
        for j, nb in label.items():
            r2 = V.basis[j][1]
            if orbit_of[r2] != orbit_of[y]:
                continue
            g = next(g for g in G if action.act_obj(g, r2) == y)
            w = V.compose(action.act(g, _unit(n, j)), _unit(n, i))
            comp[(nb, na)] = {label[k]: c for k, c in enumerate(w) if c}
    for a, r in enumerate(rep):
        ids[names[a]] = {label[k]: c for k, c in enumerate(V.ids[r]) if c}
    return FiniteLinearCategory(names, homs, comp, ids)


def coinvariant_vs_invariant(V: FiniteLinearCategory, action: StrictAction) -> dict:
    """The map ``[a] -> sum_g g(a)`` from coinvariants to invariants: bijective and multiplicative."""
    C = coinvariant_category(V, action)
    I = invariant_category(V, action)
    G, n = action.G, V.dim
    def phi_vec(lab: str) -> Vec:
        i = V.index[lab[1:-1]]
        out = _zero(n)
        for g in G:
            out = _add(out, action.act(g, _unit(n, i)))
        return out
    dims_ok = all(len(C.hom(a, b)) == len(I.hom(a, b)) for a in C.objects for b in C.objects)
    bij_ok = True
    for a in C.objects:
        for b in C.objects:
            imgs = [phi_vec(C.basis[i][0]) for i in C.hom(a, b)]
            inv = [I.embedding[I.basis[i][0]] for i in I.hom(a, b)]
            if imgs and (rank(imgs) != len(imgs) or rank(imgs + inv) != len(inv)):
                bij_ok = False
    mult_ok = True
    for i in range(C.dim):
        for j in range(C.dim):
            if not C.composable(i, j):
                continue
            w = C.compose(_unit(C.dim, i), _unit(C.dim, j))
            lhs = _zero(n)
            for k, c in enumerate(w):
                if c:
                    lhs = _add(lhs, _scale(c, phi_vec(C.basis[k][0])))
            rhs = V.compose(phi_vec(C.basis[i][0]), phi_vec(C.basis[j][0]))
            if lhs != rhs:
                mult_ok = False
    return {"dims_match": dims_ok, "bijective": bij_ok and dims_ok, "multiplicative": mult_ok,
            "ok": dims_ok and bij_ok and mult_ok}


# ---------------------------------------------------------------------- the corner algebra


def corner_iso_check(V: FiniteLinearCategory, action: StrictAction) -> dict:
    """``A(V)^G`` against ``eps A(V x| G) eps`` with ``eps = (1/|G|) sum_g [g]``.

    The map is ``a -> (a, e) eps``.  Checked: it lands in the corner, is
    injective, hits the whole corner, is multiplicative and sends 1 to ``eps``.
    """
    G = action.G
    A = total_algebra(V)
    S = semidirect(V, action)
    B = total_algebra(S)
    inv = invariant_basis(action.mats, G, None, A.dim)
    # eps = (1/|G|) sum over g and objects x of (id_{gx}, g)
    eps = _zero(B.dim)
    for g in G:
        for x in V.objects:
            gx = action.act_obj(g, x)
            for k, c in enumerate(V.ids[gx]):
                if c:
                    eps = _add(eps, _scale(Fraction(c, len(G)), B.basis(S.index[f"({V.basis[k][0]},{G.names[g]})"])))
    def embed(a: Vec) -> Vec:
        out = _zero(B.dim)
        for k, c in enumerate(a):
            if c:
                out = _add(out, _scale(c, B.basis(S.index[f"({V.basis[k][0]},{G.names[G.e]})"])))
        return out
    def psi(a: Vec) -> Vec:
        return B.mul(embed(a), eps)
    idempotent = B.mul(eps, eps) == eps
    corner = [B.mul(B.mul(eps, B.basis(i)), eps) for i in range(B.dim)]
    corner_dim = rank(corner)
    imgs = [psi(a) for a in inv]
    img_rank = rank(imgs) if imgs else 0
    inside = (rank(corner + imgs) == corner_dim) if imgs else True
    mult = all(psi(A.mul(a, b)) == B.mul(psi(a), psi(b)) for a in inv for b in inv)
    unit_ok = psi(A.unit) == eps
    inv_cat = invariant_category(V, action)
    dims = {"A(V)^G": len(inv), "corner": corner_dim, "A(V^G)": inv_cat.dim}
    ok = (idempotent and inside and img_rank == len(inv) == corner_dim == inv_cat.dim and mult and unit_ok)
    return {"dims": dims, "idempotent": idempotent, "injective": img_rank == len(inv),
            "surjective": inside and img_rank == corner_dim, "multiplicative": mult, "unit": unit_ok,
            "free_on_objects": action.is_free(), "ok": ok}


# ---------------------------------------------------------------------- descent for modules


@dataclass
class Module:
    """A left module over a subalgebra with basis ``sub_basis`` (vectors in the big algebra)."""

    sub_basis: list
    mats: list  # one square matrix per element of sub_basis
    dim: int


def invariant_subalgebra(A: Algebra, G: FiniteGroup, mats) -> list[Vec]:
    return invariant_basis(mats, G, None, A.dim)


def _sub_structure(A: Algebra, basis: list[Vec]) -> list:
    """``c[i][j]`` = coordinates of ``b_i b_j`` in ``basis``."""
    out = []
    for bi in basis:
        row = []
        for bj in basis:
            co = _coords(basis, A.mul(bi, bj))
            if co is None:
                raise AssertionError("invariants are not closed under products")
            row.append(co)
        out.append(row)
    return out


def _quotient(rows: list, n: int):
    """Projection onto ``Q^n / span(rows)``: returns (reduce function, quotient dimension)."""
    rows = [r for r in rows if any(r)]
    red, piv = rref(rows) if rows else ([], [])
    free = [k for k in range(n) if k not in piv]
    def project(v: Vec) -> Vec:
        v = list(v)
        for r, p in zip(red, piv):
            c = v[p]
            if c:
                for k in range(n):
                    v[k] -= c * r[k]
        return tuple(v[k] for k in free)
    return project, len(free), free


def random_module(A: Algebra, G: FiniteGroup, mats, seed: int, rank_: int = 2, relations: int = 1,
                  generators: Sequence[Sequence] | None = None) -> Module:
    """``B^rank / (B u_1 + ...)`` for ``B = A^G`` and seeded random (or given) vectors ``u``."""
    basis = invariant_subalgebra(A, G, mats)
    s = len(basis)
    c = _sub_structure(A, basis)
    n = s * rank_
    rng = random.Random(seed)
    if generators is None:
        generators = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(relations)]
    # left multiplication by b_i on B^rank
    def left(i):
        m = [[Fraction(0)] * n for _ in range(n)]
        for blk in range(rank_):
            for j in range(s):
                for k, x in enumerate(c[i][j]):
                    if x:
                        m[blk * s + k][blk * s + j] += x
        return m
    L = [left(i) for i in range(s)]
    sub = []
    for u in generators:
        u = tuple(Fraction(x) for x in u)
        sub.extend(matvec(Li, u) for Li in L)
    project, d, free = _quotient(sub, n)
    qmats = []
    for Li in L:
        cols = [project(matvec(Li, _unit(n, f))) for f in free]
        qmats.append(transpose(cols) if cols else ())
    # a seeded change of basis keeps the module honest about coordinates
    P = None
    for _ in range(50):
        cand = [[Fraction(rng.randint(-2, 2)) for _ in range(d)] for _ in range(d)]
        if d == 0 or rank(cand) == d:
            P = cand
            break
    if d and P is not None:
        Pi = inverse(P)
        qmats = [matmul(matmul(P, m), Pi) for m in qmats]
    return Module(basis, [tuple(tuple(r) for r in m) for m in qmats], d)


def regular_module(A: Algebra, G: FiniteGroup, mats) -> Module:
    basis = invariant_subalgebra(A, G, mats)
    c = _sub_structure(A, basis)
    s = len(basis)
    ms = [transpose([c[i][j] for j in range(s)]) for i in range(s)]
    return Module(basis, ms, s)


def module_ok(A: Algebra, N: Module) -> bool:
    """Unital and associative action of the subalgebra."""
    s = len(N.sub_basis)
    c = _sub_structure(A, N.sub_basis)
    one = _coords(N.sub_basis, A.unit)
    if one is None:
        return False
    unit = _comb([tuple(x for r in m for x in r) for m in N.mats], one, N.dim * N.dim)
    if N.dim and unit != tuple(x for r in identity(N.dim) for x in r):
        return False
    for i in range(s):
        for j in range(s):
            lhs = matmul(N.mats[i], N.mats[j]) if N.dim else ()
            rhs = _comb([tuple(x for r in m for x in r) for m in N.mats], c[i][j], N.dim * N.dim)
            if N.dim and tuple(x for r in lhs for x in r) != rhs:
                return False
    return True


def induce(A: Algebra, G: FiniteGroup, mats, N: Module):
    """``A (x)_B N`` with its G-action; returns (project, dimension, G-matrices, unit map matrix)."""
    a, d = A.dim, N.dim
    n = a * d
    rows = []
    for i in range(a):
        for k, b in enumerate(N.sub_basis):
            ab = A.mul(A.basis(i), b)
            for m in range(d):
                v = [Fraction(0)] * n
                for i2, x in enumerate(ab):
                    if x:
                        v[i2 * d + m] += x
                col = [N.mats[k][r][m] for r in range(d)]
                for r, x in enumerate(col):
                    if x:
                        v[i * d + r] -= x
                rows.append(tuple(v))
    project, q, free = _quotient(rows, n)
    gm = []
    for g in G:
        cols = []
        for f in free:
            i, m = divmod(f, d)
            ga = matvec(mats[g], A.basis(i))
            v = [Fraction(0)] * n
            for i2, x in enumerate(ga):
                if x:
                    v[i2 * d + m] += x
            cols.append(project(tuple(v)))
        gm.append(transpose(cols) if cols else ())
    unit_cols = []
    for m in range(d):
        v = [Fraction(0)] * n
        for i, x in enumerate(A.unit):
            if x:
                v[i * d + m] += x
        unit_cols.append(project(tuple(v)))
    return project, q, gm, unit_cols


def descent_unit_check(A: Algebra, G: FiniteGroup, mats, N: Module) -> dict:
    """The unit ``N -> (A (x)_B N)^G, n -> 1 (x) n`` is bijective."""
    _, q, gm, unit_cols = induce(A, G, mats, N)
    if q:
        inv = invariant_basis(gm, G, None, q)
    else:
        inv = []
    img_rank = rank(unit_cols) if unit_cols and q else 0
    inside = all(all(matvec(m, v) == v for m in gm) for v in unit_cols) if q else True
    ok = inside and img_rank == N.dim == len(inv)
    return {"module_dim": N.dim, "induced_dim": q, "invariants_dim": len(inv),
            "injective": img_rank == N.dim, "image_invariant": inside, "ok": ok}


def invariants_exact_check(G: FiniteGroup, gm: Sequence, seed: int) -> dict:
    """``dim M^G = dim S^G + dim (M/S)^G`` for a seeded G-stable subspace ``S``."""
    q = len(gm[0]) if gm and gm[0] else 0
    if q == 0:
        return {"ok": True, "dims": [0, 0, 0]}
    rng = random.Random(seed)
    v = tuple(Fraction(rng.randint(-2, 2)) for _ in range(q))
    S = [matvec(gm[g], v) for g in G]
    S = [tuple(r) for r in rref(S)[0]] if any(any(x) for x in S) else []
    s = len(S)
    # G on S, in the basis S
    on_sub = [transpose([_coords(S, matvec(gm[g], b)) for b in S]) if S else () for g in G]
    project, d, free = _quotient(S, q)
    on_quot = [transpose([project(matvec(gm[g], _unit(q, f))) for f in free]) if free else () for g in G]
    dm = len(invariant_basis(gm, G, None, q))
    ds = len(invariant_basis(on_sub, G, None, s)) if s else 0
    dq = len(invariant_basis(on_quot, G, None, d)) if d else 0
    return {"ok": dm == ds + dq, "dims": [dm, ds, dq]}


# ---------------------------------------------------------------------- the default corpus


def _swap_two_chains():
    V = poset_category(["a1", "b1", "a2", "b2"], [("a1", "b1"), ("a2", "b2")])
    G = cyclic_group(2)
    sw = {"a1": "a2", "a2": "a1", "b1": "b2", "b2": "b1"}
    ident = {x: x for x in V.objects}
    m = {"1_a1": "1_a2", "1_a2": "1_a1", "1_b1": "1_b2", "1_b2": "1_b1", "a1<b1": "a2<b2", "a2<b2": "a1<b1"}
    return V, StrictAction(V, G, [ident, sw], [{}, m])


def _chain_trivial():
    V = poset_category(["x", "y"], [("x", "y")])
    G = cyclic_group(2)
    ident = {x: x for x in V.objects}
    return V, StrictAction(V, G, [ident, ident], [{}, {}])


def _qxq_swap():
    A = algebra_from_table(["e1", "e2"], {("e1", "e1"): {"e1": 1}, ("e2", "e2"): {"e2": 1},
                                          ("e1", "e2"): {}, ("e2", "e1"): {}}, {"e1": 1, "e2": 1})
    V = category_from_algebra(A)
    G = cyclic_group(2)
    return V, StrictAction(V, G, [{"*": "*"}, {"*": "*"}], [{}, {"e1": "e2", "e2": "e1"}])


def _matrices_conjugation():
    A = matrix_algebra(2)
    V = category_from_algebra(A)
    G = cyclic_group(2)
    # conjugation by the permutation matrix swaps both indices
    m = {"E00": "E11", "E11": "E00", "E01": "E10", "E10": "E01"}
    return V, StrictAction(V, G, [{"*": "*"}, {"*": "*"}], [{}, m])


def _four_objects_klein():
    # two chains p_i -> q_i for i in Z/2 x Z/2 ... a free action of the Klein group on four copies
    names = [(a, b) for a in range(2) for b in range(2)]
    objs = [f"p{a}{b}" for a, b in names] + [f"q{a}{b}" for a, b in names]
    V = poset_category(objs, [(f"p{a}{b}", f"q{a}{b}") for a, b in names])
    G = klein_group()
    els = [(a, b) for a in range(2) for b in range(2)]
    perms, maps = [], []
    for (c, d) in els:
        def t(x):
            return f"{x[0]}{(int(x[1]) + c) % 2}{(int(x[2]) + d) % 2}"
        perms.append({x: t(x) for x in objs})
        m = {f"1_{x}": f"1_{t(x)}" for x in objs}
        for a, b in names:
            m[f"p{a}{b}<q{a}{b}"] = f"{t(f'p{a}{b}')}<{t(f'q{a}{b}')}"
        maps.append(m)
    return V, StrictAction(V, G, perms, maps)


def _one_object_sign():
    # Q[x]/(x^2) with x -> -x; fixes the object, acts nontrivially
    A = algebra_from_table(["1", "x"], {("1", "1"): {"1": 1}, ("1", "x"): {"x": 1}, ("x", "1"): {"x": 1},
                                        ("x", "x"): {}}, {"1": 1})
    V = category_from_algebra(A)
    G = cyclic_group(2)
    return V, StrictAction(V, G, [{"*": "*"}, {"*": "*"}], [{}, {"x": {"x": -1}}])


def _mixed_orbit():
    # a chain x -> y -> z with z fixed and x, y swapped with a parallel chain x' -> y' -> z
    V = poset_category(["x", "y", "x2", "y2", "z"],
                       [("x", "y"), ("y", "z"), ("x", "z"), ("x2", "y2"), ("y2", "z"), ("x2", "z")])
    G = cyclic_group(2)
    sw = {"x": "x2", "x2": "x", "y": "y2", "y2": "y", "z": "z"}
    m = {}
    for lab, s, t in V.basis:
        if s == t:
            m[lab] = f"1_{sw[s]}"
        else:
            m[lab] = f"{sw[s]}<{sw[t]}"
    return V, StrictAction(V, G, [{x: x for x in V.objects}, sw], [{}, m])


def _two_points_swap():
    V = poset_category(["u", "v"], [])
    G = cyclic_group(2)
    return V, StrictAction(V, G, [{"u": "u", "v": "v"}, {"u": "v", "v": "u"}], [{}, {"1_u": "1_v", "1_v": "1_u"}])


def default_corpus() -> dict:
    """Named (category, action) pairs used by the orbit-category checks."""
    return {
        "two-points-swap": _two_points_swap(),
        "chain-trivial": _chain_trivial(),
        "two-chains-swap": _swap_two_chains(),
        "QxQ-swap": _qxq_swap(),
        "M2-conjugation": _matrices_conjugation(),
        "dual-numbers-sign": _one_object_sign(),
        "klein-four-chains": _four_objects_klein(),
        "mixed-orbit": _mixed_orbit(),
    }


def algebra_corpus(corpus: dict | None = None) -> dict:
    """(algebra, group, matrices) triples for the descent checks."""
    out = {}
    for name, (V, act) in (corpus or default_corpus()).items():
        out[name] = (total_algebra(V), act.G, act.mats)
    return out


def run_appendix(seed: int = 0, corpus: dict | None = None) -> dict:
    """All orbit-category and descent checks on a corpus (the default one unless given)."""
    corpus = corpus or default_corpus()
    corner = {name: corner_iso_check(V, act) for name, (V, act) in corpus.items()}
    free = {name: coinvariant_vs_invariant(V, act) for name, (V, act) in corpus.items() if act.is_free()}
    twisted = {name: semidirect_vs_twisted(V, act) for name, (V, act) in corpus.items()}
    descent = []
    for name, (A, G, mats) in algebra_corpus(corpus).items():
        mods = [("regular", regular_module(A, G, mats))]
        for k, (r, rel) in enumerate([(1, 0), (2, 1), (3, 2)]):
            mods.append((f"random{k}", random_module(A, G, mats, seed=seed * 100 + k, rank_=r, relations=rel)))
        for mname, N in mods:
            rep = descent_unit_check(A, G, mats, N)
            _, _, gm, _ = induce(A, G, mats, N)
            exact = invariants_exact_check(G, gm, seed)
            descent.append({"algebra": name, "module": mname, **rep, "exact": exact["ok"],
                            "ok": rep["ok"] and exact["ok"] and module_ok(A, N)})
    ok = (all(r["ok"] for r in corner.values()) and all(r["ok"] for r in free.values())
          and all(r["match"] for r in twisted.values()) and all(r["ok"] for r in descent))
    return {"corner": corner, "coinvariants": free, "twisted": twisted, "descent": descent, "ok": ok}


def category_from_json(d: dict) -> FiniteLinearCategory:
    """``{"objects", "homs": {"x->y": [labels]}, "comp": [[b, a, {c: q}]], "identities": {x: label}}``."""
    homs = {}
    for key, labs in d["homs"].items():
        x, y = key.split("->")
        homs[(x, y)] = list(labs)
    comp = {(b, a): {k: Fraction(v) for k, v in out.items()} for b, a, out in d["comp"]}
    return FiniteLinearCategory(d["objects"], homs, comp, d["identities"])


def action_from_json(V: FiniteLinearCategory, d: dict) -> StrictAction:
    """``{"table": group table, "objects": [perm per element], "maps": [{label: label or {label: q}}]}``."""
    G = FiniteGroup(d["table"], d.get("names"))
    maps = [{k: ({a: Fraction(b) for a, b in v.items()} if isinstance(v, dict) else v) for k, v in m.items()}
            for m in d["maps"]]
    return StrictAction(V, G, d["objects"], maps)


def load_corpus(text: str) -> dict:
    """Parse a JSON corpus ``{name: {"category": ..., "action": ...}}``."""
    raw = json.loads(text)
    out = {}
    for name, item in raw.items():
        V = category_from_json(item["category"])
        out[name] = (V, action_from_json(V, item["action"]))
    return out


def corpus_json() -> str:
    """The default corpus as JSON: objects, Hom bases and group sizes."""
    out = {}
    for name, (V, act) in default_corpus().items():
        out[name] = {**V.to_json(), "group_order": len(act.G), "free": act.is_free()}
    return json.dumps(out, indent=2, sort_keys=True)
