"""The Weyl group acting on faces and flats of a root arrangement.

Group elements are handled mostly by their position in ``weyl_group(rs)``;
subgroups are explicit sorted lists of positions.  All supported groups are
small enough (at most 1152 elements) for exhaustive enumeration.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .arrangement import Arrangement, Flat, arrangement_of
from .errors import NotFreeAction
from .rootsys import reflection, simple_root_names, weyl_group


class WeylAction:
    """Faces, flats and the Weyl group of one root system, with the action between them."""

    def __init__(self, rs):
        self.rs = rs
        self.arr: Arrangement = arrangement_of(rs)
        self.W = weyl_group(rs)
        self._face_rows: dict = {}
        n = rs.n_pos
        # for each group element: positive root j -> (i, s) with w^{-1} beta_j = s * beta_i
        self._pull: list = []
        for w in self.W.elements:
            inv = w.inverse().root_perm
            row = []
            for j in range(n):
                k = inv[j]
                row.append((k, 1) if k < n else (k - n, -1))
            self._pull.append(tuple(row))
        self.simple_positions = [self.W.idx(reflection(rs, k)) for k in rs.simple_roots]

    # ------------------------------------------------------------------ action

    def w_index(self, w) -> int:
        return w if isinstance(w, int) else self.W.idx(w)

    def act_signs(self, w, signs: Sequence[int]) -> tuple:
        return tuple(s * signs[i] for i, s in self._pull[self.w_index(w)])

    def face_row(self, wi: int) -> tuple:
        """Permutation of face indices induced by the element at position ``wi``."""
        row = self._face_rows.get(wi)
        if row is None:
            by = self.arr.by_signs
            row = tuple(by[self.act_signs(wi, f.signs)] for f in self.arr.faces)
            self._face_rows[wi] = row
        return row

    def act(self, w, face) -> int:
        """Index of ``w . face``."""
        return self.face_row(self.w_index(w))[self.arr.idx(face)]

    def act_zero_set(self, w, zero_set: Iterable[int]) -> frozenset:
        z = set(zero_set)
        return frozenset(j for j, (i, _) in enumerate(self._pull[self.w_index(w)]) if i in z)

    def act_flat(self, w, flat: Flat) -> Flat:
        return self.arr.flat(self.act_zero_set(w, flat.zero_set))

    # ------------------------------------------------------------------ types and dominant faces

    def dominant(self, face) -> tuple[int, int]:
        """``(dominant face, w)`` with ``w . face`` in the closed dominant chamber."""
        f = self.arr.idx(face)
        w = self.W.idx(self.W.identity)
        simple = self.rs.simple_roots
        while True:
            signs = self.arr.faces[f].signs
            i = next((i for i, k in enumerate(simple) if signs[k] < 0), None)
            if i is None:
                return f, w
            s = self.simple_positions[i]
            f = self.face_row(s)[f]
            w = self.W.mul(s, w)

    def type_of(self, face) -> frozenset:
        d, _ = self.dominant(face)
        signs = self.arr.faces[d].signs
        return frozenset(i for i, k in enumerate(self.rs.simple_roots) if signs[k] == 0)

    def standard_face(self, subset: Iterable[int]) -> int:
        """The face of the standard parabolic of type ``subset`` (simple positions)."""
        rs = self.rs
        subset = frozenset(subset)
        signs = []
        for j in range(rs.n_pos):
            coeffs = rs.coefficients[j]
            support = {i for i, c in enumerate(coeffs) if c != 0}
            signs.append(0 if support <= subset else 1)
        return self.arr.by_signs[tuple(signs)]

    def type_name(self, subset: Iterable[int]) -> str:
        names = simple_root_names(self.rs)
        items = [names[i] for i in sorted(subset)]
        return "{" + ",".join(items) + "}"

    # ------------------------------------------------------------------ subgroups

    def stabilizer(self, face) -> list[int]:
        f = self.arr.idx(face)
        return [wi for wi in range(len(self.W)) if self.face_row(wi)[f] == f]

    def pair_stabilizer(self, f, g) -> list[int]:
        f, g = self.arr.idx(f), self.arr.idx(g)
        return [wi for wi in range(len(self.W)) if self.face_row(wi)[f] == f and self.face_row(wi)[g] == g]

    def flat_stabilizer(self, flat: Flat) -> list[int]:
        z = flat.zero_set
        return [wi for wi in range(len(self.W)) if self.act_zero_set(wi, z) == z]

    def generated(self, gens: Iterable[int]) -> list[int]:
        e = self.W.idx(self.W.identity)
        seen = {e}
        frontier = [e]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.W.mul(g, x)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def parabolic(self, subset: Iterable[int]) -> list[int]:
        return self.generated(self.simple_positions[i] for i in sorted(subset))

    def reflection_index(self, pos_root: int) -> int:
        return self.W.idx(reflection(self.rs, self.rs.positive_roots[pos_root]))

    # ------------------------------------------------------------------ orbits

    def face_orbit(self, face) -> list[int]:
        f = self.arr.idx(face)
        seen = {f}
        frontier = [f]
        while frontier:
            nxt = []
            for x in frontier:
                for s in self.simple_positions:
                    y = self.face_row(s)[x]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def flat_orbit(self, flat: Flat) -> list[frozenset]:
        seen = {flat.zero_set}
        frontier = [flat.zero_set]
        while frontier:
            nxt = []
            for z in frontier:
                for s in self.simple_positions:
                    y = self.act_zero_set(s, z)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen, key=lambda z: (len(z), sorted(z)))


@dataclass
class OrbitTable:
    face_orbits: list  # list of dicts: type, dominant, members
    type_of: dict  # face index -> frozenset of simple positions
    flat_orbits: list  # list of lists of zero sets
    assoc_map: dict  # frozenset I -> flat orbit index

    def orbit_of_type(self, subset) -> dict:
        subset = frozenset(subset)
        return next(o for o in self.face_orbits if o["type"] == subset)


@dataclass
class LeviGroupData:
    flat: Flat
    stab: list
    levi_weyl: list
    quotient_reps: list
    structure: dict = field(default_factory=dict)

    @property
    def quotient_order(self) -> int:
        return len(self.quotient_reps)


@lru_cache(maxsize=None)
def weyl_action(rs) -> WeylAction:
    return WeylAction(rs)


def act(rs, w, face) -> int:
    return weyl_action(rs).act(w, face)


def build_orbit_table(rs) -> OrbitTable:
    wa = weyl_action(rs)
    arr = wa.arr
    face_orbits = []
    type_of = {}
    subsets = [frozenset(c) for k in range(rs.rank + 1) for c in combinations(range(rs.rank), k)]
    for I in subsets:
        d = wa.standard_face(I)
        members = wa.face_orbit(d)
        face_orbits.append({"type": I, "dominant": d, "members": members, "size": len(members)})
        for m in members:
            type_of[m] = I
    assert len(type_of) == len(arr.faces), "face orbits do not cover every face"
    flat_orbits: list = []
    where: dict = {}
    for fl in arr.flats():
        if fl.zero_set in where:
            continue
        orb = wa.flat_orbit(fl)
        for z in orb:
            where[z] = len(flat_orbits)
        flat_orbits.append(orb)
    assoc = {o["type"]: where[arr.faces[o["dominant"]].zero_set] for o in face_orbits}
    return OrbitTable(face_orbits, type_of, flat_orbits, assoc)


def abelian_invariants(elements: Sequence[int], mul, identity: int) -> list[int] | None:
    """Invariant factors of a finite abelian group given by a multiplication, or ``None`` if non-abelian."""
    els = list(elements)
    for a in els:
        for b in els:
            if mul(a, b) != mul(b, a):
                return None
    n = len(els)
    if n == 1:
        return []

    def power(g, k):
        r = identity
        for _ in range(k):
            r = mul(r, g)
        return r

    # primary decomposition from the counts |{g : g^(p^k) = 1}|
    primes = [p for p in range(2, n + 1) if n % p == 0 and all(p % q for q in range(2, p))]
    factors: list[int] = []
    for p in primes:
        counts = [1]
        k = 1
        while True:
            c = sum(1 for g in els if power(g, p ** k) == identity)
            counts.append(c)
            if c == counts[-2]:
                break
            k += 1
        # number of cyclic factors of order >= p^k equals log_p(counts[k]/counts[k-1])
        ranks = []
        for k in range(1, len(counts)):
            ratio = counts[k] // counts[k - 1]
            r = 0
            while ratio > 1:
                ratio //= p
                r += 1
            ranks.append(r)
        for k in range(len(ranks)):
            nxt = ranks[k + 1] if k + 1 < len(ranks) else 0
            factors.extend([p ** (k + 1)] * (ranks[k] - nxt))
    # combine primary parts into invariant factors d1 | d2 | ...
    by_prime: dict = {}
    for f in factors:
        p = next(q for q in primes if f % q == 0)
        by_prime.setdefault(p, []).append(f)
    length = max((len(v) for v in by_prime.values()), default=0)
    for v in by_prime.values():
        v.sort()
        v[:0] = [1] * (length - len(v))
    out = []
    for i in range(length):
        d = 1
        for v in by_prime.values():
            d *= v[i]
        out.append(d)
    return out


def describe_group(order: int, invariants: list[int] | None) -> str:
    if invariants is None:
        return f"non-abelian of order {order}"
    if not invariants:
        return "trivial"
    parts = Counter(invariants)
    return " x ".join(f"(Z/{d})^{c}" if c > 1 else f"Z/{d}" for d, c in sorted(parts.items()))


def levi_group_data(rs, flat: Flat, check: bool = True) -> LeviGroupData:
    wa = weyl_action(rs)
    W = wa.W
    stab = wa.flat_stabilizer(flat)
    levi = wa.generated(wa.reflection_index(j) for j in sorted(flat.zero_set))
    levi_set = set(levi)
    reps = []
    covered = set()
    for w in stab:  # sorted by (length, key); the first element of each coset is its minimum
        if w in covered:
            continue
        reps.append(w)
        for u in levi:
            covered.add(W.mul(w, u))
    # W(l) multiplication on representatives
    rep_of = {}
    for r in reps:
        for u in levi:
            rep_of[W.mul(r, u)] = r
    e = W.idx(W.identity)

    def qmul(a, b):
        return rep_of[W.mul(a, b)]

    inv = abelian_invariants(reps, qmul, e)
    data = LeviGroupData(flat, stab, levi, reps)
    data.structure = {
        "order": len(reps),
        "abelian_invariants": inv,
        "description": describe_group(len(reps), inv),
    }
    if check:
        for w in stab:
            for u in levi:
                conj = W.mul(W.mul(w, u), W.inv(w))
                if conj not in levi_set:
                    raise AssertionError("levi Weyl group is not normal in the stabilizer")
        chambers = wa.arr.chambers_of_flat(flat)
        for r in reps:
            if r == e:
                continue
            row = wa.face_row(r)
            for c in chambers:
                if row[c] == c:
                    raise NotFreeAction(f"element {r} fixes chamber {c} of {flat.id}")
    return data


def double_cosets(rs, W1: Sequence[int], W2: Sequence[int]) -> list[int]:
    """One representative per double coset ``W1 w W2``; the minimum under (length, key)."""
    W = weyl_group(rs)
    reps = []
    seen = set()
    for w in range(len(W)):
        if w in seen:
            continue
        reps.append(w)
        for a in W1:
            aw = W.mul(a, w)
            for b in W2:
                seen.add(W.mul(aw, b))
    return reps


def double_coset_of(rs, W1, W2, w: int, reps: Sequence[int]) -> int:
    W = weyl_group(rs)
    cls = {W.mul(W.mul(a, w), b) for a in W1 for b in W2}
    return next(r for r in reps if r in cls)


@dataclass
class OrbitPairBijection:
    p1: int
    p2: int
    pair_orbits: list  # list of (pair representative (p1, w.p2), w)
    double_coset_reps: list
    mapping: dict  # pair-orbit position -> double coset representative
    well_defined: bool
    bijective: bool

    @property
    def valid(self) -> bool:
        return self.well_defined and self.bijective

    def to_json(self) -> dict:
        return {
            "pair_orbits": len(self.pair_orbits),
            "double_cosets": len(self.double_coset_reps),
            "well_defined": self.well_defined,
            "bijective": self.bijective,
            "valid": self.valid,
        }


def orbit_pairs_vs_double_cosets(rs, p1, p2) -> OrbitPairBijection:
    """Match W-orbits on ``O1 x O2`` with ``W1\\W/W2`` and check the match exhaustively.

    ``p1`` and ``p2`` are faces; their stabilizers play the roles of ``W1`` and ``W2``.
    """
    wa = weyl_action(rs)
    W = wa.W
    p1, p2 = wa.arr.idx(p1), wa.arr.idx(p2)
    W1, W2 = wa.stabilizer(p1), wa.stabilizer(p2)
    reps = double_cosets(rs, W1, W2)
    rep_of_w = {}
    for r in reps:
        for a in W1:
            ar = W.mul(a, r)
            for b in W2:
                rep_of_w[W.mul(ar, b)] = r
    O1, O2 = wa.face_orbit(p1), wa.face_orbit(p2)
    # element carrying p2 to each member of O2
    carrier = {}
    for w in range(len(W)):
        carrier.setdefault(wa.face_row(w)[p2], w)
    # W-orbits of pairs, computed directly
    label: dict = {}
    orbits = []
    for a in O1:
        for b in O2:
            if (a, b) in label:
                continue
            k = len(orbits)
            stack = [(a, b)]
            label[(a, b)] = k
            members = []
            while stack:
                x, y = stack.pop()
                members.append((x, y))
                for s in wa.simple_positions:
                    row = wa.face_row(s)
                    nxt = (row[x], row[y])
                    if nxt not in label:
                        label[nxt] = k
                        stack.append(nxt)
            orbits.append(members)
    well_defined = True
    mapping = {}
    pair_reps = []
    for k, members in enumerate(orbits):
        images = {rep_of_w[carrier[y]] for x, y in members if x == p1}
        if len(images) != 1:
            well_defined = False
        img = min(images) if images else None
        mapping[k] = img
        y0 = min(y for x, y in members if x == p1) if images else None
        pair_reps.append(((p1, y0), carrier.get(y0)))
    bijective = well_defined and sorted(mapping.values()) == sorted(reps)
    return OrbitPairBijection(p1, p2, pair_reps, reps, mapping, well_defined, bijective)


def orbit_report(rs) -> dict:
    wa = weyl_action(rs)
    table = build_orbit_table(rs)
    levi = []
    for orb in table.flat_orbits:
        fl = wa.arr.flat(orb[0])
        data = levi_group_data(rs, fl)
        levi.append({
            "flat": fl.id,
            "dim": fl.dim,
            "orbit_size": len(orb),
            "stab_order": len(data.stab),
            "W_l_order": len(data.levi_weyl),
            "W(l)_order": data.quotient_order,
            "W(l)": data.structure["description"],
        })
    return {
        "schema_version": 1,
        "system": rs.name,
        "face_orbits": [
            {"type": wa.type_name(o["type"]), "size": o["size"], "dominant": wa.arr.faces[o["dominant"]].id}
            for o in table.face_orbits
        ],
        "flat_orbits": [{"size": len(orb), "dim": wa.arr.flat(orb[0]).dim, "representative": wa.arr.flat(orb[0]).id} for orb in table.flat_orbits],
        "levi": levi,
    }
