"""Sign-vector calculus of a central real hyperplane arrangement.

Faces are relatively open cones, recorded by one sign in ``{+1, 0, -1}`` per
hyperplane (for root arrangements: per positive root, in the frozen order).
All faces are generated from the cocircuits (the rays) by the Tits product,
which is closed on covectors, so no polyhedral enumeration is needed; every
face carries an exact witness point.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .errors import GenericityFailure
from .linalg import (
    as_fraction,
    dot,
    nullspace,
    primitive_integer,
    rank,
    sign,
    strict_feasible,
)

SIGN_CHARS = {1: "+", 0: "0", -1: "-"}


def token(signs: Sequence[int]) -> str:
    return "".join(SIGN_CHARS[s] for s in signs)


def parse_token(text: str) -> tuple:
    back = {"+": 1, "0": 0, "-": -1}
    if any(c not in back for c in text):
        raise ValueError(f"face token must be a string of +, 0, -: {text!r}")
    return tuple(back[c] for c in text)


@dataclass(frozen=True)
class Face:
    index: int
    signs: tuple
    dim: int
    witness: tuple

    @property
    def id(self) -> str:
        return token(self.signs)

    @property
    def zero_set(self) -> frozenset:
        return frozenset(i for i, s in enumerate(self.signs) if s == 0)

    def __repr__(self) -> str:
        return f"Face({self.id})"


@dataclass(frozen=True)
class Flat:
    zero_set: frozenset
    dim: int
    induced_walls: tuple  # each wall class is a frozenset of hyperplane indices

    @property
    def id(self) -> str:
        return "z" + ".".join(str(i) for i in sorted(self.zero_set)) if self.zero_set else "full"

    def __repr__(self) -> str:
        return f"Flat({self.id}, dim={self.dim})"


class Arrangement:
    """Central arrangement ``{x : form(x) = 0}`` in ``Q^ambient_dim``."""

    def __init__(self, forms: Sequence[Sequence], ambient_dim: int | None = None):
        self.forms = [tuple(as_fraction(x) for x in f) for f in forms]
        self.ambient_dim = ambient_dim if ambient_dim is not None else len(self.forms[0])
        self.n = len(self.forms)
        self.rank = rank(self.forms)
        self.lineality_dim = self.ambient_dim - self.rank
        self._rank_cache: dict = {}
        self._collinear_cache: dict = {}
        self._build_flats()
        self._build_faces()

    @classmethod
    def from_root_system(cls, rs) -> "Arrangement":
        arr = cls([rs.roots[k] for k in rs.positive_roots], rs.ambient_dim)
        arr.root_system = rs
        return arr

    # ------------------------------------------------------------------ flats

    def zero_rank(self, zero_set: Iterable[int]) -> int:
        key = frozenset(zero_set)
        r = self._rank_cache.get(key)
        if r is None:
            r = rank([self.forms[i] for i in sorted(key)]) if key else 0
            self._rank_cache[key] = r
        return r

    def close(self, subset: Iterable[int]) -> frozenset:
        """All hyperplanes containing the intersection of the given ones."""
        s = frozenset(subset)
        r = self.zero_rank(s)
        return frozenset(i for i in range(self.n) if i in s or self.zero_rank(s | {i}) == r)

    def _build_flats(self) -> None:
        levels = [{frozenset()}]
        while True:
            nxt = set()
            for z in levels[-1]:
                for i in range(self.n):
                    if i not in z:
                        nxt.add(self.close(z | {i}))
            if not nxt:
                break
            levels.append(nxt)
        self._flat_levels = levels
        self.flat_by_zero: dict = {}
        for lvl in levels:
            for z in lvl:
                self.flat_by_zero[z] = None  # filled lazily
        self._zero_sets = sorted(self.flat_by_zero, key=lambda z: (len(z), sorted(z)))

    def flat(self, zero_set: Iterable[int]) -> Flat:
        z = self.close(zero_set)
        f = self.flat_by_zero.get(z)
        if f is None:
            walls = {}
            for i in range(self.n):
                if i in z:
                    continue
                cls_ = self.close(z | {i})
                walls.setdefault(cls_, set()).add(i)
            classes = sorted((frozenset(v) for v in walls.values()), key=lambda c: min(c))
            f = Flat(z, self.ambient_dim - self.zero_rank(z), tuple(classes))
            self.flat_by_zero[z] = f
        return f

    def flats(self) -> list[Flat]:
        return [self.flat(z) for z in self._zero_sets]

    def span_flat(self, face) -> Flat:
        return self.flat(self.face(face).zero_set)

    # ------------------------------------------------------------------ faces

    def _build_faces(self) -> None:
        lines = [z for z in self._zero_sets if self.zero_rank(z) == self.rank - 1]
        self.cocircuit_vectors: dict = {}
        cocircuits = []
        for z in lines:
            basis = nullspace([self.forms[i] for i in sorted(z)], self.ambient_dim)
            v = next(b for b in basis if any(dot(self.forms[i], b) != 0 for i in range(self.n)))
            v = primitive_integer(v)
            for vv in (v, tuple(-x for x in v)):
                s = self.signs_of_point(vv)
                cocircuits.append(s)
                self.cocircuit_vectors[s] = vv
        zero = tuple(0 for _ in range(self.n))
        seen = {zero}
        order = [zero]
        frontier = [zero]
        while frontier:
            nxt = []
            for x in frontier:
                for y in cocircuits:
                    z = tuple(a if a != 0 else b for a, b in zip(x, y))
                    if z not in seen:
                        seen.add(z)
                        nxt.append(z)
            order.extend(nxt)
            frontier = nxt
        order.sort(key=lambda s: (-sum(1 for x in s if x == 0), tuple(-x for x in s)))
        self.faces: list[Face] = []
        self.by_signs: dict = {}
        self._pos = []
        self._neg = []
        for k, s in enumerate(order):
            self.by_signs[s] = k
            self._pos.append(sum(1 << i for i, x in enumerate(s) if x > 0))
            self._neg.append(sum(1 << i for i, x in enumerate(s) if x < 0))
        self._mask_index = {(p, q): k for k, (p, q) in enumerate(zip(self._pos, self._neg))}
        self.cocircuits = sorted(self.by_signs[s] for s in cocircuits)
        cocircuit_set = set(self.cocircuits)
        self.rays_of: list[tuple] = []
        for k, s in enumerate(order):
            rays = tuple(c for c in self.cocircuits if self._leq(c, k))
            self.rays_of.append(rays)
            if k in cocircuit_set:
                w = self.cocircuit_vectors[s]
            else:
                w = tuple(sum((self.cocircuit_vectors[order[c]][i] for c in rays), Fraction(0)) for i in range(self.ambient_dim))
            assert self.signs_of_point(w) == s, "witness does not realize its sign vector"
            dim = self.ambient_dim - self.zero_rank(i for i, x in enumerate(s) if x == 0)
            self.faces.append(Face(k, s, dim, w))
        self.zero = self.by_signs[zero]

    def signs_of_point(self, x: Sequence) -> tuple:
        return tuple(sign(dot(f, x)) for f in self.forms)

    def face_of_point(self, x: Sequence) -> int:
        return self.by_signs[self.signs_of_point(x)]

    def face(self, f) -> Face:
        if isinstance(f, Face):
            return f
        if isinstance(f, str):
            return self.faces[self.by_signs[parse_token(f)]]
        if isinstance(f, tuple):
            return self.faces[self.by_signs[f]]
        return self.faces[f]

    def idx(self, f) -> int:
        return f if isinstance(f, int) else self.face(f).index

    def __len__(self) -> int:
        return len(self.faces)

    @cached_property
    def chambers(self) -> list[int]:
        top = self.ambient_dim
        return [f.index for f in self.faces if f.dim == top]

    def faces_of_dim(self, d: int) -> list[int]:
        return [f.index for f in self.faces if f.dim == d]

    # ------------------------------------------------------------------ order / product

    def _leq(self, g: int, f: int) -> bool:
        pg, ng, pf, nf = self._pos[g], self._neg[g], self._pos[f], self._neg[f]
        return (pg & ~pf) == 0 and (ng & ~nf) == 0

    def leq(self, g, f) -> bool:
        """``g <= f``: the cone of ``g`` lies in the closure of the cone of ``f``."""
        return self._leq(self.idx(g), self.idx(f))

    def lt(self, g, f) -> bool:
        g, f = self.idx(g), self.idx(f)
        return g != f and self._leq(g, f)

    def comparable(self, g: int, f: int) -> bool:
        return self._leq(g, f) or self._leq(f, g)

    def zero_mask(self, f: int) -> int:
        return ((1 << self.n) - 1) & ~(self._pos[f] | self._neg[f])

    def tits(self, f: int, g: int) -> int:
        z = self.zero_mask(f)
        return self._mask_index[(self._pos[f] | (self._pos[g] & z), self._neg[f] | (self._neg[g] & z))]

    def tits_product(self, f, g) -> Face:
        """Sign rule: keep the signs of ``f`` and fill its zeros from ``g``."""
        return self.faces[self.tits(self.idx(f), self.idx(g))]

    def tits_oracle(self, f, g) -> Face:
        """Face of ``a + eps*c`` for witnesses ``a`` of ``f`` and ``c`` of ``g``, eps -> 0+."""
        a, c = self.face(f).witness, self.face(g).witness
        signs = []
        for form in self.forms:
            va, vc = dot(form, a), dot(form, c)
            signs.append(sign(va) if va != 0 else sign(vc))
        return self.faces[self.by_signs[tuple(signs)]]

    def negate(self, f: int) -> int:
        return self._mask_index[(self._neg[f], self._pos[f])]

    def closure_pairs(self) -> list[tuple[int, int]]:
        """Covering pairs ``(child, parent)`` of the closure order."""
        out = []
        by_dim: dict = {}
        for face in self.faces:
            by_dim.setdefault(face.dim, []).append(face.index)
        for face in self.faces:
            for g in by_dim.get(face.dim - 1, []):
                if self._leq(g, face.index):
                    out.append((g, face.index))
        return out

    def strict_closure_pairs(self) -> list[tuple[int, int]]:
        return [(g, f) for f in range(len(self.faces)) for g in range(len(self.faces)) if g != f and self._leq(g, f)]

    # ------------------------------------------------------------------ collinearity

    def _sign_compatible(self, f: int, g: int, h: int) -> bool:
        sf, sg, sh = self.faces[f].signs, self.faces[g].signs, self.faces[h].signs
        for a, b, c in zip(sf, sg, sh):
            if a == c or a == 0 or c == 0:
                want = a if a != 0 else c
                if b != want:
                    return False
        return True

    def _segment_faces(self, a: Sequence, c: Sequence) -> list[tuple[int, Fraction]]:
        """Faces met by the open segment ``(a, c)`` with a parameter for each."""
        ts = set()
        for form in self.forms:
            va, vc = dot(form, a), dot(form, c)
            if va != vc:
                t = va / (va - vc)
                if 0 < t < 1:
                    ts.add(t)
        pts = sorted(ts)
        cands = []
        prev = Fraction(0)
        for t in pts + [Fraction(1)]:
            cands.append((prev + t) / 2)
            if t < 1:
                cands.append(t)
            prev = t
        out = []
        for t in cands:
            x = tuple((1 - t) * ai + t * ci for ai, ci in zip(a, c))
            out.append((self.face_of_point(x), t))
        return out

    def collinearity_certificate(self, f, g, h):
        """Exact points ``(a, b, c)`` with ``a`` in f, ``b`` in g, ``c`` in h and ``b`` in ``(a, c)``.

        Returns ``None`` when no such points exist.
        """
        f, g, h = self.idx(f), self.idx(g), self.idx(h)
        key = (f, g, h)
        if key in self._collinear_cache:
            return self._collinear_cache[key]
        rev = (h, g, f)
        if rev in self._collinear_cache:
            cert = self._collinear_cache[rev]
            out = None if cert is None else (cert[2], cert[1], cert[0])
            self._collinear_cache[key] = out
            return out
        out = self._certificate(f, g, h)
        self._collinear_cache[key] = out
        return out

    def _certificate(self, f: int, g: int, h: int):
        if f == g and g == h:
            w = self.faces[f].witness
            return (w, w, w)
        if not self._sign_compatible(f, g, h):
            return None
        a, c = self.faces[f].witness, self.faces[h].witness
        for lam in (Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3), Fraction(1, 3)):
            cc = tuple(lam * x for x in c)
            for face, t in self._segment_faces(a, cc):
                if face == g:
                    b = tuple((1 - t) * ai + t * ci for ai, ci in zip(a, cc))
                    return (a, b, cc)
        # exact decision: b = a' + c' with a' in f, c' in h positive ray combinations
        rf = [self.cocircuit_vectors[self.faces[r].signs] for r in self.rays_of[f]]
        rh = [self.cocircuit_vectors[self.faces[r].signs] for r in self.rays_of[h]]
        gens = rf + rh
        k = len(gens)
        if k == 0:
            return None
        strict, equal = [], []
        for i in range(k):
            strict.append(tuple(Fraction(int(i == j)) for j in range(k)))
        for form, s in zip(self.forms, self.faces[g].signs):
            row = tuple(dot(form, v) for v in gens)
            if s == 0:
                if any(row):
                    equal.append(row)
            else:
                strict.append(tuple(s * x for x in row))
        y = strict_feasible(strict, equal, k)
        if y is None:
            return None
        ap = tuple(sum((y[i] * gens[i][d] for i in range(len(rf))), Fraction(0)) for d in range(self.ambient_dim))
        cp = tuple(sum((y[i] * gens[i][d] for i in range(len(rf), k)), Fraction(0)) for d in range(self.ambient_dim))
        if not rf:
            ap = self.faces[f].witness  # the minimal face: any lineality point
        if not rh:
            cp = self.faces[h].witness
        # b = (a' + c') / 2 is the midpoint of [a', c'] and lies in g
        a2 = tuple(2 * x for x in ap)
        c2 = tuple(2 * x for x in cp)
        b = tuple(x + z for x, z in zip(ap, cp))
        return (a2, b, c2)

    def is_collinear(self, f, g, h) -> bool:
        """Whether some point of ``g`` lies on an open segment from ``f`` to ``h``."""
        return self.collinearity_certificate(f, g, h) is not None

    def check_certificate(self, f, g, h, cert) -> bool:
        a, b, c = cert
        if self.face_of_point(a) != self.idx(f) or self.face_of_point(b) != self.idx(g) or self.face_of_point(c) != self.idx(h):
            return False
        if self.idx(f) == self.idx(g) == self.idx(h):
            return True
        # b = (1-t) a + t c for some 0 < t < 1
        d = [ci - ai for ai, ci in zip(a, c)]
        e = [bi - ai for ai, bi in zip(a, b)]
        k = next((i for i, x in enumerate(d) if x != 0), None)
        if k is None:
            return all(x == 0 for x in e)
        t = e[k] / d[k]
        return 0 < t < 1 and all(ei == t * di for ei, di in zip(e, d))

    # ------------------------------------------------------------------ flats and their chambers

    def faces_in_flat(self, flat: Flat) -> list[int]:
        z = flat.zero_set
        return [face.index for face in self.faces if z <= face.zero_set]

    def chambers_of_flat(self, flat: Flat) -> list[int]:
        z = flat.zero_set
        return [face.index for face in self.faces if face.zero_set == z]

    def faces_of_flat_codim(self, flat: Flat, codim: int) -> list[int]:
        z = flat.zero_set
        want = flat.dim - codim
        return [face.index for face in self.faces if z <= face.zero_set and face.dim == want]

    def separating_walls(self, flat: Flat, c1: int, c2: int) -> list[int]:
        s1, s2 = self.faces[c1].signs, self.faces[c2].signs
        return [k for k, cls_ in enumerate(flat.induced_walls) if s1[min(cls_)] != s2[min(cls_)]]

    def generic_gallery(self, flat: Flat, c_from, c_to, seed: int = 0, retries: int = 16) -> list[int]:
        """Chambers of ``flat`` crossed by a validated generic segment from ``c_from`` to ``c_to``."""
        c_from, c_to = self.idx(c_from), self.idx(c_to)
        if c_from == c_to:
            return [c_from]
        basis = nullspace([self.forms[i] for i in sorted(flat.zero_set)], self.ambient_dim) if flat.zero_set else [
            tuple(Fraction(int(i == j)) for i in range(self.ambient_dim)) for j in range(self.ambient_dim)
        ]
        want = len(self.separating_walls(flat, c_from, c_to))
        rng = random.Random(seed)
        a0, c0 = self.faces[c_from].witness, self.faces[c_to].witness
        for attempt in range(retries + 1):
            if attempt == 0:
                a, c = a0, c0
            else:
                a = self._perturb(a0, c_from, basis, rng)
                c = self._perturb(c0, c_to, basis, rng)
            gallery = self._gallery_along(flat, a, c)
            if gallery is not None and len(gallery) - 1 == want and gallery[0] == c_from and gallery[-1] == c_to:
                return gallery
        raise GenericityFailure(f"no generic segment between {c_from} and {c_to}")

    def _perturb(self, x, face: int, basis, rng) -> tuple:
        r = [Fraction(0)] * self.ambient_dim
        for b in basis:
            k = rng.randint(-7, 7)
            for i in range(self.ambient_dim):
                r[i] += k * b[i]
        bound = None
        for form in self.forms:
            vx, vr = dot(form, x), dot(form, r)
            if vx != 0 and vr != 0:
                q = abs(vx) / abs(vr)
                bound = q if bound is None else min(bound, q)
        delta = (bound or Fraction(1)) / 2 * Fraction(rng.randint(1, 9), 10)
        y = tuple(xi + delta * ri for xi, ri in zip(x, r))
        assert self.face_of_point(y) == face
        return y

    def _gallery_along(self, flat: Flat, a, c):
        crossings = {}
        for k, cls_ in enumerate(flat.induced_walls):
            form = self.forms[min(cls_)]
            va, vc = dot(form, a), dot(form, c)
            if sign(va) != sign(vc):
                t = va / (va - vc)
                if t in crossings:
                    return None  # two walls crossed at once
                crossings[t] = k
        ts = sorted(crossings)
        gallery = []
        prev = Fraction(0)
        for t in ts + [Fraction(1)]:
            mid = (prev + t) / 2
            x = tuple((1 - mid) * ai + mid * ci for ai, ci in zip(a, c))
            gallery.append(self.face_of_point(x))
            if t < 1:
                y = tuple((1 - t) * ai + t * ci for ai, ci in zip(a, c))
                if self.faces[self.face_of_point(y)].dim != flat.dim - 1:
                    return None
            prev = t
        for u, v in zip(gallery, gallery[1:]):
            if len(self.separating_walls(flat, u, v)) != 1:
                return None
        return gallery

    # ------------------------------------------------------------------ exports

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "faces": [{"id": f.id, "signs": list(f.signs), "dim": f.dim} for f in self.faces],
            "closure": [[self.faces[a].id, self.faces[b].id] for a, b in self.closure_pairs()],
            "flats": [{"zero_set": sorted(fl.zero_set), "dim": fl.dim} for fl in self.flats()],
        }

    def to_dot(self) -> str:
        lines = ["digraph faces {"]
        for f in self.faces:
            lines.append(f'  "{f.id}" [label="{f.id}\\ndim {f.dim}"];')
        for a, b in self.closure_pairs():
            lines.append(f'  "{self.faces[a].id}" -> "{self.faces[b].id}";')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def zaslavsky_chamber_count(self) -> int:
        """Number of chambers predicted from the Moebius function of the flat lattice."""
        flats = self._zero_sets
        mu: dict = {}
        for z in flats:  # sorted by size; subsets come first
            if not z:
                mu[z] = 1
                continue
            mu[z] = -sum(mu[y] for y in flats if y < z and y in mu)
        return sum(abs(m) for m in mu.values())


@lru_cache(maxsize=None)
def arrangement_of(rs) -> Arrangement:
    return Arrangement.from_root_system(rs)


def enumerate_faces(rs) -> Arrangement:
    return arrangement_of(rs)
