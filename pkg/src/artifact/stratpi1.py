"""Fundamental groupoids of strata and their quotients by W(l).

The groupoid of a flat ``L`` is presented by the chambers of the induced
arrangement, one directed arrow per ordered pair of adjacent chambers, and
the 2-cells around codimension-2 faces: for a codimension-2 face ``v`` of
``L`` and a chamber ``C`` containing ``v`` in its closure, the two minimal
galleries from ``C`` to the chamber opposite to ``C`` at ``v`` are equal.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .arrangement import Arrangement, Flat
from .errors import NotFreeAction
from .linalg import abelian_group_from_relations, describe_abelian
from .weylact import levi_group_data, weyl_action


class Verdict(str, Enum):
    PROVED = "Proved"
    REFUTED = "Refuted"
    UNKNOWN = "Unknown"

    def __str__(self) -> str:
        return self.value


@dataclass
class GroupoidPresentation:
    """Generators may be used with exponent -1 inside relation words.

    ``generators`` is a list of ``(name, src, dst, wall)``; each relation is a
    pair of words, a word being a list of ``(generator position, +1 or -1)``
    read left to right in path order.
    """

    objects: list
    generators: list
    relations: list
    object_names: list = field(default_factory=list)
    cells: list = field(default_factory=list)  # full 2-cell list, same format as relations
    meta: dict = field(default_factory=dict)

    def word_ok(self, word) -> tuple | None:
        """Endpoints of a word, or ``None`` if consecutive letters do not compose."""
        if not word:
            return None
        ends = []
        for g, e in word:
            _, s, t, _ = self.generators[g]
            ends.append((s, t) if e > 0 else (t, s))
        for (a, b), (c, d) in zip(ends, ends[1:]):
            if b != c:
                return None
        return ends[0][0], ends[-1][1]

    def to_json(self) -> dict:
        def w(word):
            return [self.generators[g][0] + ("" if e > 0 else "^-1") for g, e in word]

        names = self.object_names or [str(o) for o in self.objects]
        return {
            "schema_version": 1,
            "objects": names,
            "generators": [
                {"name": n, "src": names[self.objects.index(s)], "dst": names[self.objects.index(t)], "wall": wall}
                for n, s, t, wall in self.generators
            ],
            "relations": [[w(a), w(b)] for a, b in self.relations],
        }

    def to_dot(self) -> str:
        names = self.object_names or [str(o) for o in self.objects]
        lines = ["digraph groupoid {"]
        for n in names:
            lines.append(f'  "{n}";')
        for name, s, t, _ in self.generators:
            lines.append(f'  "{names[self.objects.index(s)]}" -> "{names[self.objects.index(t)]}" [label="{name}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def presentation_invariants(P: GroupoidPresentation, use_cells: bool = False) -> dict:
    """Counts plus the vertex-group abelianization (connected presentations).

    The abelianization is ``Z^(non-tree generators)`` modulo the relation rows
    after contracting a spanning tree of the 1-skeleton.
    """
    objs = list(P.objects)
    pos = {o: i for i, o in enumerate(objs)}
    parent = list(range(len(objs)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree = set()
    for g, (_, s, t, _) in enumerate(P.generators):
        a, b = find(pos[s]), find(pos[t])
        if a != b:
            parent[a] = b
            tree.add(g)
    components = len({find(i) for i in range(len(objs))})
    free = [g for g in range(len(P.generators)) if g not in tree]
    col = {g: i for i, g in enumerate(free)}
    rels = P.cells if use_cells else P.relations
    rows = []
    for lhs, rhs in rels:
        row = [0] * len(free)
        for g, e in lhs:
            if g in col:
                row[col[g]] += e
        for g, e in rhs:
            if g in col:
                row[col[g]] -= e
        rows.append(row)
    group = abelian_group_from_relations(rows, len(free))
    return {
        "object_count": len(objs),
        "generator_count": len(P.generators),
        "relation_count": len(rels),
        "components": components,
        "vertex_group_abelianization": group,
        "abelianization": describe_abelian(group),
    }


def presentation_from_words(objects, generators, relations, names=None) -> GroupoidPresentation:
    """Build a presentation from human-readable data.

    ``generators``: list of ``(name, src, dst)``; ``relations``: pairs of
    strings of space-separated letters, ``x^-1`` for an inverse.
    """
    index = {g[0]: i for i, g in enumerate(generators)}

    def parse(text):
        out = []
        for tok in text.split():
            if tok in ("1", "id"):
                continue
            if tok.endswith("^-1"):
                out.append((index[tok[:-3]], -1))
            else:
                out.append((index[tok], 1))
        return out

    gens = [(n, s, t, None) for n, s, t in generators]
    rels = [(parse(a), parse(b)) for a, b in relations]
    return GroupoidPresentation(list(objects), gens, rels, list(names or objects), cells=rels)


# ---------------------------------------------------------------------- the stratum model


class StratumModel:
    """Chambers, arrows and 2-cells of the induced arrangement on one flat."""

    def __init__(self, rs, flat: Flat):
        self.rs = rs
        self.wa = weyl_action(rs)
        self.arr: Arrangement = self.wa.arr
        self.flat = flat
        arr = self.arr
        self.chambers = arr.chambers_of_flat(flat)
        self.chamber_set = set(self.chambers)
        walls = flat.induced_walls
        self.wall_rep = [min(c) for c in walls]
        # adjacency: chambers differing on exactly one wall class
        self.arrows: list[tuple[int, int]] = []
        self.arrow_wall: list[int] = []
        self.arrow_face: list[int] = []
        sig = {c: tuple(arr.faces[c].signs[r] for r in self.wall_rep) for c in self.chambers}
        by_sig = {v: c for c, v in sig.items()}
        for c in self.chambers:
            for k in range(len(walls)):
                s = list(sig[c])
                s[k] = -s[k]
                d = by_sig.get(tuple(s))
                if d is None:
                    continue
                face = self._wall_face(c, walls[k])
                if face is None:
                    continue
                self.arrows.append((c, d))
                self.arrow_wall.append(k)
                self.arrow_face.append(face)
        order = sorted(range(len(self.arrows)), key=lambda i: self.arrows[i])
        self.arrows = [self.arrows[i] for i in order]
        self.arrow_wall = [self.arrow_wall[i] for i in order]
        self.arrow_face = [self.arrow_face[i] for i in order]
        self.arrow_id = {a: i for i, a in enumerate(self.arrows)}
        self.neighbors: dict = {c: [] for c in self.chambers}
        for c, d in self.arrows:
            self.neighbors[c].append(d)
        self.codim2 = arr.faces_of_flat_codim(flat, 2) if flat.dim - arr.lineality_dim >= 2 else []
        self._cells = None

    def _wall_face(self, c: int, wall_class) -> int | None:
        signs = list(self.arr.faces[c].signs)
        for i in wall_class:
            signs[i] = 0
        f = self.arr.by_signs.get(tuple(signs))
        if f is None or self.arr.faces[f].dim != self.flat.dim - 1:
            return None
        return f

    def wall_of_pair(self, c: int, d: int) -> int:
        return self.arrow_wall[self.arrow_id[(c, d)]]

    def opposite_at(self, v: int, c: int) -> int:
        return self.arr.tits(v, self.arr.negate(c))

    def star(self, v: int) -> list[int]:
        return [c for c in self.chambers if self.arr._leq(v, c)]

    def galleries_around(self, v: int, c: int) -> tuple[tuple, tuple]:
        """The two minimal galleries from ``c`` to its opposite at ``v``."""
        star = set(self.star(v))
        d = self.opposite_at(v, c)
        starts = sorted(n for n in self.neighbors[c] if n in star)
        assert len(starts) == 2, "star of a codimension-2 face is not a polygon"
        out = []
        for first in starts:
            path = [c, first]
            while path[-1] != d:
                nxt = [n for n in self.neighbors[path[-1]] if n in star and n != path[-2]]
                assert len(nxt) == 1
                path.append(nxt[0])
            out.append(tuple(path))
        return out[0], out[1]

    def cells(self) -> list[tuple]:
        """All 2-cells ``(v, c, path1, path2)``."""
        if self._cells is None:
            out = []
            for v in self.codim2:
                for c in self.star(v):
                    p, q = self.galleries_around(v, c)
                    out.append((v, c, p, q))
            self._cells = out
        return self._cells

    def path_to_word(self, path: Sequence[int]) -> list:
        return [(self.arrow_id[(a, b)], 1) for a, b in zip(path, path[1:])]


def _chamber_names(model: StratumModel) -> list[str]:
    return [model.arr.faces[c].id for c in model.chambers]


def stratum_presentation(rs, flat: Flat) -> GroupoidPresentation:
    """Presentation of the stratum groupoid of ``flat``.

    There is one relation per codimension-2 face and starting chamber around
    it.  The cells at ``c`` and at its opposite are independent relations here,
    since their two sides run in opposite directions.
    """
    m = StratumModel(rs, flat)
    gens = [(f"t{i}", a, b, m.arrow_wall[i]) for i, (a, b) in enumerate(m.arrows)]
    cells = [(m.path_to_word(p), m.path_to_word(q)) for v, c, p, q in m.cells()]
    return GroupoidPresentation(
        list(m.chambers), gens, list(cells), _chamber_names(m), cells,
        meta={"flat": flat.id, "codim2_faces": len(m.codim2)},
    )


def coinvariant_presentation(rs, flat: Flat) -> GroupoidPresentation:
    """Quotient of the stratum groupoid by the free action of W(l)."""
    m = StratumModel(rs, flat)
    wa = m.wa
    data = levi_group_data(rs, flat, check=False)
    reps = data.quotient_reps
    rows = [wa.face_row(r) for r in reps]
    # chamber orbits
    orbit_of: dict = {}
    objects = []
    for c in m.chambers:
        if c in orbit_of:
            continue
        images = [row[c] for row in rows]
        if len(set(images)) != len(rows):
            raise NotFreeAction(f"W(l) does not act freely on chamber {c}")
        for x in images:
            orbit_of[x] = len(objects)
        objects.append(c)
    # arrow orbits
    arrow_orbit: dict = {}
    gens = []
    for i, (a, b) in enumerate(m.arrows):
        if i in arrow_orbit:
            continue
        k = len(gens)
        for row in rows:
            arrow_orbit[m.arrow_id[(row[a], row[b])]] = k
        gens.append((f"g{k}", orbit_of[a], orbit_of[b], m.arrow_wall[i]))

    def qword(path):
        return [(arrow_orbit[m.arrow_id[(x, y)]], 1) for x, y in zip(path, path[1:])]

    cells, pairs = [], []
    seen_cells, seen_pairs = set(), set()
    for v, c, p, q in m.cells():
        ck = min((row[v], row[c]) for row in rows)
        if ck not in seen_cells:
            seen_cells.add(ck)
            cells.append((qword(p), qword(q)))
        d = p[-1]
        pk = min((row[v], tuple(sorted((row[c], row[d])))) for row in rows)
        if pk not in seen_pairs:
            seen_pairs.add(pk)
            pairs.append((qword(p), qword(q)))
    names = [wa.type_name(wa.type_of(c)) for c in objects]
    return GroupoidPresentation(
        list(range(len(objects))), gens, pairs, names, cells,
        meta={"flat": flat.id, "W(l)_order": len(reps), "W(l)": data.structure["description"], "object_chambers": objects},
    )


# ---------------------------------------------------------------------- positive words


@dataclass
class WordProof:
    verdict: Verdict
    steps: list  # list of (position, cell index, direction)
    reason: str = ""

    def __bool__(self) -> bool:
        return self.verdict == Verdict.PROVED


class GalleryRewriter:
    """Positive galleries of one flat modulo the 2-cell relations."""

    def __init__(self, rs, flat: Flat):
        self.model = StratumModel(rs, flat)
        self.cells = self.model.cells()
        self.by_start: dict = {}
        for k, (v, c, p, q) in enumerate(self.cells):
            self.by_start.setdefault(c, []).append((k, p, q))

    def is_gallery(self, g: Sequence[int]) -> bool:
        m = self.model
        return len(g) >= 1 and all(c in m.chamber_set for c in g) and all((a, b) in m.arrow_id for a, b in zip(g, g[1:]))

    def crossing_counts(self, g: Sequence[int]) -> tuple:
        counts = [0] * len(self.model.flat.induced_walls)
        for a, b in zip(g, g[1:]):
            counts[self.model.wall_of_pair(a, b)] += 1
        return tuple(counts)

    def is_minimal(self, g: Sequence[int]) -> bool:
        sep = len(self.model.arr.separating_walls(self.model.flat, g[0], g[-1]))
        return len(g) - 1 == sep

    def neighbors(self, g: tuple):
        for i, c in enumerate(g):
            for k, p, q in self.by_start.get(c, ()):
                n = len(p)
                if g[i:i + n] == p:
                    yield g[:i] + q + g[i + n:], (i, k, 1)
                if g[i:i + n] == q:
                    yield g[:i] + p + g[i + n:], (i, k, -1)

    def equal(self, g1: Sequence[int], g2: Sequence[int], budget: int = 16, max_states: int = 200000) -> WordProof:
        g1, g2 = tuple(g1), tuple(g2)
        if not (self.is_gallery(g1) and self.is_gallery(g2)):
            raise ValueError("not a gallery of this flat")
        if g1[0] != g2[0] or g1[-1] != g2[-1]:
            return WordProof(Verdict.REFUTED, [], "endpoints differ")
        if self.crossing_counts(g1) != self.crossing_counts(g2):
            return WordProof(Verdict.REFUTED, [], "wall-crossing counts differ")
        if g1 == g2:
            return WordProof(Verdict.PROVED, [], "identical")
        # bidirectional breadth-first search; both words have the same length along the way
        prev = [{g1: None}, {g2: None}]
        frontier = [[g1], [g2]]
        for depth in range(budget):
            side = 0 if len(frontier[0]) <= len(frontier[1]) else 1
            nxt = []
            for g in frontier[side]:
                for h, step in self.neighbors(g):
                    if h in prev[side]:
                        continue
                    prev[side][h] = (g, step)
                    if h in prev[1 - side]:
                        return WordProof(Verdict.PROVED, self._steps(prev, h, side), "rewriting")
                    nxt.append(h)
                    if len(prev[0]) + len(prev[1]) > max_states:
                        return WordProof(Verdict.UNKNOWN, [], "state cap reached")
            frontier[side] = nxt
            if not nxt:
                return WordProof(Verdict.UNKNOWN, [], "search space exhausted")
        return WordProof(Verdict.UNKNOWN, [], "budget exhausted")

    def replay(self, g: Sequence[int], steps: Sequence[tuple]) -> tuple:
        """Apply rewriting steps ``(position, cell, direction)``; raises on a step that does not match."""
        g = tuple(g)
        for i, k, d in steps:
            _, _, p, q = self.cells[k]
            old, new = (p, q) if d == 1 else (q, p)
            if g[i:i + len(old)] != old:
                raise ValueError("rewriting step does not match the gallery")
            g = g[:i] + new + g[i + len(old):]
        return g

    def _steps(self, prev, meet, side) -> list:
        def chain(d, x):
            out = []
            while d[x] is not None:
                x, step = d[x]
                out.append(step)
            return out

        a = chain(prev[0], meet)[::-1]
        b = chain(prev[1], meet)
        # steps from the second side are applied in reverse direction
        return a + [(i, k, -d) for i, k, d in b]


def positive_words_equal(rs, flat: Flat, word1, word2, budget: int = 16, max_states: int = 200000,
                         fast: bool = True) -> WordProof:
    """Equality of positive galleries.  With ``fast``, two minimal galleries with equal endpoints are
    equal without search (minimal positive galleries all represent the same arrow)."""
    rw = _rewriter(rs, flat)
    g1, g2 = tuple(word1), tuple(word2)
    if fast and rw.is_gallery(g1) and rw.is_gallery(g2) and g1[0] == g2[0] and g1[-1] == g2[-1] \
            and rw.is_minimal(g1) and rw.is_minimal(g2):
        return WordProof(Verdict.PROVED, [], "both minimal")
    return rw.equal(g1, g2, budget, max_states)


_REWRITERS: dict = {}


def _rewriter(rs, flat: Flat) -> GalleryRewriter:
    key = (rs, flat.zero_set)
    r = _REWRITERS.get(key)
    if r is None:
        r = GalleryRewriter(rs, flat)
        _REWRITERS[key] = r
    return r


# ---------------------------------------------------------------------- reference presentations


def hand_presentations() -> dict:
    """Hand-written presentations of three D4 quotient groupoids, for comparison."""
    d4_l1 = presentation_from_words(
        ["*", "1", "2", "3"],
        [
            ("x", "*", "1"), ("x'", "1", "*"), ("y", "*", "2"), ("y'", "2", "*"),
            ("z", "*", "3"), ("z'", "3", "*"),
            ("a", "1", "1"), ("b", "1", "1"), ("e", "2", "2"), ("f", "2", "2"),
            ("c", "3", "3"), ("d", "3", "3"),
        ],
        [
            ("d c", "c d"), ("e f", "f e"), ("a b", "b a"),
            ("z^-1 d z", "y^-1 f y"), ("x^-1 a x", "z^-1 c z"), ("y^-1 e y", "x^-1 b x"),
            ("z' d z'^-1", "y' f y'^-1"), ("x' a x'^-1", "z' c z'^-1"), ("y' e y'^-1", "x' b x'^-1"),
        ],
    )
    # the three objects {1,*}, {2,*}, {3,*}; a: {1,*} -> {3,*}, b: {3,*} -> {2,*}, c: {2,*} -> {1,*}
    d42a = presentation_from_words(
        ["{1,*}", "{2,*}", "{3,*}"],
        [
            ("a", "{1,*}", "{3,*}"), ("b", "{3,*}", "{2,*}"), ("c", "{2,*}", "{1,*}"),
            ("a'", "{3,*}", "{1,*}"), ("b'", "{2,*}", "{3,*}"), ("c'", "{1,*}", "{2,*}"),
        ],
        [("a b c a b c", "1"), ("c' b' a' c' b' a'", "1")],
    )
    d42b = presentation_from_words(
        ["{1,2}#1", "{1,2}#2"],
        [("a", "{1,2}#1", "{1,2}#1"), ("b", "{1,2}#1", "{1,2}#2"), ("b'", "{1,2}#2", "{1,2}#1"), ("c", "{1,2}#2", "{1,2}#2")],
        [("a b c b^-1", "b c b^-1 a"), ("a b'^-1 c b'", "b'^-1 c b' a")],
    )
    return {"D4_l1": d4_l1, "D4_l2_adjacent": d42a, "D4_l2_orthogonal": d42b}


def presentation_json(P: GroupoidPresentation) -> str:
    return json.dumps(P.to_json(), indent=2, sort_keys=True)
