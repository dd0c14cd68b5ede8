"""The double incidence category: words in Ind/Res, relation instances and a prover.

A morphism word is stored as its face path ``(X0, X1, ..., Xk)``: a step to a
lower face (``X_{i+1} < X_i`` in the closure order) is ``Ind``, a step to a
higher face is ``Res``.  Consecutive equal faces are merged at once, which
is the identity relation.

Relation instances (each a rewrite of a contiguous piece of the path):

* ``2b``: ``(F, F', F'') <-> (F, F'')`` for a strictly monotone chain;
* ``2c``: ``(F, F', F) <-> (F)`` for ``F' < F``;
* ``2d``: ``(p, 0, p', 0, p'') <-> (p, 0, p'')`` when ``(p, p', p'')`` is collinear,
  where ``0`` is the minimal face;
* ``2e``: invertibility of ``tau`` between adjacent chambers of one flat; only
  checked on representations, never used as a rewrite.

The prover turns both sides into tau-paths ``(Y0, 0, Y1, 0, ..., Ym)`` and
searches among tau-paths with macro moves, each of which expands into basic
moves.  A proof is a list of basic moves that a separate checker replays.
"""
from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .arrangement import Arrangement, arrangement_of, parse_token
from .errors import EndpointMismatch, PreconditionFailure, ShapeMismatch
from .linalg import dot, identity, inverse, matmul
from .stratpi1 import Verdict


# ---------------------------------------------------------------------- words


class MorphWord:
    """A validated composable word of Ind/Res letters, kept as a face path."""

    __slots__ = ("arr", "path")

    def __init__(self, arr: Arrangement, path: Sequence):
        faces = [arr.idx(p) for p in path]
        merged: list[int] = []
        for f in faces:
            if not merged or merged[-1] != f:
                merged.append(f)
        if not merged:
            raise ValueError("a word needs at least its source face")
        for a, b in zip(merged, merged[1:]):
            if not arr.comparable(a, b):
                raise ValueError(f"faces {arr.faces[a].id} and {arr.faces[b].id} are not comparable")
        self.arr = arr
        self.path = tuple(merged)

    @property
    def src(self) -> int:
        return self.path[0]

    @property
    def dst(self) -> int:
        return self.path[-1]

    def letters(self) -> list[tuple[str, int, int]]:
        out = []
        for a, b in zip(self.path, self.path[1:]):
            out.append(("Ind" if self.arr.lt(b, a) else "Res", a, b))
        return out

    def then(self, other: "MorphWord") -> "MorphWord":
        """``other o self``: first this word, then ``other``."""
        if other.src != self.dst:
            raise ValueError("words do not compose")
        return MorphWord(self.arr, self.path + other.path[1:])

    def __eq__(self, other) -> bool:
        return isinstance(other, MorphWord) and self.path == other.path

    def __hash__(self) -> int:
        return hash(self.path)

    def __len__(self) -> int:
        return len(self.path) - 1

    def __repr__(self) -> str:
        parts = [f"{k}[{self.arr.faces[a].id}->{self.arr.faces[b].id}]" for k, a, b in self.letters()]
        return "MorphWord(" + (" ".join(parts) if parts else f"id {self.arr.faces[self.src].id}") + ")"

    def to_json(self) -> list:
        return [self.arr.faces[f].id for f in self.path]


def ind(arr: Arrangement, f, g) -> MorphWord:
    """``Ind_f^g`` for ``g <= f``."""
    f, g = arr.idx(f), arr.idx(g)
    if not arr.leq(g, f):
        raise ValueError("Ind needs the target in the closure of the source")
    return MorphWord(arr, (f, g))


def res(arr: Arrangement, g, f) -> MorphWord:
    """``Res_g^f`` for ``g <= f``."""
    f, g = arr.idx(f), arr.idx(g)
    if not arr.leq(g, f):
        raise ValueError("Res needs the source in the closure of the target")
    return MorphWord(arr, (g, f))


def identity_word(arr: Arrangement, f) -> MorphWord:
    return MorphWord(arr, (arr.idx(f),))


def tau(arr: Arrangement, f, g, through=None) -> MorphWord:
    """``tau_f^g = Res_q^g o Ind_f^q`` for a common lower face ``q`` (default: the minimal face)."""
    f, g = arr.idx(f), arr.idx(g)
    if f == g:
        return MorphWord(arr, (f,))
    if through is None:
        if arr.leq(g, f) or arr.leq(f, g):
            return MorphWord(arr, (f, g))
        q = arr.zero
    else:
        q = arr.idx(through)
        if not (arr.leq(q, f) and arr.leq(q, g)):
            raise ValueError("the intermediate face must lie below both ends")
    return MorphWord(arr, (f, q, g))


# ---------------------------------------------------------------------- relation instances


def _tok(arr, f) -> str:
    return arr.faces[f].id


def instance_id(arr: Arrangement, kind: str, faces: Sequence[int]) -> str:
    return kind + ":" + "|".join(_tok(arr, f) for f in faces)


def parse_instance(arr: Arrangement, iid: str) -> tuple[str, list[int]]:
    kind, rest = iid.split(":", 1)
    return kind, [arr.by_signs[parse_token(t)] for t in rest.split("|")]


def instance_sides(arr: Arrangement, kind: str, faces: Sequence[int]) -> tuple[tuple, tuple]:
    """(long side, short side) as face paths, after checking the instance is genuine."""
    z = arr.zero
    if kind == "2b":
        a, b, c = faces
        ok = (arr.lt(b, a) and arr.lt(c, b)) or (arr.lt(a, b) and arr.lt(b, c))
        if not ok:
            raise ValueError("2b needs a strictly monotone chain")
        return (a, b, c), (a, c)
    if kind == "2c":
        a, b = faces
        if not arr.lt(b, a):
            raise ValueError("2c needs F' < F")
        return (a, b, a), (a,)
    if kind == "2d":
        a, b, c = faces
        if z in (a, b, c):
            raise ValueError("2d instances use nonzero faces")
        if not arr.is_collinear(a, b, c):
            raise ValueError("2d needs a collinear triple")
        return (a, z, b, z, c), (a, z, c)
    raise ValueError(f"unknown relation kind {kind}")


@dataclass(frozen=True)
class RelationInstance:
    kind: str
    faces: tuple
    lhs: MorphWord
    rhs: MorphWord
    id: str


def relation_instances(rs_or_arr, kind: str, limit: int | None = None) -> list:
    """All instances of one relation kind, as ``RelationInstance`` records.

    ``2a`` has none (it is applied eagerly); ``2e`` yields ``(tau, obligation)``
    records whose ``rhs`` is the reverse braiding word.
    """
    arr = rs_or_arr if isinstance(rs_or_arr, Arrangement) else arrangement_of(rs_or_arr)
    out: list = []
    n = len(arr.faces)

    def add(k, faces):
        long, short = instance_sides(arr, k, faces)
        out.append(RelationInstance(k, tuple(faces), MorphWord(arr, long), MorphWord(arr, short), instance_id(arr, k, faces)))
        return limit is not None and len(out) >= limit

    if kind == "2a":
        return []
    if kind == "2c":
        for a in range(n):
            for b in range(n):
                if arr.lt(b, a) and add("2c", (a, b)):
                    return out
        return out
    if kind == "2b":
        for a in range(n):
            for b in range(n):
                if not arr.lt(b, a):
                    continue
                for c in range(n):
                    if arr.lt(c, b):
                        if add("2b", (a, b, c)) or add("2b", (c, b, a)):
                            return out
        return out
    if kind == "2d":
        z = arr.zero
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if z in (a, b, c):
                        continue
                    if arr.is_collinear(a, b, c) and add("2d", (a, b, c)):
                        return out
        return out
    if kind == "2e":
        for fl in arr.flats():
            chambers = arr.chambers_of_flat(fl)
            for c in chambers:
                for d in chambers:
                    if c < d and len(arr.separating_walls(fl, c, d)) == 1:
                        t, back = tau(arr, c, d), tau(arr, d, c)
                        out.append(RelationInstance("2e", (c, d), t, back, instance_id(arr, "2e", (c, d))))
                        if limit is not None and len(out) >= limit:
                            return out
        return out
    raise ValueError(f"unknown relation kind {kind}")


# ---------------------------------------------------------------------- transcripts


@dataclass(frozen=True)
class Move:
    """Rewrite the piece of the word starting at ``position``.

    ``direction`` +1 replaces the long side of the instance by the short side,
    -1 goes the other way.
    """

    relation_kind: str
    instance_id: str
    position: int
    direction: int

    def to_json(self) -> dict:
        return {
            "relation_kind": self.relation_kind,
            "instance_id": self.instance_id,
            "position": self.position,
            "direction": self.direction,
        }

    def reversed(self) -> "Move":
        return Move(self.relation_kind, self.instance_id, self.position, -self.direction)


def apply_move(arr: Arrangement, path: tuple, move: Move) -> tuple:
    kind, faces = parse_instance(arr, move.instance_id)
    if kind != move.relation_kind:
        raise ValueError("relation kind does not match its instance")
    long, short = instance_sides(arr, kind, faces)
    src, dst = (long, short) if move.direction > 0 else (short, long)
    i = move.position
    if tuple(path[i:i + len(src)]) != src:
        raise ValueError(f"move {move.instance_id} does not match the word at position {i}")
    return tuple(path[:i]) + dst + tuple(path[i + len(src):])


def replay(arr: Arrangement, lhs: MorphWord, moves: Sequence[Move]) -> tuple:
    path = lhs.path
    for m in moves:
        path = apply_move(arr, path, m)
    return path


def check_transcript(arr: Arrangement, lhs: MorphWord, rhs: MorphWord, moves: Sequence[Move]) -> bool:
    """Independent replay: every move must be a genuine instance that matches the word."""
    try:
        return replay(arr, lhs, moves) == rhs.path
    except (ValueError, KeyError):
        return False


def transcript_json(moves: Sequence[Move]) -> dict:
    return {"moves": [m.to_json() for m in moves]}


def transcript_from_json(data) -> list[Move]:
    if isinstance(data, str):
        data = json.loads(data)
    return [Move(m["relation_kind"], m["instance_id"], int(m["position"]), int(m.get("direction", 1))) for m in data["moves"]]


# ---------------------------------------------------------------------- the prover


@dataclass(frozen=True)
class Budget:
    max_len: int = 24
    max_states: int = 1_000_000


DEFAULT_BUDGET = Budget()


@dataclass
class ProofResult:
    verdict: Verdict
    moves: list = field(default_factory=list)
    reason: str = ""

    @property
    def proved(self) -> bool:
        return self.verdict == Verdict.PROVED

    def __bool__(self) -> bool:
        return self.proved

    def to_json(self) -> dict:
        return {"verdict": str(self.verdict), "reason": self.reason, **transcript_json(self.moves)}


class Prover:
    """Bounded equality prover for words of the double incidence category."""

    def __init__(self, arr: Arrangement):
        self.arr = arr
        self.z = arr.zero

    # -- tau-paths

    def literal(self, ys: tuple) -> tuple:
        out: list[int] = []
        for k, y in enumerate(ys):
            if k:
                if out[-1] != self.z:
                    out.append(self.z)
            if not out or out[-1] != y:
                out.append(y)
        return tuple(out)

    def positions(self, ys: tuple) -> list[int]:
        """Index of each ``Y_j`` inside ``literal(ys)``."""
        pos, k = [], 0
        lit = self.literal(ys)
        for j, y in enumerate(ys):
            while lit[k] != y:
                k += 1
            pos.append(k)
        return pos

    def _id(self, kind, faces) -> str:
        return instance_id(self.arr, kind, faces)

    def normalize(self, word: MorphWord) -> tuple[tuple, list[Move]]:
        """Basic moves turning the word into ``literal(ys)``; returns ``(ys, moves)``."""
        arr, z = self.arr, self.z
        path = list(word.path)
        moves: list[Move] = []
        i = 0
        while i < len(path) - 1:
            a, b = path[i], path[i + 1]
            if a == z or b == z:
                i += 1
                continue
            if arr.lt(b, a):  # Ind a -> b becomes (a, 0, b)
                m1 = Move("2c", self._id("2c", (b, z)), i + 1, -1)
                m2 = Move("2b", self._id("2b", (a, b, z)), i, 1)
            else:  # Res a -> b becomes (a, 0, b)
                m1 = Move("2c", self._id("2c", (a, z)), i, -1)
                m2 = Move("2b", self._id("2b", (z, a, b)), i + 1, 1)
            for m in (m1, m2):
                path = list(apply_move(arr, tuple(path), m))
                moves.append(m)
            i += 2
        ys = tuple(f for k, f in enumerate(path) if f != z or k in (0, len(path) - 1))
        assert self.literal(ys) == tuple(path)
        return ys, moves

    def deletions(self, ys: tuple):
        """Macro deletions available on a tau-path: ``(new ys, basic moves)``."""
        pos = self.positions(ys)
        for j in range(len(ys) - 1):
            if ys[j] == ys[j + 1]:
                # (y, 0, y) -> (y)
                yield ys[:j + 1] + ys[j + 2:], [Move("2c", self._id("2c", (ys[j], self.z)), pos[j], 1)]
        for j in range(1, len(ys) - 1):
            yield from self.deletions_at(ys, j)

    def deletions_at(self, ys: tuple, j: int):
        arr, z = self.arr, self.z
        pos = self.positions(ys)
        a, y, c = ys[j - 1], ys[j], ys[j + 1]
        p = pos[j]
        new = ys[:j] + ys[j + 1:]
        if y == c or y == a:
            return  # handled as a duplicate merge
        if arr.lt(y, c):
            # (0, y, 0, c) -> (0, c)
            s = p - 1
            yield new, [
                Move("2b", self._id("2b", (z, y, c)), s + 2, -1),
                Move("2c", self._id("2c", (y, z)), s + 1, 1),
                Move("2b", self._id("2b", (z, y, c)), s, 1),
            ]
        elif arr.lt(y, a):
            # (a, 0, y, 0) -> (a, 0)
            s = pos[j - 1]
            yield new, [
                Move("2b", self._id("2b", (a, y, z)), s, -1),
                Move("2c", self._id("2c", (y, z)), s + 1, 1),
                Move("2b", self._id("2b", (a, y, z)), s, 1),
            ]
        if z not in (a, c) and arr.is_collinear(a, y, c):
            yield new, [Move("2d", self._id("2d", (a, y, c)), pos[j - 1], 1)]

    def insertions(self, ys: tuple, pool: Sequence[int]):
        """Macro insertions (reverses of deletions) drawing new faces from ``pool``."""
        z = self.z
        for j in range(len(ys) - 1):
            a, c = ys[j], ys[j + 1]
            for y in pool:
                if y in (z, a, c):
                    continue
                cand = ys[:j + 1] + (y,) + ys[j + 1:]
                for _, moves in self.deletions_at(cand, j + 1):
                    yield cand, [mv.reversed() for mv in reversed(moves)]
                    break

    def deletion_closure(self, ys: tuple, cap: int) -> dict:
        seen = {ys: None}
        queue = deque([ys])
        while queue and len(seen) < cap:
            cur = queue.popleft()
            for new, moves in self.deletions(cur):
                if new not in seen:
                    seen[new] = (cur, moves)
                    queue.append(new)
        return seen

    @staticmethod
    def _chain(table: dict, node) -> list[Move]:
        out: list[list[Move]] = []
        while table[node] is not None:
            node, moves = table[node]
            out.append(moves)
        flat: list[Move] = []
        for ms in reversed(out):
            flat.extend(ms)
        return flat

    def prove(self, lhs: MorphWord, rhs: MorphWord, budget: Budget = DEFAULT_BUDGET) -> ProofResult:
        if lhs.src != rhs.src or lhs.dst != rhs.dst:
            raise EndpointMismatch("both sides must have the same source and target")
        if lhs.path == rhs.path:
            return ProofResult(Verdict.PROVED, [], "identical")
        yl, ml = self.normalize(lhs)
        yr, mr = self.normalize(rhs)
        tail = [m.reversed() for m in reversed(mr)]
        cap = budget.max_states
        left = self.deletion_closure(yl, cap // 2)
        right = self.deletion_closure(yr, cap // 2)
        common = [y for y in left if y in right]
        if common:
            meet = min(common, key=lambda y: (len(y), y))
            moves = ml + self._chain(left, meet) + [m.reversed() for m in reversed(self._chain(right, meet))] + tail
            return self._finish(lhs, rhs, moves, "deletions")
        # bidirectional search with insertions
        pool = sorted({f for y in list(left) + list(right) for f in y}
                      | {self.arr.tits(a, b) for y in (yl, yr) for a in y for b in y})
        tables = [dict(left), dict(right)]
        frontier = [list(left), list(right)]
        states = len(left) + len(right)
        while frontier[0] or frontier[1]:
            side = 0 if frontier[0] and (not frontier[1] or len(frontier[0]) <= len(frontier[1])) else 1
            nxt = []
            for cur in frontier[side]:
                moves_iter = list(self.deletions(cur)) + list(self.insertions(cur, pool))
                for new, moves in moves_iter:
                    if len(self.literal(new)) > budget.max_len + 1 or new in tables[side]:
                        continue
                    tables[side][new] = (cur, moves)
                    states += 1
                    if new in tables[1 - side]:
                        a = self._chain(tables[0], new)
                        b = self._chain(tables[1], new)
                        moves_all = ml + a + [m.reversed() for m in reversed(b)] + tail
                        return self._finish(lhs, rhs, moves_all, "search")
                    nxt.append(new)
                    if states >= budget.max_states:
                        return ProofResult(Verdict.UNKNOWN, [], "state cap reached")
            frontier[side] = nxt
        return ProofResult(Verdict.UNKNOWN, [], "search space exhausted within budget")

    def _finish(self, lhs, rhs, moves, how) -> ProofResult:
        if not check_transcript(self.arr, lhs, rhs, moves):
            raise AssertionError("prover produced a transcript that does not replay")
        return ProofResult(Verdict.PROVED, moves, how)


_PROVERS: dict = {}


def prover_for(arr: Arrangement) -> Prover:
    p = _PROVERS.get(id(arr))
    if p is None or p.arr is not arr:
        p = Prover(arr)
        _PROVERS[id(arr)] = p
    return p


def prove_equal(lhs: MorphWord, rhs: MorphWord, budget: Budget = DEFAULT_BUDGET) -> ProofResult:
    if lhs.arr is not rhs.arr:
        raise EndpointMismatch("words live in different arrangements")
    return prover_for(lhs.arr).prove(lhs, rhs, budget)


# ---------------------------------------------------------------------- proto-Langlands


def four_chain_certificate(arr: Arrangement, p1: int, p2: int):
    """Points ``a, b, c, d`` in order on a line with ``a`` in p1, ``b`` in p1∘p2, ``c`` in p2∘p1, ``d`` in p2."""
    q1, q2 = arr.tits(p1, p2), arr.tits(p2, p1)
    a, d = arr.faces[p1].witness, arr.faces[p2].witness
    eps = Fraction(1, 3)
    for form in arr.forms:
        va, vd = dot(form, a), dot(form, d)
        for x, y in ((va, vd), (vd, va)):
            if x != 0 and y != x and (y - x) * x < 0:
                eps = min(eps, abs(x) / abs(y - x) / 2)
    b = tuple(ai + eps * (di - ai) for ai, di in zip(a, d))
    c = tuple(di + eps * (ai - di) for ai, di in zip(a, d))
    ok = arr.face_of_point(b) == q1 and arr.face_of_point(c) == q2
    return {"points": [a, b, c, d], "epsilon": eps, "valid": ok, "faces": [p1, q1, q2, p2]}


def check_four_chain(arr: Arrangement, cert) -> bool:
    a, b, c, d = cert["points"]
    p1, q1, q2, p2 = cert["faces"]
    if [arr.face_of_point(x) for x in (a, b, c, d)] != [p1, q1, q2, p2]:
        return False
    direction = [di - ai for ai, di in zip(a, d)]
    if not any(direction):
        return all(x == a for x in (b, c))
    k = next(i for i, x in enumerate(direction) if x != 0)
    ts = [(x[k] - a[k]) / direction[k] for x in (b, c)]
    on_line = all(all(xi == ai + t * di for xi, ai, di in zip(x, a, direction)) for x, t in zip((b, c), ts))
    return on_line and 0 < ts[0] < ts[1] < 1


@dataclass
class ProtoLanglandsReport:
    faces: tuple
    certificate: dict
    lhs: MorphWord
    rhs: MorphWord
    proof: ProofResult

    @property
    def proved(self) -> bool:
        return self.proof.proved and self.certificate["valid"]

    def to_json(self) -> dict:
        arr = self.lhs.arr
        cert = self.certificate
        return {
            "faces": [arr.faces[f].id for f in self.faces],
            "collinearity_cert": {
                "chain": [arr.faces[f].id for f in cert["faces"]],
                "points": [[f"{x.numerator}/{x.denominator}" for x in p] for p in cert["points"]],
                "valid": cert["valid"],
            },
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "proof": self.proof.to_json(),
        }


def proto_langlands_words(arr: Arrangement, p1: int, p: int, p2: int) -> tuple[MorphWord, MorphWord]:
    q1, q2 = arr.tits(p1, p2), arr.tits(p2, p1)
    lhs = MorphWord(arr, (p1, p, p2))
    rhs = res(arr, p1, q1).then(tau(arr, q1, q2, through=arr.zero) if q1 != q2 else identity_word(arr, q1)).then(ind(arr, q2, p2))
    return lhs, rhs


def verify_proto_langlands(arr: Arrangement, p1, p, p2, budget: Budget = DEFAULT_BUDGET) -> ProtoLanglandsReport:
    p1, p, p2 = arr.idx(p1), arr.idx(p), arr.idx(p2)
    if not (arr.leq(p, p1) and arr.leq(p, p2)):
        raise PreconditionFailure("the middle face must lie in the closure of both ends")
    cert = four_chain_certificate(arr, p1, p2)
    lhs, rhs = proto_langlands_words(arr, p1, p, p2)
    proof = prove_equal(lhs, rhs, budget)
    return ProtoLanglandsReport((p1, p, p2), cert, lhs, rhs, proof)


def functoriality_configurations(arr: Arrangement, limit: int | None = None):
    """All ``(p1, p2, p1+, p2+)``: p1, p2 chambers of a flat L' that is a wall of L, p_i+ on one side."""
    out = []
    for big in arr.flats():
        for small in arr.flats():
            if not (big.zero_set < small.zero_set and small.dim == big.dim - 1):
                continue
            alpha = min(small.zero_set - big.zero_set)
            sides = {}
            for c in arr.chambers_of_flat(big):
                sides.setdefault(arr.faces[c].signs[alpha], c)
            lower = arr.chambers_of_flat(small)
            for sgn, c in sorted(sides.items()):
                for p1 in lower:
                    for p2 in lower:
                        out.append((p1, p2, arr.tits(p1, c), arr.tits(p2, c)))
                        if limit is not None and len(out) >= limit:
                            return out
    return out


def functoriality_words(arr: Arrangement, p1, p2, p1p, p2p):
    """The two equalities: Res-functoriality and Ind-functoriality."""
    first = (res(arr, p1, p1p).then(tau(arr, p1p, p2p, through=arr.zero)), tau(arr, p1, p2, through=arr.zero).then(res(arr, p2, p2p)))
    second = (ind(arr, p1p, p1).then(tau(arr, p1, p2, through=arr.zero)), tau(arr, p1p, p2p, through=arr.zero).then(ind(arr, p2p, p2)))
    return first, second


# ---------------------------------------------------------------------- representations


class QRepresentation:
    """A double quiver: a vector space per face and a matrix per covering-free letter.

    ``mats[(a, b)]`` is the matrix of the letter from face ``a`` to face ``b``
    (acting on column vectors).  Matrices not listed are computed on demand by
    ``factory`` when one is supplied.
    """

    def __init__(self, arr: Arrangement, dims: dict, mats: dict | None = None, factory=None, name: str = ""):
        self.arr = arr
        self.dims = dims
        self.mats = dict(mats or {})
        self.factory = factory
        self.name = name

    def dim(self, f: int) -> int:
        return self.dims[f] if isinstance(self.dims, dict) else self.dims(f)

    def matrix(self, a: int, b: int):
        m = self.mats.get((a, b))
        if m is None:
            if self.factory is None:
                raise KeyError(f"no matrix for the letter {a}->{b}")
            m = self.factory(a, b)
            self.mats[(a, b)] = m
        if len(m) != self.dim(b) or (m and len(m[0]) != self.dim(a)):
            raise ShapeMismatch(f"letter {a}->{b} has a matrix of the wrong shape")
        return m

    def eval(self, word: MorphWord):
        m = identity(self.dim(word.src))
        for a, b in zip(word.path, word.path[1:]):
            m = matmul(self.matrix(a, b), m)
        return m

    def check_instances(self, instances: Iterable) -> list:
        """Instances whose two sides evaluate differently (empty when all hold)."""
        bad = []
        for inst in instances:
            if inst.kind == "2e":
                t = self.eval(inst.lhs)
                if t and (len(t) != len(t[0]) or inverse(t) is None):
                    bad.append(inst)
                continue
            if self.eval(inst.lhs) != self.eval(inst.rhs):
                bad.append(inst)
        return bad


def eval_word(word: MorphWord, rep: QRepresentation):
    return rep.eval(word)


def trivial_rep(rs_or_arr, d: int = 1) -> QRepresentation:
    arr = rs_or_arr if isinstance(rs_or_arr, Arrangement) else arrangement_of(rs_or_arr)
    eye = identity(d)
    return QRepresentation(arr, lambda f: d, factory=lambda a, b: eye, name=f"trivial({d})")


def gauge_rep(rs_or_arr, d: int = 2, seed: int = 0) -> QRepresentation:
    """The trivial representation conjugated by a seeded invertible matrix per face.

    Each letter ``a -> b`` acts by ``P_b P_a^{-1}``, so all relations hold
    while individual letters are far from the identity.
    """
    arr = rs_or_arr if isinstance(rs_or_arr, Arrangement) else arrangement_of(rs_or_arr)
    rng = random.Random(seed)
    gauges: dict = {}
    invs: dict = {}

    def gauge(f):
        if f not in gauges:
            while True:
                m = tuple(tuple(Fraction(rng.randint(-3, 3)) for _ in range(d)) for _ in range(d))
                mi = inverse(m)
                if mi is not None:
                    break
            gauges[f], invs[f] = m, mi
        return gauges[f], invs[f]

    return QRepresentation(arr, lambda f: d, factory=lambda a, b: matmul(gauge(b)[0], gauge(a)[1]), name=f"gauge({d},{seed})")


def rank_one_rep(arr: Arrangement, x: Fraction = Fraction(2)) -> QRepresentation:
    """A non-gauge representation of the rank-one arrangement (three faces).

    The minimal face carries a plane, the two rays a line each; ``x`` is the
    braiding scalar from the negative ray to the positive ray.
    """
    if len(arr.faces) != 3:
        raise ValueError("the rank-one representation needs a three-face arrangement")
    z = arr.zero
    plus = next(f.index for f in arr.faces if f.signs[0] > 0)
    minus = next(f.index for f in arr.faces if f.signs[0] < 0)
    one, zero_ = Fraction(1), Fraction(0)
    dims = {z: 2, plus: 1, minus: 1}
    mats = {
        (plus, z): ((one,), (zero_,)),
        (minus, z): ((zero_,), (one,)),
        (z, plus): ((one, x),),
        (z, minus): ((one, one),),
    }
    return QRepresentation(arr, dims, mats, name="rank-one")
