from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from artifact.errors import UnsupportedType
from artifact.linalg import dot, matmul
from artifact.rootsys import (
    act_on_vector, build_root_system, from_word, length, parabolic_subgroup, parse_system, reduced_word,
    reflection, simple_root_names, weyl_group,
)

SYSTEMS = [("A", 1), ("A", 2), ("A", 3), ("B", 2), ("B", 3), ("C", 3), ("D", 4), ("G2", None), ("F4", None)]
POS_COUNT = {"A1": 1, "A2": 3, "A3": 6, "B2": 4, "B3": 9, "C3": 9, "D4": 12, "G2": 6, "F4": 24}
W_ORDER = {"A1": 2, "A2": 6, "A3": 24, "B2": 8, "B3": 48, "C3": 48, "D4": 192, "G2": 12, "F4": 1152}


@pytest.mark.parametrize("series,rank", SYSTEMS)
def test_root_counts_and_closure(series, rank):
    rs = build_root_system(series, rank)
    assert rs.n_pos == POS_COUNT[rs.name]
    assert len(rs.roots) == 2 * rs.n_pos
    assert len(set(rs.roots)) == len(rs.roots)
    pos = {rs.roots[k] for k in rs.positive_roots}
    neg = {tuple(-x for x in rs.roots[k]) for k in rs.positive_roots}
    assert pos.isdisjoint(neg) and pos | neg == set(rs.roots)
    roots = set(rs.roots)
    for k in rs.simple_roots:
        s = reflection(rs, k)
        assert {act_on_vector(s, r) for r in roots} == roots


@pytest.mark.parametrize("series,rank", SYSTEMS)
def test_lineality(series, rank):
    rs = build_root_system(series, rank)
    # G2 is realized in the sum-zero plane of Q^3, so it carries a line of lineality like type A
    assert rs.lineality_dim == (1 if series in ("A", "G2") else 0)
    assert rs.lineality_dim == rs.ambient_dim - rs.rank


def test_small_examples():
    a2 = build_root_system("A", 2)
    assert (len(a2.roots), a2.n_pos, a2.ambient_dim, a2.lineality_dim) == (6, 3, 3, 1)
    d4 = build_root_system("D", 4)
    assert (len(d4.roots), d4.n_pos) == (24, 12)
    b2 = build_root_system("B", 2)
    assert len({dot(r, r) for r in b2.roots}) == 2


@pytest.mark.parametrize("bad", [("H", 3), ("H", 4), ("I", 2), ("A", 0), ("D", 2), ("B", 1), ("E", 6)])
def test_unsupported(bad):
    with pytest.raises(UnsupportedType):
        build_root_system(*bad)


def test_parse_system():
    assert parse_system("d4").name == "D4"
    assert parse_system("G2").name == "G2"
    with pytest.raises(UnsupportedType):
        parse_system("H3")


@pytest.mark.parametrize("series,rank", SYSTEMS)
def test_weyl_orders(series, rank):
    rs = build_root_system(series, rank)
    W = weyl_group(rs)
    assert len(W.elements) == W_ORDER[rs.name]
    assert length(W.identity) == 0 and reduced_word(rs, W.identity) == []
    assert length(W.longest) == rs.n_pos


def _brute_group(rs):
    # independent closure by matrix products of simple reflections
    gens = [reflection(rs, k).matrix for k in rs.simple_roots]
    n = rs.ambient_dim
    e = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
    seen, frontier = {e}, [e]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                h = tuple(tuple(r) for r in matmul(m, g))
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return seen


@pytest.mark.parametrize("series,rank", [("A", 2), ("B", 2), ("G2", None), ("A", 3)])
def test_weyl_group_matches_matrix_closure(series, rank):
    rs = build_root_system(series, rank)
    assert {w.matrix for w in weyl_group(rs).elements} == _brute_group(rs)


@pytest.mark.parametrize("series,rank", [("A", 2), ("B", 2), ("G2", None), ("A", 3), ("B", 3)])
def test_conjugation_of_reflections(series, rank):
    rs = build_root_system(series, rank)
    W = weyl_group(rs)
    for w in W.elements:
        winv = w.inverse()
        for k in rs.positive_roots:
            lhs = matmul(matmul(w.matrix, reflection(rs, k).matrix), winv.matrix)
            wa = act_on_vector(w, rs.roots[k])
            assert tuple(map(tuple, lhs)) == reflection(rs, wa).matrix


@pytest.mark.parametrize("series,rank", [("A", 3), ("B", 3), ("D", 4)])
def test_reduced_word_round_trip(series, rank):
    rs = build_root_system(series, rank)
    for w in weyl_group(rs).elements:
        word = reduced_word(rs, w)
        assert len(word) == length(w)
        assert from_word(rs, word).canonical_key == w.canonical_key
        # length is the number of positive roots sent negative
        neg = sum(1 for k in rs.positive_roots if rs.index[act_on_vector(w, rs.roots[k])] >= rs.n_pos)
        assert neg == length(w)


@pytest.mark.parametrize("series,rank", [("A", 3), ("B", 3), ("D", 4), ("G2", None)])
def test_parabolic_orders_divide(series, rank):
    rs = build_root_system(series, rank)
    n = len(weyl_group(rs).elements)
    for bits in product([0, 1], repeat=rs.rank):
        I = [i for i, b in enumerate(bits) if b]
        assert n % len(parabolic_subgroup(rs, I)) == 0
    b2 = build_root_system("B", 2)
    assert len(parabolic_subgroup(b2, [simple_root_names(b2).index("alpha")])) == 2


def test_simple_root_names():
    assert simple_root_names(build_root_system("A", 2)) == ["alpha", "beta"]
    assert simple_root_names(build_root_system("B", 2)) == ["beta", "alpha"]
    assert simple_root_names(build_root_system("D", 4)) == ["1", "*", "2", "3"]


def test_json_dump():
    js = build_root_system("B", 2).to_json()
    assert js["series"] == "B" and js["rank"] == 2
    assert all(isinstance(x, str) and "/" in x for r in js["roots"] for x in r)


@given(st.lists(st.integers(0, 2), max_size=12), st.lists(st.integers(0, 2), max_size=12))
def test_words_multiply_in_b3(u, v):
    rs = build_root_system("B", 3)
    a, b = from_word(rs, u), from_word(rs, v)
    ab = from_word(rs, u + v)
    assert tuple(map(tuple, matmul(a.matrix, b.matrix))) == ab.matrix
    assert length(ab) <= length(a) + length(b)
    assert (length(ab) - length(a) - length(b)) % 2 == 0
