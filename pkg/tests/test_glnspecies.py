import random
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from artifact.errors import PreconditionFailure, WrongSystem
from artifact.arrangement import arrangement_of
from artifact.glnspecies import (
    OrderedSetPartition as OSP, SemidirectMorph, all_decompositions, braiding, concat, double_crossing,
    exchange_bijection, face_of, generators, gl_arrangement, integer_partitions, lambda_section,
    margin_matrices, ordered_set_partitions, partition_of, perm_double_cosets, perm_identity, perm_length,
    perm_mul, shuffle, strata_partition_table, tensor_on_generators, tits_lex, verify_hexagons,
    verify_interchange, verify_lambda_partial_hom, verify_naturality, verify_SB3, wall_count,
)
from artifact.linalg import dot, sign
from artifact.rootsys import build_root_system


def P(*blocks):
    return OSP.of(*blocks)


FUBINI = {1: 1, 2: 3, 3: 13, 4: 75, 5: 541}


# ---------------------------------------------------------------- the dictionary


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_round_trip(n):
    arr = gl_arrangement(n)
    parts = ordered_set_partitions(n)
    assert len(parts) == FUBINI[n] == len(arr.faces)
    faces = [face_of(I, arr) for I in parts]
    assert sorted(faces) == list(range(len(arr.faces)))
    assert all(partition_of(f, arr) == I for f, I in zip(faces, parts))


def test_one_block_is_minimal_face():
    for n in (2, 3, 4):
        arr = gl_arrangement(n)
        assert face_of(OSP.one_block(n), arr) == arr.zero


def test_example_sign_word():
    arr = gl_arrangement(3)
    f = face_of(P({2}, {1, 3}), arr)
    x = (1, 0, 1)  # t2 < t1 = t3
    assert arr.faces[f].signs == tuple(sign(dot(form, x)) for form in arr.forms)


def test_wrong_system():
    rs = build_root_system("B", 2)
    with pytest.raises(WrongSystem):
        face_of(P({1}, {2}), arrangement_of(rs))
    with pytest.raises(WrongSystem):
        gl_arrangement(1)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_refinement_is_closure(n):
    arr = gl_arrangement(n)
    parts = ordered_set_partitions(n)
    for I in parts:
        for J in parts:
            fi, fj = face_of(I, arr), face_of(J, arr)
            assert I.refines(J) == arr.leq(fj, fi)
            assert (I.unordered() == J.unordered()) == (arr.span_flat(fi) == arr.span_flat(fj))


@pytest.mark.parametrize("n", [3, 4])
def test_adjacent_swap_crosses_one_wall(n):
    arr = gl_arrangement(n)
    for I in ordered_set_partitions(n):
        for k in range(len(I) - 1):
            parts = list(I.parts)
            parts[k], parts[k + 1] = parts[k + 1], parts[k]
            J = OSP(tuple(parts), n)
            merged = OSP(tuple(I.parts[:k]) + (I.parts[k] | I.parts[k + 1],) + tuple(I.parts[k + 2:]), n)
            fi, fj, fm = face_of(I, arr), face_of(J, arr), face_of(merged, arr)
            flat = arr.span_flat(fi)
            assert arr.span_flat(fj) == flat
            assert len(arr.separating_walls(flat, fi, fj)) == 1
            assert arr.lt(fm, fi) and arr.lt(fm, fj)


# ---------------------------------------------------------------- Tits product


def test_tits_examples():
    assert tits_lex(P({1, 3}, {2}), P({2, 3}, {1})) == P({3}, {1}, {2})
    J = P({2}, {1, 3})
    assert tits_lex(OSP.one_block(3), J) == J
    arr = gl_arrangement(3)
    got = arr.tits_oracle(face_of(P({1, 3}, {2}), arr), face_of(P({2, 3}, {1}), arr))
    assert partition_of(got.index, arr) == P({3}, {1}, {2})


@pytest.mark.parametrize("n", [2, 3])
def test_tits_lex_matches_sign_rule(n):
    arr = gl_arrangement(n)
    parts = ordered_set_partitions(n)
    for I in parts:
        for J in parts:
            assert face_of(tits_lex(I, J), arr) == arr.tits(face_of(I, arr), face_of(J, arr))


# ---------------------------------------------------------------- monoidal structure


def test_concat():
    assert concat(P({1}), P({1})) == P({1}, {2})
    a, b, c = P({2}, {1}), P({1, 2}), P({1}, {3}, {2})
    assert concat(concat(a, b), c) == concat(a, concat(b, c))
    assert concat(a, OSP.one_block(0)) == a


def test_tensor_on_generators_shape():
    f = (P({1}, {2}), P({1, 2}))
    J = P({1})
    assert tensor_on_generators(f, J) == (P({1}, {2}, {3}), P({1, 2}, {3}))
    assert tensor_on_generators(J, f) == (P({1}, {2}, {3}), P({1}, {2, 3}))


def test_interchange_mixed_ind_res_2_2():
    ind2 = (P({1}, {2}), P({1, 2}))
    res2 = (P({1, 2}), P({2}, {1}))
    rep = verify_interchange(ind2, res2)
    assert rep["verdict"] == "Proved"
    assert verify_interchange(res2, ind2)["verdict"] == "Proved"


@pytest.mark.parametrize("n,m", [(2, 2), (2, 3), (3, 2)])
def test_interchange_all_generator_pairs(n, m):
    for f in generators(n):
        for g in generators(m):
            assert verify_interchange(f, g)["verdict"] == "Proved"


# ---------------------------------------------------------------- semidirect product and braiding


def test_shuffle():
    assert shuffle(1, 1) == (2, 1)
    assert shuffle(2, 1) == (2, 3, 1)
    assert perm_length(shuffle(2, 3)) == 6


def random_morph(rng, n):
    parts = ordered_set_partitions(n)
    src = rng.choice(parts)
    g = tuple(rng.sample(range(1, n + 1), n))
    start = src.act(g)
    path = [start]
    for _ in range(rng.randint(0, 3)):
        cand = [q for q in parts if q != path[-1] and (q.refines(path[-1]) or path[-1].refines(q))]
        if not cand:
            break
        path.append(rng.choice(cand))
    return SemidirectMorph(src, path[-1], {(tuple(path), g): Fraction(rng.randint(1, 3))})


def chain_from(rng, M, n):
    parts = ordered_set_partitions(n)
    g = tuple(rng.sample(range(1, n + 1), n))
    start = M.dst.act(g)
    path = [start]
    for _ in range(rng.randint(0, 2)):
        cand = [q for q in parts if q != path[-1] and (q.refines(path[-1]) or path[-1].refines(q))]
        if not cand:
            break
        path.append(rng.choice(cand))
    return SemidirectMorph(M.dst, path[-1], {(tuple(path), g): Fraction(1)})


@settings(max_examples=60)
@given(st.integers(1, 3), st.integers(0, 10 ** 6))
def test_semidirect_associative(n, seed):
    rng = random.Random(seed)
    a = random_morph(rng, n)
    b = chain_from(rng, a, n)
    c = chain_from(rng, b, n)
    assert (c @ b) @ a == c @ (b @ a)
    e = SemidirectMorph.identity(a.src)
    assert a @ e == a and SemidirectMorph.identity(a.dst) @ a == a


def test_semidirect_rule():
    # (xi, g) o (zeta, h) = (xi o g(zeta), gh)
    g = (2, 1)
    top = P({1, 2})
    zeta = SemidirectMorph.single((P({2}, {1}), top))
    xi = SemidirectMorph.single((top, P({1}, {2})), g, src=top)
    (path, perm), = (xi @ zeta).terms
    assert perm == perm_mul(g, perm_identity(2)) == g
    assert path == (P({1}, {2}), top, P({1}, {2}))


def test_pair_endpoint_check():
    with pytest.raises(ValueError):
        SemidirectMorph(P({1}, {2}), P({1, 2}), {((P({2}, {1}), P({1, 2})), (1, 2)): 1})


def test_braiding_degenerate_is_identity():
    I = P({1}, {2})
    empty = OSP.one_block(0)
    for R in (braiding(I, empty), braiding(empty, I)):
        assert R.equal(SemidirectMorph.identity(I))


def test_double_crossing_is_not_identity():
    D = double_crossing(1, 1)
    (path, perm), = D.terms
    assert perm == perm_identity(2)
    I = P({1}, {2})
    assert not D.equal(SemidirectMorph.identity(I))
    counts = wall_count(path)
    assert counts == (2,)


def test_hexagon_111():
    one = P({1})
    rep = verify_hexagons(one, one, one)
    assert rep["first"] and rep["second"]


@pytest.mark.parametrize("sizes", [(1, 1, 2), (2, 1, 1), (1, 2, 1)])
def test_hexagons_degree_4(sizes):
    parts = [ordered_set_partitions(k) for k in sizes]
    rng = random.Random(sum(sizes))
    for _ in range(4):
        I, J, K = (rng.choice(p) for p in parts)
        rep = verify_hexagons(I, J, K)
        assert rep["first"] and rep["second"]


def test_naturality_small():
    for f in generators(2):
        for J in ordered_set_partitions(1) + ordered_set_partitions(2)[:3]:
            assert verify_naturality(f, J, "left")
            assert verify_naturality(f, J, "right")


# ---------------------------------------------------------------- exchange


def test_exchange_examples():
    r = exchange_bijection(1, 1, 1, 1)
    assert r["valid"] and len(r["matrices"]) == 2 == r["double_cosets"]
    r = exchange_bijection(2, 1, 1, 2)
    assert r["valid"] and sorted(map(lambda m: tuple(map(tuple, m)), r["matrices"])) == [((0, 2), (1, 0)), ((1, 1), (0, 1))]
    r = exchange_bijection(3, 0, 1, 2)
    assert r["valid"] and len(r["matrices"]) == 1
    with pytest.raises(PreconditionFailure):
        exchange_bijection(2, 1, 2, 2)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_exchange_counts_all_margins(n):
    for p1 in range(n + 1):
        for q1 in range(n + 1):
            r = exchange_bijection(p1, n - p1, q1, n - q1)
            assert r["valid"], r
            # independent count: brute double cosets of Young subgroups
            assert len(perm_double_cosets((q1, n - q1), (p1, n - p1))) == len(margin_matrices((p1, n - p1), (q1, n - q1)))


def test_sb3_example_n3():
    r = verify_SB3({1, 3}, {2}, {1}, {2, 3})
    assert r["verdict"] == "Proved"
    assert r["K"] == [[[1], [3]], [[], [2]]]
    assert r["tits_matches_K"] and r["words_match"]
    assert r["proto_langlands"]["valid"]


def test_sb3_equal_decompositions():
    r = verify_SB3({1, 2}, {3}, {1, 2}, {3})
    assert r["verdict"] == "Proved"
    assert r["K"][0][1] == [] and r["K"][1][0] == []
    # both sides are the idempotency Res o Ind = Id at (J1, J2)
    assert r["rhs"] == [str(P({1, 2}, {3}))]


@pytest.mark.parametrize("n", [2, 3])
def test_sb3_exhaustive_small(n):
    for J1, J2 in all_decompositions(n):
        for L1, L2 in all_decompositions(n):
            assert verify_SB3(J1, J2, L1, L2)["verdict"] == "Proved"


def test_sb3_precondition():
    with pytest.raises(PreconditionFailure):
        verify_SB3({1}, {1, 2}, {1}, {2})


# ---------------------------------------------------------------- lambda


def test_lambda_identity_and_simple():
    assert len(lambda_section((1, 2, 3))) == 1
    g = lambda_section((2, 1, 3))
    assert len(g) == 2
    arr = gl_arrangement(3)
    assert len(arr.separating_walls(arr.flat(()), g[0], g[1])) == 1


def test_lambda_n3_length_additive():
    s1, s2 = (2, 1, 3), (1, 3, 2)
    r = verify_lambda_partial_hom(s1, s2)
    assert r["length_additive"] and r["verdict"] == "Proved"


def test_lambda_all_s3_pairs():
    perms = list(permutations((1, 2, 3)))
    proved = 0
    for s1 in perms:
        for s2 in perms:
            r = verify_lambda_partial_hom(s1, s2)
            if r["length_additive"]:
                assert r["verdict"] == "Proved"
                proved += 1
            else:
                assert r["verdict"] is None
    # pairs with l(s1 s2) = l(s1) + l(s2) in S3
    assert proved == sum(1 for a in perms for b in perms if perm_length(perm_mul(a, b)) == perm_length(a) + perm_length(b))


def test_lambda_galleries_are_minimal():
    arr = gl_arrangement(4)
    for s in permutations((1, 2, 3, 4)):
        g = lambda_section(s)
        assert len(g) - 1 == perm_length(s) == len(arr.separating_walls(arr.flat(()), g[0], g[-1]))


# ---------------------------------------------------------------- strata


@pytest.mark.parametrize("n,count", [(1, 1), (2, 2), (3, 3), (4, 5), (5, 7)])
def test_strata(n, count):
    r = strata_partition_table(n)
    assert r["count"] == count == len(integer_partitions(n))
    assert r["match"]
