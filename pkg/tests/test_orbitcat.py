import json
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from artifact.errors import NotFreeAction, ShapeMismatch
from artifact.linalg import rank
from artifact.orbitcat import (
    StrictAction, algebra_corpus, algebra_from_table, category_from_algebra, coinvariant_category,
    coinvariant_vs_invariant, corner_iso_check, corpus_json, cyclic_group, default_corpus,
    descent_unit_check, induce, invariant_basis, invariant_category, invariants_exact_check,
    load_corpus, matrix_algebra, module_ok, poset_category, random_module, regular_module,
    run_appendix, semidirect, semidirect_vs_twisted, total_algebra, trivial_group,
    twisted_group_algebra,
)

CORPUS = default_corpus()
FREE = {"two-points-swap", "two-chains-swap", "klein-four-chains"}


def one_object_q():
    A = algebra_from_table(["1"], {("1", "1"): {"1": 1}}, {"1": 1})
    return category_from_algebra(A)


def trivial_action(V):
    return StrictAction(V, trivial_group(), [{x: x for x in V.objects}], [{}])


def qxq():
    return CORPUS["QxQ-swap"]


# ---------------------------------------------------------------- total algebra


def test_one_object_q_total_algebra():
    A = total_algebra(one_object_q())
    assert A.dim == 1
    assert A.mul(A.unit, A.unit) == A.unit


def test_chain_total_algebra_is_upper_triangular():
    V = poset_category(["x", "y"], [("x", "y")])
    A = total_algebra(V)
    assert A.dim == 3
    assert A.is_associative() and A.is_unital()
    M = matrix_algebra(2)
    e = {lab: A.basis(V.index[lab]) for lab, _, _ in V.basis}
    # some assignment of the three basis elements to E00, E11 and an off-diagonal unit is an embedding
    targets = [M.basis(i) for i in range(M.dim)]
    found = False
    for imgs in permutations(range(M.dim), 3):
        phi = dict(zip(["1_x", "1_y", "x<y"], (targets[i] for i in imgs)))
        def lin(v):
            out = [Fraction(0)] * M.dim
            for lab, vec in phi.items():
                c = v[V.index[lab]]
                for k, x in enumerate(vec):
                    out[k] += c * x
            return tuple(out)
        if all(lin(A.mul(e[a], e[b])) == M.mul(phi[a], phi[b]) for a in phi for b in phi) and \
                lin(A.unit) == M.unit:
            found = True
            break
    assert found


def test_total_algebra_dim_is_sum_of_homs():
    for V, _ in CORPUS.values():
        A = total_algebra(V)
        assert A.dim == sum(len(V.hom(x, y)) for x in V.objects for y in V.objects)
        assert A.is_associative() and A.is_unital()


# ---------------------------------------------------------------- semidirect products


def test_trivial_group_semidirect_is_v():
    for name in ["chain-trivial", "M2-conjugation", "mixed-orbit"]:
        V, _ = CORPUS[name]
        S = semidirect(V, trivial_action(V))
        assert S.dim == V.dim
        for x in V.objects:
            for y in V.objects:
                assert len(S.hom(x, y)) == len(V.hom(x, y))


def test_q_trivial_z2_twisted_is_group_algebra():
    V = one_object_q()
    G = cyclic_group(2)
    act = StrictAction(V, G, [{"*": "*"}, {"*": "*"}], [{}, {}])
    A = total_algebra(V)
    T = twisted_group_algebra(A, G, act.mats)
    assert T.dim == 2
    assert T.is_associative() and T.is_unital()
    g = [T.basis(i) for i in range(2) if T.basis(i) != T.unit]
    assert len(g) == 1 and T.mul(g[0], g[0]) == T.unit
    assert semidirect_vs_twisted(V, act)["match"]


def test_two_object_swap_semidirect_doubles_dimension():
    V, act = CORPUS["two-points-swap"]
    S = semidirect(V, act)
    assert S.dim == 2 * total_algebra(V).dim


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_semidirect_hom_dims(name):
    V, act = CORPUS[name]
    S = semidirect(V, act)
    for x in V.objects:
        for y in V.objects:
            expect = sum(len(V.hom(act.act_obj(g, x), y)) for g in act.G)
            assert len(S.hom(x, y)) == expect
    assert semidirect_vs_twisted(V, act)["match"]


# ---------------------------------------------------------------- orbit categories


def test_trivial_action_invariants_unchanged():
    V, act = CORPUS["chain-trivial"]
    I = invariant_category(V, act)
    assert I.dim == V.dim
    assert len(I.objects) == len(V.objects)


def test_free_swap_of_two_copies_gives_endomorphisms():
    V, act = CORPUS["two-points-swap"]
    I = invariant_category(V, act)
    assert len(I.objects) == 1 and I.dim == 1
    V2, act2 = CORPUS["two-chains-swap"]
    I2 = invariant_category(V2, act2)
    # one copy of the 2-chain
    assert len(I2.objects) == 2 and I2.dim == 3


def test_qxq_swap_invariants_diagonal():
    V, act = qxq()
    I = invariant_category(V, act)
    assert I.dim == 1
    inv = invariant_basis(act.mats, act.G, None, V.dim)
    assert len(inv) == 1 and inv[0][0] == inv[0][1]


def test_coinvariants_need_free_action():
    V, act = CORPUS["mixed-orbit"]
    assert not act.is_free()
    with pytest.raises(NotFreeAction):
        coinvariant_category(V, act)


@pytest.mark.parametrize("name", sorted(FREE))
def test_coinvariants_match_invariants(name):
    V, act = CORPUS[name]
    assert act.is_free()
    rep = coinvariant_vs_invariant(V, act)
    assert rep["ok"]
    C, I = coinvariant_category(V, act), invariant_category(V, act)
    assert C.dim == I.dim


def test_free_flags_of_corpus():
    assert {n for n, (_, a) in CORPUS.items() if a.is_free()} == FREE


# ---------------------------------------------------------------- corner


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_corner_iso_on_corpus(name):
    V, act = CORPUS[name]
    rep = corner_iso_check(V, act)
    assert rep["ok"], rep
    assert rep["idempotent"] and rep["injective"] and rep["surjective"]
    assert rep["multiplicative"] and rep["unit"]
    assert rep["free_on_objects"] == (name in FREE)


def test_corner_trivial_action_is_whole_algebra():
    V, _ = CORPUS["M2-conjugation"]
    rep = corner_iso_check(V, trivial_action(V))
    assert rep["ok"]
    assert rep["dims"]["corner"] == rep["dims"]["A(V)^G"] == V.dim


def test_corner_qxq_dimension_one():
    rep = corner_iso_check(*qxq())
    assert rep["dims"] == {"A(V)^G": 1, "corner": 1, "A(V^G)": 1}


def test_corner_two_chains_dims():
    rep = corner_iso_check(*CORPUS["two-chains-swap"])
    assert rep["ok"] and rep["dims"]["corner"] == 3


# ---------------------------------------------------------------- descent


def test_descent_qxq_with_q():
    V, act = qxq()
    A = total_algebra(V)
    N = random_module(A, act.G, act.mats, seed=0, rank_=1, relations=0)
    assert N.dim == 1 and module_ok(A, N)
    rep = descent_unit_check(A, act.G, act.mats, N)
    assert rep["induced_dim"] == 2 and rep["invariants_dim"] == 1
    assert rep["ok"]


def test_descent_trivial_group_unit_is_identity():
    V, _ = CORPUS["M2-conjugation"]
    act = trivial_action(V)
    A = total_algebra(V)
    N = regular_module(A, act.G, act.mats)
    _, q, gm, unit_cols = induce(A, act.G, act.mats, N)
    assert q == N.dim == A.dim
    assert rank(unit_cols) == q
    assert descent_unit_check(A, act.G, act.mats, N)["ok"]


def test_descent_matrices_random_three_dim_module():
    V, act = CORPUS["M2-conjugation"]
    A = total_algebra(V)
    assert len(invariant_basis(act.mats, act.G, None, A.dim)) == 2
    mods = []
    for seed in range(40):
        N = random_module(A, act.G, act.mats, seed=seed, rank_=2, relations=1)
        if N.dim == 3:
            mods.append(N)
    assert mods
    for N in mods[:5]:
        assert module_ok(A, N)
        rep = descent_unit_check(A, act.G, act.mats, N)
        assert rep["ok"] and rep["module_dim"] == 3 and rep["induced_dim"] == 6


@settings(max_examples=30, deadline=None)
@given(name=st.sampled_from(sorted(CORPUS)), seed=st.integers(0, 10 ** 6),
       shape=st.sampled_from([(1, 0), (1, 1), (2, 1), (3, 2)]))
def test_descent_random_modules(name, seed, shape):
    A, G, mats = algebra_corpus()[name]
    N = random_module(A, G, mats, seed=seed, rank_=shape[0], relations=shape[1])
    assert module_ok(A, N)
    assert descent_unit_check(A, G, mats, N)["ok"]
    _, _, gm, _ = induce(A, G, mats, N)
    rep = invariants_exact_check(G, gm, seed)
    assert rep["ok"]


def test_regular_module_descends_everywhere():
    for name, (A, G, mats) in algebra_corpus().items():
        N = regular_module(A, G, mats)
        assert module_ok(A, N), name
        assert descent_unit_check(A, G, mats, N)["ok"], name


# ---------------------------------------------------------------- validation and JSON


def test_action_shape_mismatch():
    V, _ = CORPUS["chain-trivial"]
    with pytest.raises(ShapeMismatch):
        StrictAction(V, cyclic_group(2), [{x: x for x in V.objects}], [{}])


def test_action_not_respecting_homs():
    V = poset_category(["x", "y"], [("x", "y")])
    bad = {"x": "y", "y": "x"}
    with pytest.raises(ValueError):
        StrictAction(V, cyclic_group(2), [{"x": "x", "y": "y"}, bad],
                     [{}, {"1_x": "1_y", "1_y": "1_x"}])


def test_action_not_an_automorphism():
    V, _ = qxq()
    # e1 -> e1 + e2 sends an idempotent to the unit and breaks the product
    with pytest.raises(ValueError):
        StrictAction(V, cyclic_group(2), [{"*": "*"}, {"*": "*"}], [{}, {"e1": {"e1": 1, "e2": 1}}])


def test_load_corpus_round_trip():
    text = json.dumps({
        "swap": {
            "category": {
                "objects": ["*"],
                "homs": {"*->*": ["e1", "e2"]},
                "comp": [["e1", "e1", {"e1": "1"}], ["e2", "e2", {"e2": "1"}],
                         ["e1", "e2", {}], ["e2", "e1", {}]],
                "identities": {"*": {"e1": 1, "e2": 1}},
            },
            "action": {"table": [[0, 1], [1, 0]], "objects": [{"*": "*"}, {"*": "*"}],
                       "maps": [{}, {"e1": "e2", "e2": "e1"}]},
        }
    })
    corpus = load_corpus(text)
    V, act = corpus["swap"]
    assert V.dim == 2
    assert corner_iso_check(V, act)["dims"]["corner"] == 1
    assert run_appendix(0, corpus)["ok"]


def test_corpus_json_lists_everything():
    d = json.loads(corpus_json())
    assert set(d) == set(CORPUS)
    assert {n for n, v in d.items() if v["free"]} == FREE


def test_run_appendix_ok_and_deterministic():
    a, b = run_appendix(3), run_appendix(3)
    assert a["ok"]
    assert len(a["corner"]) == 8 and len(a["coinvariants"]) == 3
    assert len(a["descent"]) == 32
    assert a["descent"] == b["descent"]
