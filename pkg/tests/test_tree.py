import pytest
from hypothesis import given, settings, strategies as st

from goodsemi.blowup import semigroup_from_tree, semigroup_tree
from goodsemi.branch import PlaneSequence, enumerate_plane_sequences
from goodsemi.errors import NotCompatible
from goodsemi.hn import synth_param
from goodsemi.tree import (
    admissible_four_clause, admissible_maximal, admissible_values, build_tree,
    check_compatibility, is_admissible, k_matrix, read_tree, validate_tree,
)
from goodsemi.treemodel import MultiplicityTree
from goodsemi.valuation import value_semigroup

from conftest import E_51, FIGURE_TREE, K_51, tree_shape

SEQS = [PS.prefix for PS in enumerate_plane_sequences(5, max_len=5)]


def test_admissible_examples():
    assert is_admissible((2, 1), (3, 1), -1).ok
    assert is_admissible((2, 2, 2, 1), (2, 2, 2, 1), 1).ok
    assert is_admissible((2, 2, 2, 1), (3, 3, 2, 1), 2).ok
    assert admissible_values((2, 2, 2, 1), (3, 3, 2, 1), 6) == [-1, 0, 1, 2]
    assert not is_admissible((2, 1), (3, 1), -2).ok


@settings(max_examples=80)
@given(st.sampled_from(SEQS), st.sampled_from(SEQS), st.integers(-1, 6))
def test_admissibility_forms_agree(e, f, k):
    a, b = admissible_maximal(e, f, k), admissible_four_clause(e, f, k)
    assert a.ok == b.ok
    assert is_admissible(e, f, k).ok == is_admissible(f, e, k).ok


def test_compatibility_examples():
    assert check_compatibility(k_matrix(K_51, 3)).ok
    rep = check_compatibility(k_matrix((2, 1, 0), 3))
    assert not rep.ok and rep.violations
    with pytest.raises(NotCompatible):
        k_matrix([[0, 1], [2, 0]], 2)
    assert k_matrix({(0, 1): 3}, 2) == [[0, 3], [3, 0]]


def test_build_tree_of_the_three_branch_curve():
    T = build_tree(E_51, K_51)
    assert tree_shape(T) == FIGURE_TREE
    assert validate_tree(T).ok


def test_unrelated_branches_give_a_forest():
    T = build_tree([(2, 1), (3, 1)], {(0, 1): -1})
    assert sorted(r.id for r in T.roots()) == ["0:1", "0:2"]
    assert validate_tree(T).ok


@pytest.mark.invariant
def test_read_and_build_round_trip():
    T = build_tree(E_51, K_51)
    D = read_tree(T)
    assert [e.prefix for e in D.E] == [tuple(e) for e in E_51]
    assert D.K == tuple(tuple(r) for r in k_matrix(K_51, 3))
    assert build_tree(D.E, D.K) == T
    assert MultiplicityTree.from_json(T.to_json()) == T


def test_validate_reports_clauses():
    bad_seq = MultiplicityTree.from_json({"d": 1, "nodes": [
        {"id": "0:1", "parent": None, "weight": [2]},
        {"id": "1:1", "parent": "0:1", "weight": [3]},
        {"id": "2:1", "parent": "1:1", "weight": [1]},
    ]})
    assert validate_tree(bad_seq).failing == "1"
    bad_k = build_tree([(2, 2, 2, 1), (2, 2, 2, 1)], {(0, 1): 3})
    rep = validate_tree(bad_k)
    assert rep.failing == "2"
    assert rep.violations[0][:3] == ("admissible", 1, 2)


CASES = []
for e in [s for s in SEQS if len(s) <= 4 and s[0] <= 3]:
    for f in [s for s in SEQS if len(s) <= 4 and s[0] <= 3]:
        for k in admissible_values(e, f, 3):
            if k >= 0:
                CASES.append(([e, f], (k,)))


@pytest.mark.invariant
@settings(max_examples=25)
@given(st.sampled_from(CASES))
def test_trees_of_synthesized_curves(case):
    E, K = case
    T = build_tree(E, K)
    S = value_semigroup(synth_param(E, K))
    assert semigroup_tree(S) == T
    assert semigroup_from_tree(T) == S
    assert validate_tree(semigroup_tree(S)).ok


@pytest.mark.invariant
@settings(max_examples=15)
@given(st.data())
def test_measured_splitting_numbers(data):
    # the trunk shared by two branches has k + 1 vertices
    seqs = [s for s in SEQS if len(s) <= 4 and s[0] <= 3]
    E = [data.draw(st.sampled_from(seqs)) for _ in range(3)]
    K = [data.draw(st.sampled_from([k for k in admissible_values(E[i], E[j], 3) if k >= 0] or [-1]))
         for i, j in ((0, 1), (0, 2), (1, 2))]
    if min(K) < 0 or not check_compatibility(k_matrix(K, 3)).ok:
        return
    T = semigroup_tree(value_semigroup(synth_param(E, K)))
    D = read_tree(T)
    assert [D.K[0][1], D.K[0][2], D.K[1][2]] == K
    for i in range(3):
        for j in range(i + 1, 3):
            trunk = {n.id for n in T.branch_path(i)} & {n.id for n in T.branch_path(j)}
            assert len(trunk) - 1 == D.K[i][j]
    assert [e.prefix for e in D.E] == [PlaneSequence.of(e).prefix for e in E]
