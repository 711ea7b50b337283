from fractions import Fraction
from itertools import product as iproduct

import pytest
from hypothesis import given, settings, strategies as st

from goodsemi.apery import levels_of, recap
from goodsemi.blowup import semigroup_from_apery, semigroup_tree, shift_levels
from goodsemi.branch import enumerate_plane_sequences
from goodsemi.curve import CurveParam, blow_up_param, coordinate_change, value_of
from goodsemi.errors import NotTransversal, ZeroComponent
from goodsemi.hn import synth_param
from goodsemi.semigroup import contains, fine_multiplicity, full_lattice, numerical, verify_good
from goodsemi.series import TruncatedSeries, series
from goodsemi.tree import admissible_values, check_compatibility, k_matrix
from goodsemi.treemodel import node_id
from goodsemi.valuation import value_semigroup

import oracles
from conftest import FIGURE_TREE, O_41, O_51, O_PRIME, tree_shape

OMEGA = (2, 3, 2)
PREC = 80


def test_value_of_examples():
    assert value_of([series({2: 1}), series({0: 3, 1: 1})]) == (2, 0)
    with pytest.raises(ZeroComponent):
        value_of([series({}), series({1: 1})])
    with pytest.raises(ZeroComponent):
        value_of([TruncatedSeries.zero(5)])


@given(st.dictionaries(st.integers(0, 8), st.integers(1, 5), min_size=1, max_size=4),
       st.dictionaries(st.integers(0, 8), st.integers(1, 5), min_size=1, max_size=4))
@pytest.mark.invariant
def test_value_of_is_additive(f, g):
    F, G = series(f), series(g)
    assert value_of([F * G, G * G]) == tuple(a + b for a, b in zip(value_of([F, G]), value_of([G, G])))


def test_value_semigroup_examples(S41, S_prime):
    assert value_semigroup(CurveParam.of(({1: 1}, {}))) == full_lattice(1)
    assert value_semigroup(CurveParam.of(({2: 1}, {7: 1}))) == numerical([2, 7])
    assert S41.conductor == (18, 24, 14)
    assert S_prime.conductor == (6, 6, 2)


def test_three_branch_values_match_dense_oracle(S41):
    branches = [(b.x.as_dict(), b.y.as_dict()) for b in O_41.branches]
    box = (9, 9, 9)
    ref = oracles.value_set_oracle(branches, (10, 10, 10), box)
    for a in iproduct(*(range(b + 1) for b in box)):
        assert contains(S41, a) == (a in ref), a


def test_levels_shift_under_blow_up(S41, S_prime):
    # A_i of the curve equals A'_i of its blow-up plus i * omega
    P = levels_of(S41, OMEGA)
    down = shift_levels(levels_of(S_prime, OMEGA), OMEGA, "down")
    # the shifted caps are per level; capped coordinates stand for whole rays
    assert [recap(a, cap) for a, cap in zip(P.levels, down.caps)] == [frozenset(b) for b in down.levels]


def test_blow_up_param_examples():
    assert blow_up_param(O_51) == O_41
    once = blow_up_param(O_41)
    assert once.branches[2].y.as_dict() == {0: 1, 3: 1}
    assert value_semigroup(once) == value_semigroup(O_PRIME)
    with pytest.raises(NotTransversal):
        blow_up_param(CurveParam.of(({3: 1}, {2: 1})))


@pytest.mark.invariant
@pytest.mark.parametrize("kind,lam", [("swap", 0), ("shear", 1), ("shear", Fraction(-2, 3))])
def test_values_do_not_depend_on_coordinates(kind, lam, S51):
    assert value_semigroup(coordinate_change(O_51, kind, lam)) == S51


# -- geometric multiplicity tree by iterated blow-ups of the parametrization --------------

def _transversal(group):
    """Make x transversal on every branch of the group by x <- x + lam*y."""
    for lam in range(0, 12):
        out = []
        for i, (x, y) in group:
            nx = x + y.scale(lam)
            m = min(x.order(), y.order())
            if nx.order() != m:
                break
            out.append((i, (nx, y)))
        else:
            return out
    raise AssertionError("no transversal direction found")


def geometric_tree(c: CurveParam):
    d = c.d
    nodes = {}

    def visit(group, depth, parent):
        weight = [0] * d
        for i, (x, y) in group:
            weight[i] = min(x.order(), y.order())
        block = sorted(i for i, _ in group)
        nid = node_id(depth, block, d)
        nodes[nid] = (parent, tuple(weight))
        if len(group) == 1 and max(weight) == 1:
            return
        assert depth < 30
        moved = []
        for i, (x, y) in _transversal(group):
            moved.append((i, (x, y.divide(x, PREC))))
        points = {}
        for i, (x, y) in moved:
            a = y.coeff(0)
            points.setdefault(a, []).append((i, (x, y - a)))
        for a in sorted(points, key=lambda a: min(i for i, _ in points[a])):
            visit(points[a], depth + 1, nid)

    visit([(i, (b.x, b.y)) for i, b in enumerate(c.branches)], 0, None)
    return nodes


def test_geometric_tree_of_the_three_branch_curve(S51):
    assert geometric_tree(O_51) == FIGURE_TREE
    assert tree_shape(semigroup_tree(S51)) == FIGURE_TREE


SEQS = [PS.prefix for PS in enumerate_plane_sequences(3, max_len=4)]


@pytest.mark.invariant
@settings(max_examples=20)
@given(st.data())
def test_semigroup_tree_matches_geometric_blow_ups(data):
    d = data.draw(st.integers(1, 3))
    E = [data.draw(st.sampled_from(SEQS)) for _ in range(d)]
    pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
    K = {p: data.draw(st.sampled_from([k for k in admissible_values(E[p[0]], E[p[1]], 3) if k >= 0] or [-1]))
         for p in pairs}
    if any(k < 0 for k in K.values()) or not check_compatibility(k_matrix(K, d)).ok:
        return
    c = synth_param(E, K)
    assert tree_shape(semigroup_tree(value_semigroup(c))) == geometric_tree(c)


SMALL = [PS.prefix for PS in enumerate_plane_sequences(3, max_len=3)]


def _synth(data, dmax):
    d = data.draw(st.integers(1, dmax))
    E = [data.draw(st.sampled_from(SMALL)) for _ in range(d)]
    pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
    K = {p: data.draw(st.sampled_from([k for k in admissible_values(E[p[0]], E[p[1]], 2) if k >= 0] or [-1]))
         for p in pairs}
    if any(k < 0 for k in K.values()) or not check_compatibility(k_matrix(K, d)).ok:
        return None
    return synth_param(E, K)


@pytest.mark.invariant
@settings(max_examples=20)
@given(st.data())
def test_levels_of_curve_are_shifted_levels_of_blow_up(data):
    c = _synth(data, 3)
    if c is None:
        return
    S = value_semigroup(c)
    assert verify_good(S.smalls, S.conductor).ok
    omega = fine_multiplicity(S)
    assert omega == c.x_values()
    B = value_semigroup(blow_up_param(c))
    assert verify_good(B.smalls, B.conductor).ok
    P = levels_of(S, omega)
    down = shift_levels(levels_of(B, omega), omega, "down")
    assert [recap(a, cap) for a, cap in zip(P.levels, down.caps)] == [frozenset(b) for b in down.levels]
    assert semigroup_from_apery(down, omega) == S
