"""Moving Apéry levels between a semigroup and its blow-up.

Blowing up a curve with x of value omega turns level A_i of Ap(S, omega)
into A_i - i*omega, a level of the blown-up semigroup, and back again.  Since
every semigroup is the union of its Apéry set translated by multiples of
omega, this gives semigroup-level blow-up and blow-down, and by iteration the
whole multiplicity tree.
"""
from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .apery import LevelPartition, levels_of
from .errors import (
    InvalidTree,
    NegativeCoordinate,
    NonTermination,
    NotGood,
    NotLocal,
    OmegaNotInS,
)
from .semigroup import (
    GoodSemigroup,
    contains,
    fine_multiplicity,
    full_lattice,
    product,
    project,
    verify_good,
)
from .treemodel import MultiplicityTree, TreeNode, node_id


# -- level shifts -----------------------------------------------------------

def shift_levels(P: LevelPartition, omega: Sequence[int], direction: str) -> LevelPartition:
    """``down`` adds i*omega to level i, ``up`` subtracts it."""
    omega = tuple(int(w) for w in omega)
    if len(omega) != P.dim:
        raise ValueError("omega has wrong dimension")
    sign = {"down": 1, "up": -1}.get(direction)
    if sign is None:
        raise ValueError("direction must be 'up' or 'down'")
    levels, caps = [], []
    for i, (lev, cap) in enumerate(zip(P.levels, P.caps)):
        delta = tuple(sign * i * w for w in omega)
        new_cap = tuple(c + s for c, s in zip(cap, delta))
        moved = set()
        for p in lev:
            q = tuple(x + s for x, s in zip(p, delta))
            if min(q) < 0:
                raise NegativeCoordinate(f"level {i} element is not above {i}*omega",
                                         level=i, point=list(p))
            moved.add(q)
        if min(new_cap) < 0:
            raise NegativeCoordinate(f"level {i} cap drops below zero", level=i)
        levels.append(frozenset(moved))
        caps.append(new_cap)
    return LevelPartition(omega, tuple(levels), tuple(caps), None)


def _level_masks(P: LevelPartition) -> list:
    masks = []
    for lev, cap in zip(P.levels, P.caps):
        m = np.zeros(tuple(c + 1 for c in cap), dtype=bool)
        if lev:
            m[tuple(np.array(sorted(lev), dtype=np.int64).T)] = True
        masks.append((m, np.array(cap, dtype=np.int64)))
    return masks


def semigroup_from_apery(levels, omega: Sequence[int], cap: Sequence[int] | None = None) -> GoodSemigroup:
    """S as the union of A + k*omega, truncated at its conductor.

    ``levels`` is a :class:`LevelPartition` or a plain point set together with
    its ``cap``.
    """
    omega = tuple(int(w) for w in omega)
    if not isinstance(levels, LevelPartition):
        pts = frozenset(tuple(int(x) for x in p) for p in levels)
        cap = tuple(int(c) for c in cap) if cap is not None else tuple(
            max(p[j] for p in pts) + 1 for j in range(len(omega)))
        levels = LevelPartition(omega, (pts,), (cap,), None)
    d = len(omega)
    if not any((0,) * d in lev for lev in levels.levels):
        raise NotGood("0 is not among the Apéry elements")
    top = tuple(max(c[j] for c in levels.caps) + omega[j] for j in range(d))
    grid = np.indices(tuple(t + 1 for t in top)).reshape(d, -1).T
    member = np.zeros(len(grid), dtype=bool)
    om = np.array(omega, dtype=np.int64)
    masks = _level_masks(levels)
    pts = grid.copy()
    while True:
        alive = (pts >= 0).all(axis=1)
        if not alive.any():
            break
        for m, cap_a in masks:
            q = np.minimum(pts[alive], cap_a)
            hit = m[tuple(q.T)]
            idx = np.flatnonzero(alive)[hit]
            member[idx] = True
        pts = pts - om
    M = member.reshape(tuple(t + 1 for t in top))
    cond = _conductor_of_mask(M)
    if cond is None:
        raise NotGood("reconstruction has no conductor inside the working box")
    box = np.indices(tuple(c + 1 for c in cond)).reshape(d, -1).T
    keep = M[tuple(box.T)]
    smalls = frozenset(tuple(int(v) for v in row) for row in box[keep])
    rep = verify_good(smalls, cond)
    if not rep.ok:
        raise NotGood("reconstructed set fails the good-semigroup axioms",
                      violations=list(rep.violations)[:3])
    return GoodSemigroup(d, cond, smalls)


def _conductor_of_mask(M: np.ndarray):
    """Least c with every box point >= c a member (None if none exists)."""
    gaps = ~M
    up = gaps
    for ax in range(M.ndim):
        up = np.flip(np.logical_or.accumulate(np.flip(up, axis=ax), axis=ax), axis=ax)
    good = ~up
    if not good.any():
        return None
    idx = np.argwhere(good)
    c = tuple(int(v) for v in idx.min(axis=0))
    if not good[c]:
        return None
    return c


# -- blow-up and blow-down ---------------------------------------------------

def blow_up_semigroup(S: GoodSemigroup):
    """Return ``(S_blow, e)`` with e the fine multiplicity of the local S."""
    if not S.is_local:
        raise NotLocal("blow-up needs a local semigroup")
    e = fine_multiplicity(S)
    P = levels_of(S, e)
    S_blow = semigroup_from_apery(shift_levels(P, e, "up"), e)
    return S_blow, e


def blow_down_semigroup(S_blow: GoodSemigroup, omega: Sequence[int]) -> GoodSemigroup:
    omega = tuple(int(w) for w in omega)
    if any(w <= 0 for w in omega) or not contains(S_blow, omega):
        raise OmegaNotInS("omega must be a positive element of the blown-up semigroup",
                          omega=list(omega))
    P = levels_of(S_blow, omega)
    return semigroup_from_apery(shift_levels(P, omega, "down"), omega)


def numerical_blow_up(S: GoodSemigroup) -> GoodSemigroup:
    """Semigroup generated by s - m for s >= m in S (m the multiplicity).

    This is the naive combinatorial blow-up.  It agrees with the level-shift
    blow-up on Arf semigroups but not in general: for <4,6,13> it gives
    <2,9> while the branch (t^4, t^6 + t^7) blows up to <2,5>.
    """
    if S.dim != 1:
        raise ValueError("numerical blow-up needs d = 1")
    if S.conductor == (0,):
        return S
    m = fine_multiplicity(S)[0]
    top = S.conductor[0] + m
    gens = [s - m for s in range(m, top + 1) if (s,) in S or s >= S.conductor[0]]
    gens = [g for g in gens if g > 0]
    reach = [False] * (top + 1)
    reach[0] = True
    for n in range(1, top + 1):
        reach[n] = any(g <= n and reach[n - g] for g in gens)
    c = top
    while c > 0 and reach[c - 1]:
        c -= 1
    return GoodSemigroup(1, (c,), frozenset((n,) for n in range(c + 1) if reach[n]))


# -- products ------------------------------------------------------------------

def permute(S: GoodSemigroup, order: Sequence[int]) -> GoodSemigroup:
    """Coordinates rearranged so that new coordinate j is old ``order[j]``."""
    order = list(order)
    return GoodSemigroup(S.dim, tuple(S.conductor[i] for i in order),
                         frozenset(tuple(p[i] for i in order) for p in S.smalls))


def product_on_blocks(parts: Sequence[tuple]) -> GoodSemigroup:
    """Product of ``(block, semigroup)`` pairs placed on the block coordinates."""
    parts = sorted(parts, key=lambda bs: min(bs[0]))
    prod = parts[0][1]
    order = list(parts[0][0])
    for block, sg in parts[1:]:
        prod = product(prod, sg)
        order += list(block)
    # order[j] is the target coordinate of current coordinate j
    inverse = [0] * len(order)
    for j, target in enumerate(order):
        inverse[target] = j
    return permute(prod, inverse)


def _relabel(blocks: Iterable[Sequence[int]]) -> list:
    return sorted((tuple(sorted(b)) for b in blocks), key=min)


def split_product(S: GoodSemigroup) -> list:
    """Finest decomposition of S into a product over coordinate blocks.

    Returns ``[(block, factor)]`` with 0-based blocks ordered by their
    smallest coordinate.
    """
    coords = tuple(range(S.dim))
    if S.dim == 1 or S.is_local:
        return [(coords, S)]
    return [(blk, f) for blk, f in _split(S, coords)]


def _split(S: GoodSemigroup, coords: tuple) -> list:
    d = len(coords)
    if d == 1 or S.is_local:
        return [(coords, S)]
    for size in range(1, d // 2 + 1):
        for I in combinations(range(d), size):
            if size * 2 == d and 0 not in I:
                continue
            J = tuple(j for j in range(d) if j not in I)
            SI = project(S, I, check=False)
            SJ = project(S, J, check=False)
            if SI.conductor + SJ.conductor != tuple(S.conductor[i] for i in I + J):
                continue
            if product_on_blocks([(I, SI), (J, SJ)]) != S:
                continue
            out = []
            for sub, T in ((I, SI), (J, SJ)):
                for blk, f in _split(T, sub):
                    out.append((tuple(coords[sub_i] for sub_i in blk), f))
            return sorted(out, key=lambda bf: min(bf[0]))
    return [(coords, S)]


def is_trivial(S: GoodSemigroup) -> bool:
    return S.dim == 1 and S.conductor == (0,)


# -- trees -------------------------------------------------------------------

def depth_guard(S: GoodSemigroup) -> int:
    e = fine_multiplicity(S) if S.is_local else tuple(1 for _ in range(S.dim))
    return sum(S.conductor) + 4 * sum(e) + 4


def semigroup_tree(S: GoodSemigroup, max_depth: int | None = None) -> MultiplicityTree:
    """Multiplicity tree of S by repeated splitting and blowing up."""
    d = S.dim
    guard = max_depth if max_depth is not None else depth_guard(S)
    nodes = []
    queue = [(0, blk, f, None) for blk, f in split_product(S)]
    while queue:
        depth, block, T, parent = queue.pop(0)
        if depth > guard:
            raise NonTermination("tree construction exceeded the depth bound", bound=guard)
        if not T.is_local:
            raise NotLocal("a factor of the splitting is not local", block=[i + 1 for i in block])
        e = fine_multiplicity(T)
        weight = [0] * d
        for i, w in zip(block, e):
            weight[i] = w
        nid = node_id(depth, block, d)
        nodes.append(TreeNode(nid, parent, tuple(weight), depth, frozenset(block)))
        if is_trivial(T):
            continue
        T_blow, _ = blow_up_semigroup(T)
        for sub, f in split_product(T_blow):
            queue.append((depth + 1, tuple(block[j] for j in sub), f, nid))
    return MultiplicityTree(d, tuple(nodes)).canonical()


def semigroup_from_tree(T: MultiplicityTree) -> GoodSemigroup:
    """Rebuild the semigroup by blowing down from the leaves."""
    from .tree import validate_tree

    rep = validate_tree(T)
    if not rep.ok:
        raise InvalidTree("tree fails validation", clause=rep.failing, violations=[str(v) for v in rep.violations[:5]])
    ids = T.by_id()
    for n in T.nodes:
        if n.parent is not None and n.parent not in ids:
            raise InvalidTree(f"node {n.id} has an unknown parent")
    covered = set()
    for r in T.roots():
        if covered & r.branches:
            raise InvalidTree("roots overlap")
        covered |= r.branches
    if covered != set(range(T.d)):
        raise InvalidTree("roots do not cover every branch")

    def build(n: TreeNode) -> GoodSemigroup:
        block = tuple(sorted(n.branches))
        omega = tuple(n.weight[i] for i in block)
        if any(w <= 0 for w in omega) or any(n.weight[i] for i in range(T.d) if i not in n.branches):
            raise InvalidTree(f"node {n.id} weight does not match its branches")
        kids = T.children(n.id)
        if not kids:
            if len(block) == 1 and omega == (1,):
                return full_lattice(1)
            raise InvalidTree(f"leaf {n.id} is not a single smooth branch")
        if set().union(*(k.branches for k in kids)) != set(n.branches):
            raise InvalidTree(f"children of {n.id} do not partition its branches")
        parts = []
        for k in kids:
            sub = tuple(block.index(i) for i in sorted(k.branches))
            parts.append((sub, build(k)))
        S_blow = product_on_blocks(parts)
        try:
            return blow_down_semigroup(S_blow, omega)
        except (OmegaNotInS, NotGood, NegativeCoordinate) as exc:
            raise InvalidTree(f"blow-down fails at node {n.id}: {exc}") from exc

    parts = [(tuple(sorted(r.branches)), build(r)) for r in T.roots()]
    return product_on_blocks(parts)


def verify_round_trip(S: GoodSemigroup) -> bool:
    """blow-down of the blow-up gives S back."""
    S_blow, e = blow_up_semigroup(S)
    return blow_down_semigroup(S_blow, e) == S


__all__ = [
    "shift_levels", "semigroup_from_apery", "blow_up_semigroup", "blow_down_semigroup",
    "numerical_blow_up", "split_product", "product_on_blocks", "permute",
    "semigroup_tree", "semigroup_from_tree", "verify_round_trip",
]
