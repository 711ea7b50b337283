"""Apéry sets of good semigroups and their partition into levels."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    NotInSemigroup,
    OmegaNotInS,
    OmegaNotPositive,
)
from .semigroup import GoodSemigroup, cap_point, contains

log = logging.getLogger(__name__)

INF = "inf"


@dataclass(frozen=True)
class AperySet:
    parent: GoodSemigroup
    omega: tuple
    elements: frozenset
    conductor_E: tuple

    @property
    def cap(self) -> tuple:
        return self.conductor_E

    @property
    def gamma_E(self) -> tuple:
        return tuple(c - 1 for c in self.conductor_E)

    def __contains__(self, alpha) -> bool:
        alpha = tuple(alpha)
        return min(alpha) >= 0 and cap_point(alpha, self.cap) in self.elements


@dataclass(frozen=True)
class LevelPartition:
    """Levels A_0..A_{N-1}; level i is stored capped at ``caps[i]``.

    Freshly partitioned Apéry sets use one cap (c_E) for every level.  After a
    shift the caps move with the level, so level i of a shifted partition has
    cap ``c_E +- i*omega``.
    """
    omega: tuple
    levels: tuple
    caps: tuple
    apery: AperySet | None = None

    @property
    def N(self) -> int:
        return len(self.levels)

    @property
    def dim(self) -> int:
        return len(self.omega)

    def level_of(self, alpha) -> int | None:
        """Index of the level containing ``alpha`` (integer point), or None."""
        alpha = tuple(alpha)
        if min(alpha) < 0:
            return None
        for i, (lev, cap) in enumerate(zip(self.levels, self.caps)):
            if cap_point(alpha, cap) in lev:
                return i
        return None

    def union(self) -> frozenset:
        out = set()
        for lev in self.levels:
            out |= lev
        return frozenset(out)

    def to_json(self, compress: bool = True) -> dict:
        levels = []
        for lev, cap in zip(self.levels, self.caps):
            rows = sorted(lev)
            levels.append([[format_coord(x, c, compress) for x, c in zip(p, cap)] for p in rows])
        return {"omega": [str(w) for w in self.omega], "N": self.N, "levels": levels}


def format_coord(x: int, cap: int, compress: bool = True) -> str:
    return INF if compress and x >= cap else str(x)


# -- construction ----------------------------------------------------------

def apery_set(S: GoodSemigroup, omega: Sequence[int], cap: Sequence[int] | None = None) -> AperySet:
    """Truncated Ap(S, omega) = S minus (omega + S), stored in the box [0, c_E].

    ``cap`` may raise the truncation bound above c_E (cap-stability checks).
    """
    omega = tuple(int(w) for w in omega)
    if len(omega) != S.dim:
        raise DimensionMismatch("omega has wrong dimension")
    if any(w <= 0 for w in omega):
        raise OmegaNotPositive("omega must have positive coordinates", omega=list(omega))
    if not contains(S, omega):
        raise OmegaNotInS("omega is not an element of S", omega=list(omega))
    c_E = tuple(c + w for c, w in zip(S.conductor, omega))
    box = c_E if cap is None else tuple(max(a, int(b)) for a, b in zip(c_E, cap))
    grid = np.indices(tuple(b + 1 for b in box)).reshape(S.dim, -1).T
    in_s = S.contains_array(grid)
    shifted = grid - np.array(omega)
    in_e = (shifted >= 0).all(axis=1) & S.contains_array(np.maximum(shifted, 0))
    keep = in_s & ~in_e
    elements = frozenset(tuple(int(v) for v in row) for row in grid[keep])
    return AperySet(S, omega, elements, box)


def _strictly_below(a: np.ndarray, b: np.ndarray, cap: np.ndarray) -> np.ndarray:
    """Pairwise ``a[i] << b[j]`` under capped semantics, as an (n, m) matrix."""
    lt = a[:, None, :] < b[None, :, :]
    both = (a[:, None, :] == cap) & (b[None, :, :] == cap)
    return (lt | both).all(axis=2)


def _complete_infimum_mask(B: np.ndarray, cap: np.ndarray) -> np.ndarray:
    """For each row alpha of B, whether alpha is a complete infimum in B.

    Witnesses raise pairwise disjoint sets of uncapped coordinates of alpha
    that together cover all of them; coordinates capped in alpha must stay
    capped in every witness.
    """
    n, d = B.shape
    out = np.zeros(n, dtype=bool)
    weights = 1 << np.arange(d)
    for idx in range(n):
        a = B[idx]
        capped = a == cap
        if capped.all():
            continue
        ok = ((B >= a) | capped).all(axis=1) & ((B == cap) | ~capped).all(axis=1)
        raised = (B > a) & ~capped
        masks = (raised * weights).sum(axis=1)
        ok &= masks > 0
        cand = set(int(m) for m in masks[ok])
        full = int((~capped * weights).sum())
        out[idx] = _has_cover(sorted(cand), full)
    return out


def _has_cover(masks: list, full: int) -> bool:
    # exact cover of ``full`` by at least two of the masks
    def search(covered, count):
        if covered == full:
            return count >= 2
        rest = full & ~covered
        low = rest & -rest
        for m in masks:
            if m & low and not m & covered and search(covered | m, count + 1):
                return True
        return False

    return search(0, 0)


def partition_points(points: Iterable, omega: Sequence[int], cap: Sequence[int], apery: AperySet | None = None) -> LevelPartition:
    """Split a complement of a good ideal into levels by repeated peeling."""
    cap_t = tuple(int(c) for c in cap)
    cap_a = np.array(cap_t, dtype=np.int64)
    remaining = np.array(sorted(points), dtype=np.int64).reshape(-1, len(cap_t))
    peeled = []
    while len(remaining):
        dom = _strictly_below(remaining, remaining, cap_a)
        np.fill_diagonal(dom, False)
        maximal = ~dom.any(axis=1)
        B = remaining[maximal]
        infima = _complete_infimum_mask(B, cap_a)
        D = B[~infima]
        if len(D) == 0:
            raise RuntimeError("level peeling stalled; the input is not the complement of a good ideal")
        peeled.append(frozenset(tuple(int(v) for v in row) for row in D))
        drop = np.zeros(len(remaining), dtype=bool)
        drop_idx = np.flatnonzero(maximal)[~infima]
        drop[drop_idx] = True
        remaining = remaining[~drop]
    levels = tuple(reversed(peeled))
    return LevelPartition(tuple(int(w) for w in omega), levels, (cap_t,) * len(levels), apery)


def partition_levels(A: AperySet) -> LevelPartition:
    return partition_points(A.elements, A.omega, A.cap, A)


def levels_of(S: GoodSemigroup, omega: Sequence[int], cap: Sequence[int] | None = None) -> LevelPartition:
    return partition_levels(apery_set(S, omega, cap))


# -- the level function ----------------------------------------------------

def level_function(P: LevelPartition, alpha: Sequence[int], S: GoodSemigroup | None = None) -> int:
    """Level of ``alpha``: its index if it lies in the Apéry set, otherwise
    one more than the largest level having an element strictly below alpha."""
    alpha = tuple(int(x) for x in alpha)
    if len(alpha) != P.dim:
        raise DimensionMismatch("alpha has wrong dimension")
    S = S if S is not None else (P.apery.parent if P.apery is not None else None)
    if S is not None and not contains(S, alpha):
        raise NotInSemigroup("alpha is not in S", alpha=list(alpha))
    found = P.level_of(alpha)
    if found is not None:
        return found
    best = -1
    for i, lev in enumerate(P.levels):
        for theta in lev:
            if theta != alpha and all(t <= a for t, a in zip(theta, alpha)):
                best = max(best, i)
                break
    return best + 1


def level_via_product(P1: LevelPartition, P2: LevelPartition, alpha: Sequence[int]) -> int:
    alpha = tuple(alpha)
    d1 = P1.dim
    if len(alpha) != d1 + P2.dim:
        raise DimensionMismatch("alpha does not split over the two factors")
    return level_function(P1, alpha[:d1]) + level_function(P2, alpha[d1:])


# -- cap stability and display ---------------------------------------------

def recap(points: Iterable, cap: Sequence[int]) -> frozenset:
    return frozenset(cap_point(tuple(p), tuple(cap)) for p in points)


def is_cap_stable(S: GoodSemigroup, omega: Sequence[int], extra: int = 1) -> bool:
    """Recompute the levels with a larger cap and compare after re-capping.

    A mismatch means the capped coordinates do not stand for whole rays in one
    level; the ``inf`` display form is then not justified.
    """
    P = levels_of(S, omega)
    bigger = tuple(c + extra for c in P.caps[0])
    Q = levels_of(S, omega, bigger)
    if Q.N != P.N:
        log.warning("cap-stability: level count changed from %d to %d", P.N, Q.N)
        return False
    for i, (a, b) in enumerate(zip(P.levels, Q.levels)):
        if recap(b, P.caps[0]) != a:
            log.warning("cap-stability: level %d differs after raising the cap", i)
            return False
    return True


def render_grid(P: LevelPartition) -> str:
    """ASCII picture of a two-dimensional level partition.

    Rows run over the second coordinate (top = largest), columns over the
    first; a cell shows the level index or '.' when the point is outside A.
    """
    if P.dim != 2:
        raise DimensionMismatch("grid rendering needs d = 2")
    cap = tuple(max(c[j] for c in P.caps) for j in range(2))
    width = len(str(P.N))
    lines = []
    for y in range(cap[1], -1, -1):
        cells = []
        for x in range(cap[0] + 1):
            lev = P.level_of((x, y))
            cells.append(("." if lev is None else str(lev)).rjust(width))
        label = "∞" if y == cap[1] else str(y)
        lines.append(f"{label:>4} | " + " ".join(cells))
    axis = " ".join(("∞" if x == cap[0] else str(x)[-width:]).rjust(width) for x in range(cap[0] + 1))
    lines.append("     +-" + "-" * len(axis))
    lines.append("       " + axis)
    return "\n".join(lines) + "\n"
