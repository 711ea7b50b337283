"""Good semigroups and good ideals in N^d, stored up to a truncation bound.

A point is a plain tuple of non-negative ints.  Every container that holds
points also knows its truncation bound (``cap``); a coordinate equal to the
cap stands for "at or beyond the cap".  For a :class:`GoodSemigroup` the cap
is the conductor, so ``alpha in S`` iff ``min(alpha, conductor)`` is one of
the stored small elements.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadIndexSet,
    ConductorMissing,
    DimensionMismatch,
    EmptySet,
    NotGood,
)

Point = tuple


# -- lattice helpers -------------------------------------------------------

def wedge(a: Point, b: Point) -> Point:
    return tuple(min(x, y) for x, y in zip(a, b))


def vee(a: Point, b: Point) -> Point:
    return tuple(max(x, y) for x, y in zip(a, b))


def leq(a: Point, b: Point) -> bool:
    return all(x <= y for x, y in zip(a, b))


def lt(a: Point, b: Point) -> bool:
    return a != b and leq(a, b)


def add(a: Point, b: Point) -> Point:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Point, b: Point) -> Point:
    return tuple(x - y for x, y in zip(a, b))


def scale(k: int, a: Point) -> Point:
    return tuple(k * x for x in a)


def cap_point(a: Point, cap: Point) -> Point:
    return tuple(min(x, c) for x, c in zip(a, cap))


def capped_flags(a: Point, cap: Point) -> tuple:
    return tuple(x >= c for x, c in zip(a, cap))


def dominates(a: Point, b: Point, cap: Point | None = None) -> bool:
    """True iff ``a << b``: every coordinate of ``b`` is strictly larger.

    With a cap, two capped coordinates count as strictly comparable since the
    classes they stand for contain arbitrarily large values.
    """
    if cap is None:
        return all(x < y for x, y in zip(a, b))
    return all(x < y or (x == c and y == c) for x, y, c in zip(a, b, cap))


def leqleq(a: Point, b: Point, cap: Point | None = None) -> bool:
    return a == b or dominates(a, b, cap)


# -- the semigroup ---------------------------------------------------------

@dataclass(frozen=True)
class GoodReport:
    ok: bool
    violations: tuple = ()

    def __bool__(self):
        return self.ok


@dataclass(frozen=True, eq=False)
class GoodSemigroup:
    dim: int
    conductor: Point
    smalls: frozenset = field(repr=False)

    def __post_init__(self):
        if self.dim < 1 or len(self.conductor) != self.dim:
            raise DimensionMismatch("conductor has wrong length", conductor=list(self.conductor))
        for p in self.smalls:
            if len(p) != self.dim:
                raise DimensionMismatch("small element has wrong length", point=list(p))

    # equality is set equality of the truncated data
    def __eq__(self, other):
        if not isinstance(other, GoodSemigroup):
            return NotImplemented
        return (self.dim == other.dim and self.conductor == other.conductor
                and self.smalls == other.smalls)

    def __hash__(self):
        return hash((self.dim, self.conductor, self.smalls))

    def __repr__(self):
        return f"GoodSemigroup(dim={self.dim}, conductor={self.conductor}, |smalls|={len(self.smalls)})"

    def __contains__(self, alpha):
        return contains(self, alpha)

    @property
    def gamma(self) -> Point:
        return tuple(c - 1 for c in self.conductor)

    @cached_property
    def sorted_smalls(self) -> tuple:
        return tuple(sorted(self.smalls))

    @cached_property
    def mask(self) -> np.ndarray:
        """Boolean membership array over the box ``[0, conductor]``."""
        m = np.zeros(tuple(c + 1 for c in self.conductor), dtype=bool)
        if self.smalls:
            idx = np.array(self.sorted_smalls, dtype=np.int64).T
            m[tuple(idx)] = True
        return m

    def contains_array(self, points: np.ndarray) -> np.ndarray:
        """Vectorised membership for an ``(n, d)`` array of non-negative points."""
        pts = np.asarray(points, dtype=np.int64)
        if pts.size == 0:
            return np.zeros(len(pts), dtype=bool)
        ok = (pts >= 0).all(axis=1)
        capped = np.minimum(np.maximum(pts, 0), np.array(self.conductor))
        return ok & self.mask[tuple(capped.T)]

    def box_points(self, bound: Point) -> list:
        """All elements of S in the box ``[0, bound]`` (lexicographic)."""
        if len(bound) != self.dim:
            raise DimensionMismatch("bound has wrong length")
        grid = np.indices(tuple(b + 1 for b in bound)).reshape(self.dim, -1).T
        keep = self.contains_array(grid)
        return [tuple(int(v) for v in row) for row in grid[keep]]

    @property
    def is_local(self) -> bool:
        zero = (0,) * self.dim
        if self.dim > 1 and 0 in self.conductor:
            return False
        return all(p == zero or all(x > 0 for x in p) for p in self.smalls)

    def to_json(self) -> dict:
        return {"dim": self.dim, "conductor": list(self.conductor),
                "smalls": [list(p) for p in self.sorted_smalls]}


def make_semigroup(smalls: Iterable, conductor: Sequence[int], check: bool = True) -> GoodSemigroup:
    conductor = tuple(int(c) for c in conductor)
    pts = frozenset(cap_point(tuple(int(x) for x in p), conductor) for p in smalls)
    if not pts:
        raise EmptySet("no elements given")
    S = GoodSemigroup(len(conductor), conductor, pts)
    if check:
        rep = verify_good(pts, conductor)
        if not rep.ok:
            raise NotGood("input fails the good-semigroup axioms", violations=list(rep.violations)[:5])
    return S


def semigroup_from_membership(dim: int, conductor: Point, member) -> GoodSemigroup:
    """Build the truncated semigroup from a membership predicate on the box."""
    grid = np.indices(tuple(c + 1 for c in conductor)).reshape(dim, -1).T
    pts = [tuple(int(v) for v in row) for row in grid if member(tuple(int(v) for v in row))]
    return GoodSemigroup(dim, tuple(conductor), frozenset(pts))


def full_lattice(d: int) -> GoodSemigroup:
    return GoodSemigroup(d, (0,) * d, frozenset({(0,) * d}))


def numerical(generators: Sequence[int]) -> GoodSemigroup:
    """The numerical semigroup generated by coprime positive integers, as d=1."""
    gens = sorted(set(int(g) for g in generators if g > 0))
    if not gens:
        return full_lattice(1)
    g = 0
    for x in gens:
        g = gcd(g, x)
    if g != 1:
        raise NotGood("generators are not coprime", generators=gens)
    # Frobenius number is below m * max (crude but safe)
    limit = gens[0] * gens[-1] + 1
    member = [False] * (limit + 1)
    member[0] = True
    for n in range(1, limit + 1):
        member[n] = any(n >= x and member[n - x] for x in gens)
    c = limit
    while c > 0 and member[c - 1]:
        c -= 1
    return GoodSemigroup(1, (c,), frozenset((n,) for n in range(c + 1) if member[n]))


def contains(S: GoodSemigroup, alpha) -> bool:
    alpha = tuple(alpha)
    if len(alpha) != S.dim:
        raise DimensionMismatch(f"point of dimension {len(alpha)} for S of dimension {S.dim}")
    if any(x < 0 for x in alpha):
        return False
    return cap_point(alpha, S.conductor) in S.smalls


# -- axioms ----------------------------------------------------------------

def _escape_tables(mask: np.ndarray, d: int) -> np.ndarray:
    """Lookup tables for the (G2) escape condition.

    ``T[i, D][delta]`` says whether some eps in S has eps_i > delta_i,
    eps_j == delta_j for j in D and eps_j >= delta_j for the remaining j,
    under capped semantics (at the cap, "greater" means "also capped").
    """
    tables = np.zeros((d, 1 << d) + mask.shape, dtype=bool)
    for i in range(d):
        for code in range(1 << d):
            if code >> i & 1:
                continue
            t = mask.copy()
            for j in range(d):
                if j == i or code >> j & 1:
                    continue
                t = np.flip(np.logical_or.accumulate(np.flip(t, axis=j), axis=j), axis=j)
            # strict in coordinate i: OR over (x, cap], and at the cap itself
            acc = np.flip(np.logical_or.accumulate(np.flip(t, axis=i), axis=i), axis=i)
            strict = np.zeros_like(t)
            n = t.shape[i]
            sl_lo = [slice(None)] * d
            sl_hi = [slice(None)] * d
            sl_lo[i] = slice(0, n - 1)
            sl_hi[i] = slice(1, n)
            strict[tuple(sl_lo)] = acc[tuple(sl_hi)]
            sl_top = [slice(None)] * d
            sl_top[i] = slice(n - 1, n)
            strict[tuple(sl_top)] = t[tuple(sl_top)]
            tables[i, code] = strict
    return tables


def verify_good(smalls: Iterable, conductor: Sequence[int], max_witnesses: int = 20) -> GoodReport:
    """Check (G1), (G2), additive closure and conductor minimality.

    ``smalls`` are points in ``[0, conductor]`` with capped semantics at the
    conductor.  Violations are reported as ``(axiom, witness)`` pairs.
    """
    conductor = tuple(int(c) for c in conductor)
    pts = sorted(set(tuple(int(x) for x in p) for p in smalls))
    if not pts:
        raise EmptySet("empty point set")
    d = len(conductor)
    zero = (0,) * d
    if zero not in pts:
        raise EmptySet("0 is not in the set")
    if conductor not in pts:
        raise ConductorMissing("conductor is not in the set", conductor=list(conductor))
    for p in pts:
        if len(p) != d or not leq(p, conductor) or min(p) < 0:
            raise DimensionMismatch("point outside the truncation box", point=list(p))

    violations = []

    def note(axiom, witness):
        if len(violations) < max_witnesses:
            violations.append((axiom, witness))

    arr = np.array(pts, dtype=np.int64)
    cap = np.array(conductor, dtype=np.int64)
    mask = np.zeros(tuple(c + 1 for c in conductor), dtype=bool)
    mask[tuple(arr.T)] = True
    tables = _escape_tables(mask, d)
    weights = 1 << np.arange(d)
    failed = set()

    for a_idx, a in enumerate(arr):
        rest = arr[a_idx:]
        w = np.minimum(rest, a)
        bad = ~mask[tuple(w.T)]
        if bad.any() and "G1" not in failed:
            b = rest[np.argmax(bad)]
            note("G1", (tuple(int(x) for x in a), tuple(int(x) for x in b)))
            failed.add("G1")
        s = np.minimum(rest + a, cap)
        bad = ~mask[tuple(s.T)]
        if bad.any() and "closure" not in failed:
            b = rest[np.argmax(bad)]
            note("closure", (tuple(int(x) for x in a), tuple(int(x) for x in b)))
            failed.add("closure")
        if "G2" in failed:
            continue
        eq = rest == a
        diff_code = ((~eq) * weights).sum(axis=1)
        for i in range(d):
            sel = eq[:, i] & (diff_code != 0)
            if not sel.any():
                continue
            ws = w[sel]
            codes = diff_code[sel]
            ok = tables[(np.full(len(ws), i), codes) + tuple(ws.T)]
            if not ok.all():
                b = rest[sel][np.argmin(ok)]
                note("G2", (tuple(int(x) for x in a), tuple(int(x) for x in b)))
                failed.add("G2")
                break
        # a capped point stands for distinct points agreeing off the capped coordinates
        if "G2" not in failed and (a == cap).any():
            for i in range(d):
                if a[i] == cap[i]:
                    continue
                if not tables[(i, 0) + tuple(a)]:
                    note("G2", (tuple(int(x) for x in a), tuple(int(x) for x in a)))
                    failed.add("G2")
                    break

    for i in range(d):
        if conductor[i] > 0:
            below = list(conductor)
            below[i] -= 1
            if mask[tuple(below)]:
                note("conductor", tuple(below))
    return GoodReport(not violations, tuple(violations))


# -- derived data ----------------------------------------------------------

def fine_multiplicity(S: GoodSemigroup) -> Point:
    """The minimal element of S with every coordinate positive."""
    bound = tuple(c + 1 for c in S.conductor)
    pos = [p for p in S.box_points(bound) if all(x > 0 for x in p)]
    m = pos[0]
    for p in pos[1:]:
        m = wedge(m, p)
    return m


def product(S1: GoodSemigroup, S2: GoodSemigroup) -> GoodSemigroup:
    smalls = frozenset(a + b for a in S1.smalls for b in S2.smalls)
    return GoodSemigroup(S1.dim + S2.dim, S1.conductor + S2.conductor, smalls)


def product_many(factors: Sequence[GoodSemigroup]) -> GoodSemigroup:
    out = factors[0]
    for f in factors[1:]:
        out = product(out, f)
    return out


def _check_index_set(S: GoodSemigroup, index: Iterable[int]) -> tuple:
    idx = tuple(sorted(set(int(i) for i in index)))
    if not idx or idx[0] < 0 or idx[-1] >= S.dim:
        raise BadIndexSet("index set must be a nonempty subset of the coordinates", index=list(idx))
    return idx


def minimize_conductor(points: Iterable, conductor: Point) -> tuple:
    """Lower a valid truncation bound to the minimal conductor.

    ``points`` must be closed in the capped sense at ``conductor``.  A bound
    ``c`` can be lowered in coordinate i iff ``c - e_i`` is itself present.
    """
    pts = set(points)
    c = list(conductor)
    changed = True
    while changed:
        changed = False
        for i in range(len(c)):
            if c[i] == 0:
                continue
            below = tuple(c[:i] + [c[i] - 1] + c[i + 1:])
            if below in pts:
                c[i] -= 1
                pts = {cap_point(p, tuple(c)) for p in pts}
                changed = True
    return tuple(c), frozenset(pts)


def project(S: GoodSemigroup, index: Iterable[int], check: bool = True) -> GoodSemigroup:
    """Projection of S onto the coordinates in ``index`` (0-based)."""
    idx = _check_index_set(S, index)
    c0 = tuple(S.conductor[i] for i in idx)
    pts = {tuple(p[i] for i in idx) for p in S.smalls}
    c, pts = minimize_conductor(pts, c0)
    P = GoodSemigroup(len(idx), c, pts)
    if check:
        rep = verify_good(pts, c)
        if not rep.ok:
            raise NotGood("projection is not a good semigroup", index=list(idx),
                          violations=list(rep.violations)[:3])
    return P


# -- Delta sets and complete infima ----------------------------------------

def delta(S: GoodSemigroup, alpha: Point, kind: str = "union", U=None, cap: Point | None = None) -> set:
    """Truncated Delta-sets of S at ``alpha``.

    ``kind`` is one of ``"U"`` (equal on U, strictly larger elsewhere),
    ``"U-tilde"`` (equal on U, larger or equal elsewhere, minus alpha),
    ``"i"`` (U = {i}) or ``"union"`` (union over all i).  Points are taken in
    the box ``[0, cap]`` (default: the conductor) with capped semantics.
    """
    cap = tuple(cap) if cap is not None else S.conductor
    alpha = tuple(alpha)
    if len(alpha) != S.dim:
        raise DimensionMismatch("alpha has wrong dimension")
    d = S.dim
    if kind == "union":
        out = set()
        for i in range(d):
            out |= delta(S, alpha, "U", (i,), cap)
        return out
    if kind == "i":
        return delta(S, alpha, "U", (int(U),), cap)
    Uset = set(int(u) for u in U)
    if not Uset or not Uset < set(range(d)):
        raise BadIndexSet("U must be a nonempty proper subset", U=sorted(Uset))
    pts = S.box_points(cap)
    return delta_points(pts, alpha, Uset, tilde=(kind == "U-tilde"), cap=cap)


def delta_points(points: Iterable, alpha: Point, U: set, tilde: bool = False, cap: Point | None = None) -> set:
    out = set()
    for b in points:
        ok = True
        for j, (x, y) in enumerate(zip(alpha, b)):
            if j in U:
                if x != y:
                    ok = False
                    break
            elif tilde:
                if y < x:
                    ok = False
                    break
            elif not (y > x or (cap is not None and x == cap[j] and y == cap[j])):
                ok = False
                break
        if ok and (not tilde or b != alpha):
            out.add(b)
    return out


@dataclass(frozen=True)
class InfimumWitness:
    betas: tuple
    sets: tuple  # the F_j, 0-based coordinate sets


def is_complete_infimum(A: Iterable, alpha: Point, cap: Point | None = None):
    """Search for a complete-infimum witness of ``alpha`` among ``A``.

    Each witness beta^(j) agrees with alpha exactly on F_j and is larger on the
    complement; the complements partition the coordinates, so the pairwise
    infima are alpha and the F_j have empty intersection.  With a cap,
    coordinates of alpha at the cap may be raised by any witness capped there.
    Returns an :class:`InfimumWitness` or None.
    """
    alpha = tuple(alpha)
    d = len(alpha)
    capped = [cap is not None and alpha[j] == cap[j] for j in range(d)]
    free = [j for j in range(d) if not capped[j]]
    Q = [j for j in range(d) if capped[j]]
    full = (1 << len(free)) - 1
    by_mask = {}
    for b in A:
        b = tuple(b)
        if b == alpha:
            continue
        mask = 0
        ok = True
        for pos, j in enumerate(free):
            if b[j] < alpha[j]:
                ok = False
                break
            if b[j] > alpha[j]:
                mask |= 1 << pos
        if not ok or mask == 0:
            continue
        if any(b[j] != cap[j] for j in Q):
            continue
        by_mask.setdefault(mask, b)
    if not free:
        return None
    # exact cover of the uncapped coordinates by at least two raise-sets
    masks = sorted(by_mask)

    def search(covered, chosen):
        if covered == full:
            return chosen if len(chosen) >= 2 else None
        low = (~covered) & -(~covered) & full
        for m in masks:
            if m & low and not m & covered:
                r = search(covered | m, chosen + [m])
                if r is not None:
                    return r
        return None

    found = search(0, [])
    if found is None:
        return None
    betas = tuple(by_mask[m] for m in found)
    sets = []
    for n, m in enumerate(found):
        raised = {free[p] for p in range(len(free)) if m >> p & 1}
        if n == 0:
            raised |= set(Q)  # the first witness carries the capped directions
        sets.append(frozenset(set(range(d)) - raised))
    return InfimumWitness(betas, tuple(sets))
