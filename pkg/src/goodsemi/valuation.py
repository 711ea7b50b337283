"""Value semigroups of parametrized curves via rank computations.

The ring K[[x]][y] is spanned, modulo t^B on every branch, by the monomials
x^a y^b with b < N = sum of the orders of x.  For a point alpha below B let
l(alpha) be the codimension of the subspace of elements with componentwise
order >= alpha.  Over an infinite field alpha is a value iff raising any one
coordinate by one strictly increases l.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import gmpy2
import numpy as np

from .curve import CurveParam
from .errors import BoundTooSmall, InsufficientPrecision
from .semigroup import GoodSemigroup, verify_good, NotGood

log = logging.getLogger(__name__)

mpq = gmpy2.mpq
ZERO = mpq(0)


def _dense(f, bound: int) -> list:
    if f.precision is not None and f.precision < bound:
        raise InsufficientPrecision("series precision below the requested bound",
                                    precision=f.precision, bound=bound)
    out = [ZERO] * bound
    for k, v in f.terms:
        if k >= bound:
            break
        out[k] = mpq(v.numerator, v.denominator)
    return out


def _mul_trunc(a: list, b: list, bound: int) -> list:
    out = [ZERO] * bound
    nz_b = [(j, v) for j, v in enumerate(b) if v]
    for i, u in enumerate(a):
        if not u:
            continue
        for j, v in nz_b:
            if i + j >= bound:
                break
            out[i + j] += u * v
    return out


@dataclass
class _Row:
    vec: list
    lead: int | None  # order of the inner component, None if it vanishes


class _Layout:
    def __init__(self, bound: tuple):
        d = len(bound)
        self.bound = bound
        self.inner = max(range(d), key=lambda i: (bound[i], -i))
        self.outer = [i for i in range(d) if i != self.inner]
        self.offset = {}
        pos = 0
        for i in self.outer + [self.inner]:
            self.offset[i] = pos
            pos += bound[i]
        self.ncols = pos

    def col(self, i: int, k: int) -> int:
        return self.offset[i] + k


def _span_rows(c: CurveParam, bound: tuple, layout: _Layout) -> list:
    xs = [_dense(b.x, B) for b, B in zip(c.branches, bound)]
    ys = [_dense(b.y, B) for b, B in zip(c.branches, bound)]
    xv = c.x_values()
    N = sum(xv)
    a_max = max(-(-B // v) for B, v in zip(bound, xv))
    rows = []
    ypow = [[mpq(1)] + [ZERO] * (B - 1) for B in bound]
    for b in range(N):
        cur = ypow
        for a in range(a_max):
            vec = [ZERO] * layout.ncols
            nonzero = False
            for i, comp in enumerate(cur):
                off = layout.offset[i]
                for k, v in enumerate(comp):
                    if v:
                        vec[off + k] = v
                        nonzero = True
            if not nonzero:
                break
            rows.append(vec)
            cur = [_mul_trunc(comp, x, B) for comp, x, B in zip(cur, xs, bound)]
        ypow = [_mul_trunc(comp, y, B) for comp, y, B in zip(ypow, ys, bound)]
    return rows


def _echelon(rows: list, layout: _Layout) -> list:
    """Independent rows, with distinct inner orders among rows whose inner
    component does not vanish."""
    inner_cols = [layout.col(layout.inner, k) for k in range(layout.bound[layout.inner])]
    outer_cols = [layout.col(i, k) for i in layout.outer for k in range(layout.bound[i])]
    pending = [list(r) for r in rows]
    done = []
    for kind, cols in (("inner", inner_cols), ("outer", outer_cols)):
        for n, col in enumerate(cols):
            piv = next((r for r in pending if r[col]), None)
            if piv is None:
                continue
            pending.remove(piv)
            pv = piv[col]
            for r in pending:
                f = r[col]
                if f:
                    f = f / pv
                    for j in range(layout.ncols):
                        if piv[j]:
                            r[j] -= f * piv[j]
            done.append(_Row(piv, n if kind == "inner" else None))
    return done


def _restrict(W: list, col: int) -> list:
    hits = [r for r in W if r.vec[col]]
    if not hits:
        return W
    free = [r for r in hits if r.lead is None]
    piv = free[0] if free else max(hits, key=lambda r: r.lead)
    pv = piv.vec[col]
    support = [j for j, v in enumerate(piv.vec) if v]
    out = []
    for r in W:
        if r is piv:
            continue
        f = r.vec[col]
        if f:
            f = f / pv
            vec = list(r.vec)
            for j in support:
                vec[j] -= f * piv.vec[j]
            out.append(_Row(vec, r.lead))
        else:
            out.append(r)
    return out


def codimension_table(c: CurveParam, bound: tuple) -> np.ndarray:
    """Array of l(alpha) for 0 <= alpha <= bound (inclusive)."""
    bound = tuple(int(b) for b in bound)
    layout = _Layout(bound)
    W0 = _echelon(_span_rows(c, bound, layout), layout)
    dimV = len(W0)
    table = np.zeros(tuple(b + 1 for b in bound), dtype=np.int64)
    inner = layout.inner
    Bd = bound[inner]
    outer = layout.outer

    def leaf(W, prefix):
        leads = np.array(sorted(r.lead for r in W if r.lead is not None), dtype=np.int64)
        counts = np.searchsorted(leads, np.arange(Bd + 1), side="left")
        idx = [slice(None)] * len(bound)
        for i, v in zip(outer, prefix):
            idx[i] = v
        table[tuple(idx)] = (dimV - len(W)) + counts

    def descend(level, W, prefix):
        if level == len(outer):
            leaf(W, prefix)
            return
        i = outer[level]
        for v in range(bound[i] + 1):
            descend(level + 1, W, prefix + [v])
            if v < bound[i]:
                W = _restrict(W, layout.col(i, v))

    descend(0, W0, [])
    return table


def membership_from_table(table: np.ndarray) -> np.ndarray:
    """Values in the box [0, bound - 1]: every unit raise increases l."""
    d = table.ndim
    core = tuple(slice(0, n - 1) for n in table.shape)
    base = table[core]
    ok = np.ones(base.shape, dtype=bool)
    for i in range(d):
        up = tuple(slice(1, n) if j == i else slice(0, n - 1) for j, n in enumerate(table.shape))
        ok &= table[up] > base
    return ok


def conductor_from_membership(M: np.ndarray) -> tuple:
    """Conductor read off the top faces of the box (valid when box - 1 >= c)."""
    d = M.ndim
    c = []
    for i in range(d):
        idx = tuple(slice(None) if j == i else M.shape[j] - 1 for j in range(d))
        line = M[idx]
        gaps = np.flatnonzero(~line)
        c.append(int(gaps.max()) + 1 if len(gaps) else 0)
    return tuple(c)


def semigroup_in_bound(c: CurveParam, bound: tuple) -> GoodSemigroup:
    """Value semigroup from one bound; BoundTooSmall if the bound cannot
    certify the conductor."""
    bound = tuple(int(b) for b in bound)
    if len(bound) != c.d:
        raise ValueError("bound has wrong dimension")
    table = codimension_table(c, bound)
    M = membership_from_table(table)
    cond = conductor_from_membership(M)
    omega = c.x_values()
    dimV = int(table[tuple(bound)])
    if any(b < ci + w for b, ci, w in zip(bound, cond, omega)):
        raise BoundTooSmall("bound does not exceed conductor + v(x)", bound=list(bound),
                            conductor=list(cond))
    above = dimV - int(table[cond])
    if above != sum(b - ci for b, ci in zip(bound, cond)):
        raise BoundTooSmall("conductor candidate is not certified", bound=list(bound),
                            conductor=list(cond))
    grid = np.indices(tuple(x + 1 for x in cond)).reshape(c.d, -1).T
    keep = M[tuple(grid.T)]
    smalls = frozenset(tuple(int(v) for v in row) for row in grid[keep])
    S = GoodSemigroup(c.d, cond, smalls)
    rep = verify_good(smalls, cond)
    if not rep.ok:
        raise NotGood("computed value set fails the axioms", violations=list(rep.violations)[:3])
    return S


def initial_bound(c: CurveParam) -> tuple:
    xv = c.x_values()
    yv = c.y_values()
    return tuple(2 * (x + min(y, 4 * x)) + x + 2 for x, y in zip(xv, yv))


def value_semigroup(c: CurveParam, bound=None, max_rounds: int = 8) -> GoodSemigroup:
    """Value semigroup of the curve, truncated at its conductor.

    With an explicit bound only that bound is tried.  Otherwise the bound is
    grown until the conductor is certified.
    """
    if bound is not None:
        return semigroup_in_bound(c, tuple(bound))
    B = initial_bound(c)
    for _ in range(max_rounds):
        try:
            return semigroup_in_bound(c, B)
        except BoundTooSmall as exc:
            cond = exc.details.get("conductor")
            omega = c.x_values()
            if cond is not None and "exceed" in str(exc):
                grown = [max(b + b // 2, ci + w + 2) for b, ci, w in zip(B, cond, omega)]
            else:
                grown = [2 * b for b in B]
            log.info("value_semigroup: bound %s too small, retrying with %s", B, grown)
            B = tuple(grown)
    raise BoundTooSmall("no certified conductor within the search budget", bound=list(B))
