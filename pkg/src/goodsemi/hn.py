"""Hamburger-Noether expansions of plane branches and splitting data of pairs.

An expansion with respect to a transversal x is a chain z_{-1} = y, z_0 = x,
z_1, ..., z_r where each finite row j reads

    z_{j-1} = a_{j,1} z_j + ... + a_{j,h_j} z_j^{h_j} + z_j^{h_j} z_{j+1}

and the last row, with ord z_r = 1, is an infinite series in z_r.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .branch import PlaneSequence, h_from_sequence, sequence_from_h
from .curve import BranchParam, CurveParam
from .errors import (IdenticalBranches, InsufficientPrecision, InvalidSequence,
                     NoSuchK, NotAdmissible, NotTransversal)
from .series import TruncatedSeries, default_precision, format_fraction, parse_fraction, series_from_json, series_to_json


@dataclass(frozen=True)
class HNExpansion:
    rows: tuple        # finite rows: tuples of Fraction, a_{j,1..h_j}
    final: TruncatedSeries  # last row: coefficient of z_r^i at exponent i
    n: tuple           # n_j = ord z_j for j = 0..r

    @property
    def r(self) -> int:
        return len(self.rows)

    @property
    def h(self) -> tuple:
        return tuple(len(row) for row in self.rows) + (None,)

    def coeff(self, j: int, i: int) -> Fraction:
        """a_{j,i}; for the final row it may raise InsufficientPrecision."""
        if j < self.r:
            return self.rows[j][i - 1]
        return self.final.coeff(i)

    def to_json(self) -> dict:
        rows = [{"h": len(row), "a": [format_fraction(a) for a in row]} for row in self.rows]
        rows.append({"inf": True, "series": series_to_json(self.final)})
        return {"rows": rows, "n": list(self.n)}

    @classmethod
    def from_json(cls, obj) -> "HNExpansion":
        rows, final = [], None
        for item in obj["rows"]:
            if item.get("inf"):
                final = series_from_json(item["series"])
            else:
                a = tuple(parse_fraction(v) for v in item["a"])
                if len(a) != int(item["h"]):
                    raise ValueError("row length differs from h")
                rows.append(a)
        if final is None:
            raise ValueError("expansion needs a final row")
        n = obj.get("n")
        exp = cls(tuple(rows), final, tuple(n) if n else ())
        if not n:
            exp = cls(exp.rows, exp.final, _n_from_rows(exp))
        return exp


def _n_from_rows(exp: HNExpansion) -> tuple:
    hs = [len(row) for row in exp.rows]
    r = len(hs)
    n = [0] * (r + 2)
    n[r] = 1
    for j in range(r - 1, -1, -1):
        n[j] = hs[j] * n[j + 1] + n[j + 2]
    return tuple(n[:r + 1])


def hn_expand(b: BranchParam, work_precision: int | None = None) -> HNExpansion:
    """Expansion of a branch with respect to its x coordinate."""
    if work_precision is None:
        work_precision = default_precision()
    x, y = b.x, b.y
    vx, vy = x.order(), y.order()
    if vx is None or vx == math.inf or vx < 1:
        raise NotTransversal("x must have positive finite order")
    if vy is not None and vy != math.inf and vy < vx:
        raise NotTransversal("ord y < ord x; swap the coordinates first", orders=[vx, vy])
    rows, n = [], [vx]
    z_prev, z_cur = y, x
    while True:
        ncur = n[-1]
        if ncur == 1:
            return HNExpansion(tuple(rows), _final_row(z_prev, z_cur, work_precision), tuple(n))
        coeffs = []
        w = z_prev
        while True:
            q = w.divide(z_cur, work_precision)
            if q.precision is not None and q.precision < 1:
                raise InsufficientPrecision("row coefficient beyond the known precision", row=len(rows))
            a = q.coeff(0)
            coeffs.append(a)
            w = q - TruncatedSeries.make({0: a})
            vw = w.order()
            if vw == math.inf:
                raise InvalidSequence("parametrization is not primitive (not a branch)")
            if vw is None:
                raise InsufficientPrecision("row length undecidable at this precision", row=len(rows))
            if vw < ncur:
                rows.append(tuple(coeffs))
                z_prev, z_cur = z_cur, w
                n.append(vw)
                break


def _final_row(z_prev: TruncatedSeries, z_cur: TruncatedSeries, work_precision: int) -> TruncatedSeries:
    coeffs = {}
    w = z_prev
    i = 0
    while True:
        if w.is_zero():
            return TruncatedSeries.make(coeffs)
        q = w.divide(z_cur, work_precision)
        if q.precision is not None and q.precision < 1:
            return TruncatedSeries.make(coeffs, i + 1)
        i += 1
        a = q.coeff(0)
        coeffs[i] = a
        w = q - TruncatedSeries.make({0: a})
        if i > 4 * work_precision:
            return TruncatedSeries.make(coeffs, i + 1)


def hn_expand_auto(b: BranchParam, start: int | None = None, rounds: int = 4) -> HNExpansion:
    """hn_expand, doubling the working precision on InsufficientPrecision."""
    p = start or default_precision()
    for _ in range(rounds):
        try:
            return hn_expand(b, p)
        except InsufficientPrecision:
            p *= 2
    return hn_expand(b, p)


def multiplicity_sequence(exp: HNExpansion) -> PlaneSequence:
    seq = []
    for row, nj in zip(exp.rows, exp.n):
        seq += [nj] * len(row)
    return PlaneSequence.of(seq + [1])


def hn_to_param(exp: HNExpansion) -> BranchParam:
    """Parametrization with z_r = t, rebuilt row by row."""
    z_next = TruncatedSeries.monomial(1)   # z_r
    z_cur = exp.final                      # z_{r-1} as a series in t
    for j in range(exp.r - 1, -1, -1):
        # row j gives z_{j-1} from z_j = z_cur and z_{j+1} = z_next
        acc = TruncatedSeries.zero()
        pw = TruncatedSeries.one()
        for a in exp.rows[j]:
            pw = pw * z_cur
            if a:
                acc = acc + pw.scale(a)
        acc = acc + pw * z_next
        z_next, z_cur = z_cur, acc
    return BranchParam(z_next, z_cur)


# -- synthesis -----------------------------------------------------------------

FORCED_ZERO, FORCED_NONZERO, FREE = "zero", "nonzero", "free"


def slot_kinds(H) -> list:
    """Per finite row, the kind of each coefficient slot; plus the kinds of
    the first few slots of the final row as a callable."""
    kinds = []
    r = len(H) - 1
    for j in range(r):
        row = H[j]
        h = row[-1]
        if j == 0:
            kinds.append([FREE] * h)
        elif len(row) == 2:
            k = row[0]
            kinds.append([FORCED_ZERO] * (k - 1) + [FORCED_NONZERO] + [FREE] * (h - k))
        else:
            kinds.append([FORCED_ZERO] * h)
    return kinds


def final_kind(H, i: int) -> str:
    row = H[-1]
    if len(H) == 1:
        return FREE
    k = row[0]
    if i < k:
        return FORCED_ZERO
    return FORCED_NONZERO if i == k else FREE


def position_slot(H, p: int) -> tuple:
    """(row, index, kind) of coefficient position p (0-based)."""
    r = len(H) - 1
    for j in range(r):
        h = H[j][-1]
        if p < h:
            return (j, p + 1, slot_kinds(H)[j][p])
        p -= h
    return (r, p + 1, final_kind(H, p + 1))


def _expansion_from_values(H, values: dict) -> HNExpansion:
    """values maps (row, index) to a coefficient; missing slots are zero."""
    r = len(H) - 1
    rows = []
    for j in range(r):
        rows.append(tuple(Fraction(values.get((j, i), 0)) for i in range(1, H[j][-1] + 1)))
    final = TruncatedSeries.make({i: v for (j, i), v in values.items() if j == r})
    e = sequence_from_h(H)
    n = []
    for j in range(r):
        n.append(e[sum(H[m][-1] for m in range(j))])
    n.append(1)
    return HNExpansion(tuple(rows), final, tuple(n))


def synth_branch(e, policy: str = "generic") -> HNExpansion:
    """Expansion in reduced form with multiplicity sequence e.

    Free slots get 1, 2, 3, ... in order, forced nonzero slots get the next
    counter value, forced zeros stay 0.  Beyond the forced nonzero slot of the
    last row every coefficient is 0.  ``policy="minimal"`` leaves free slots 0.
    """
    if not isinstance(e, PlaneSequence):
        e = PlaneSequence.of(e)
    if policy not in ("generic", "minimal"):
        raise ValueError(f"unknown policy {policy!r}")
    H = h_from_sequence(e)
    values = {}
    counter = 1
    total = sum(row[-1] for row in H[:-1]) + (H[-1][0] if len(H) > 1 else 1)
    for p in range(total):
        j, i, kind = position_slot(H, p)
        if kind == FORCED_ZERO or (kind == FREE and policy == "minimal"):
            continue
        values[(j, i)] = counter
        counter += 1
    return _expansion_from_values(H, values)


def synth_curve(E: Sequence, K) -> list:
    """Expansions, all with respect to the same x, realizing multiplicity
    sequences E and pairwise splitting numbers K.

    K is a d x d matrix (diagonal ignored) or a dict {(i, j): k} with 0-based
    indices.  Pairs with k = -1 do not live in one local plane curve and are
    rejected.
    """
    E = [e if isinstance(e, PlaneSequence) else PlaneSequence.of(e) for e in E]
    d = len(E)
    from .tree import check_compatibility, k_matrix
    Km = k_matrix(K, d)
    rep = check_compatibility(Km)
    if not rep.ok:
        from .errors import NotCompatible
        raise NotCompatible("splitting numbers are not compatible", violations=rep.violations[:3])
    if any(Km[i][j] < 0 for i in range(d) for j in range(d) if i != j):
        raise NotAdmissible("k = -1 has no realization inside one plane curve; synthesize the components separately")
    from .tree import is_admissible
    for i in range(d):
        for j in range(i + 1, d):
            rep = is_admissible(E[i], E[j], Km[i][j])
            if not rep.ok:
                raise NotAdmissible("splitting number is not admissible", pair=[i + 1, j + 1],
                                    k=Km[i][j], clause=rep.failing)
    Hs = [h_from_sequence(e) for e in E]
    values = [dict() for _ in range(d)]
    sep = [max([Km[i][j] for j in range(d) if j != i], default=-1) + 1 for i in range(d)]
    depth = max(sep, default=0)
    for p in range(depth):
        classes = _classes(Km, d, p)
        for J in classes:
            sub = _classes(Km, d, p + 1, within=J)
            groups = {}
            for C in sub:
                slots = {position_slot(Hs[i], p) for i in C}
                if len(slots) != 1:
                    raise NotAdmissible("branches sharing a point disagree on the slot type",
                                        branches=[i + 1 for i in C], position=p)
                groups.setdefault(slots.pop(), []).append(C)
            for (j, i, kind), members in groups.items():
                if kind == FORCED_ZERO and len(members) > 1:
                    raise NotAdmissible("branches cannot separate at a forced-zero slot",
                                        branches=[sorted(x + 1 for x in C) for C in members], position=p)
                if kind == FORCED_ZERO:
                    continue
                for m, C in enumerate(members):
                    for b in C:
                        values[b][(j, i)] = m + 1
    out = []
    for b in range(d):
        H = Hs[b]
        counter = 1
        total = sum(row[-1] for row in H[:-1]) + (H[-1][0] if len(H) > 1 else 1)
        total = max(total, sep[b] + 1)
        for p in range(sep[b], total):
            j, i, kind = position_slot(H, p)
            if kind == FORCED_ZERO or j == len(H) - 1 and kind == FREE:
                continue
            values[b][(j, i)] = counter
            counter += 1
        out.append(_expansion_from_values(H, values[b]))
    return out


def _classes(Km, d: int, t: int, within=None) -> list:
    pool = sorted(within) if within is not None else list(range(d))
    out = []
    for i in pool:
        for C in out:
            if Km[i][C[0]] >= t:
                C.append(i)
                break
        else:
            out.append([i])
    return out


def synth_param(E: Sequence, K) -> CurveParam:
    return CurveParam(tuple(hn_to_param(x) for x in synth_curve(E, K)))


# -- splitting data ----------------------------------------------------------

@dataclass(frozen=True)
class SplittingData:
    s: int
    t: int
    k: int
    intersection: int

    def to_json(self) -> dict:
        return {"s": self.s, "t": self.t, "k": self.k, "intersection": self.intersection}


def splitting_data(A: HNExpansion, B: HNExpansion) -> SplittingData:
    """First differing row s, first differing slot t, splitting number k and
    intersection multiplicity of two branches expanded in the same x."""
    s = 0
    while s < min(A.r, B.r) and A.rows[s] == B.rows[s]:
        s += 1
    hA = A.h[s] if s < A.r else None
    hB = B.h[s] if s < B.r else None
    lim = min(x + 1 for x in (hA, hB) if x is not None) if (hA, hB) != (None, None) else None
    t = 1
    while lim is None or t < lim:
        try:
            same = A.coeff(s, t) == B.coeff(s, t)
        except InsufficientPrecision:
            if A.final.is_exact() and B.final.is_exact():
                raise
            raise InsufficientPrecision("branches agree to the known precision", row=s, index=t)
        if not same:
            break
        if lim is None and A.final.is_exact() and B.final.is_exact() and t > max(A.final.degree(), B.final.degree()):
            raise IdenticalBranches("the two expansions coincide")
        t += 1
    k = sum(A.h[j] for j in range(s)) + t - 1
    base = sum(A.h[j] * A.n[j] * B.n[j] for j in range(s))
    nA, nB = A.n[s], B.n[s]
    if hB is not None and t == hB + 1 and (hA is None or hB < hA):
        inter = base + hB * nA * nB + B.n[s + 1] * nA
    elif hA is not None and t == hA + 1 and (hB is None or hA < hB):
        inter = base + hA * nA * nB + A.n[s + 1] * nB
    else:
        inter = base + t * nA * nB
    return SplittingData(s, t, k, inter)


def noether_intersection(e, e2, k: int) -> int:
    """sum_{j <= k} e_j e'_j."""
    e = e if isinstance(e, PlaneSequence) else PlaneSequence.of(e)
    e2 = e2 if isinstance(e2, PlaneSequence) else PlaneSequence.of(e2)
    return sum(e[j] * e2[j] for j in range(k + 1))


def splitting_from_intersection(e, e2, m: int) -> int:
    """The k with noether_intersection(e, e2, k) = m; NoSuchK otherwise."""
    e = e if isinstance(e, PlaneSequence) else PlaneSequence.of(e)
    e2 = e2 if isinstance(e2, PlaneSequence) else PlaneSequence.of(e2)
    if m == 0:
        return -1
    total, k = 0, -1
    while total < m:
        k += 1
        total += e[k] * e2[k]
    if total != m:
        raise NoSuchK("intersection multiplicity is not a partial Noether sum", m=m)
    return k
