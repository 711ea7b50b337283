"""Multiplicity sequences of plane branches and their combinatorial types."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import InvalidHType, InvalidSequence, NegativeCoordinate, NotGood, NotPlane, OmegaNotInS
from .semigroup import GoodSemigroup, full_lattice


@dataclass(frozen=True)
class PlaneSequence:
    """e_0, e_1, ... stored up to its first 1; every later entry is 1."""
    prefix: tuple

    @classmethod
    def of(cls, seq: Sequence[int]) -> "PlaneSequence":
        seq = [int(v) for v in seq]
        if not seq or any(v < 1 for v in seq):
            raise InvalidSequence("entries must be positive integers", sequence=seq)
        if 1 not in seq:
            seq = seq + [1]
        cut = seq.index(1)
        if any(v != 1 for v in seq[cut:]):
            raise InvalidSequence("entries after the first 1 must all be 1", sequence=seq)
        pre = tuple(seq[:cut + 1])
        rep = is_plane_sequence(pre)
        if not rep.ok:
            raise InvalidSequence(rep.reason, sequence=list(pre))
        return cls(pre)

    def __getitem__(self, j: int) -> int:
        if j < 0:
            raise IndexError("negative index")
        return self.prefix[j] if j < len(self.prefix) else 1

    def take(self, n: int) -> tuple:
        return tuple(self[j] for j in range(n))

    def shifted(self, n: int = 1) -> "PlaneSequence":
        rest = self.prefix[n:] or (1,)
        return PlaneSequence(rest)

    @property
    def is_smooth(self) -> bool:
        return self.prefix == (1,)

    def to_json(self) -> dict:
        return {"sequence": list(self.prefix)}

    def __repr__(self):
        return "PlaneSequence(" + ",".join(map(str, self.prefix)) + ",1,...)"


@dataclass(frozen=True)
class PlaneReport:
    ok: bool
    reason: str = ""
    restriction_numbers: tuple = ()
    free: tuple = field(default=())

    def __bool__(self):
        return self.ok


def _extended(seq: Sequence[int], extra: int = 3) -> list:
    seq = [int(v) for v in seq]
    return seq + [1] * extra


def _sum_lengths(e: list) -> list:
    """h(i) with e_i = e_{i+1} + ... + e_{i+h(i)}, or None if no such h."""
    out = []
    for i in range(len(e)):
        total, h = 0, 0
        while total < e[i] and i + h + 1 < len(e):
            h += 1
            total += e[i + h]
        out.append(h if total == e[i] else None)
    return out


def restriction_numbers(seq: Sequence[int], upto: int | None = None) -> tuple:
    """r(e_j) for j = 0..upto: the number of sums e_i = e_{i+1}+...+e_{i+h(i)}
    that contain e_j (r(e_0) = 0)."""
    pre = list(seq)
    n = len(pre) + 2 if upto is None else upto + 1
    e = _extended(pre, extra=n + max(pre) + 2)
    h = _sum_lengths(e)
    r = [0] * n
    for i in range(n):
        if h[i] is None:
            continue
        for j in range(i + 1, min(i + h[i], n - 1) + 1):
            r[j] += 1
    return tuple(r)


def is_plane_sequence(seq: Sequence[int]) -> PlaneReport:
    """Non-increasing and satisfying the proximity relation (tail of 1s implied)."""
    seq = [int(v) for v in seq]
    if not seq or any(v < 1 for v in seq):
        return PlaneReport(False, "entries must be positive")
    e = _extended(seq, extra=max(seq) + 2)
    for i in range(len(e) - 1):
        if e[i + 1] > e[i]:
            return PlaneReport(False, f"e_{i + 1} > e_{i}")
    for i in range(len(seq)):
        if e[i] > e[i + 1]:
            q, r = divmod(e[i], e[i + 1])
            for j in range(1, q + 1):
                if e[i + j] != e[i + 1]:
                    return PlaneReport(False, f"proximity fails after e_{i}")
            if r and e[i + q + 1] != r:
                return PlaneReport(False, f"proximity remainder fails after e_{i}")
    r = restriction_numbers(seq)
    return PlaneReport(True, "", r, tuple(x <= 1 for x in r))


# -- Hamburger-Noether types -------------------------------------------------
#
# A type is a tuple of rows; a plain row is (h,), a bracket row is (k, h), and
# the last row has h = None (infinite).  The smooth type is ((None,),).

def runs(e: PlaneSequence) -> tuple:
    """(n_j, h_j) runs of the sequence; the final run is (1, None)."""
    out = []
    for v in e.prefix[:-1]:
        if out and out[-1][0] == v:
            out[-1][1] += 1
        else:
            out.append([v, 1])
    out.append([1, None])
    return tuple((n, h) for n, h in out)


def h_from_sequence(e) -> tuple:
    if not isinstance(e, PlaneSequence):
        e = PlaneSequence.of(e)
    rs = runs(e)
    rows = []
    for j, (n, h) in enumerate(rs):
        if j >= 1 and rs[j - 1][0] % n == 0:
            rows.append((rs[j - 1][0] // n, h))
        else:
            rows.append((h,))
    return tuple(rows)


def validate_htype(H) -> tuple:
    H = tuple(tuple(None if x in (None, "inf") else int(x) for x in row) for row in H)
    if not H:
        raise InvalidHType("empty type")
    r = len(H) - 1
    for j, row in enumerate(H):
        h = row[-1]
        if len(row) not in (1, 2):
            raise InvalidHType(f"row {j} has the wrong shape")
        if (h is None) != (j == r):
            raise InvalidHType("exactly the last row must be infinite")
        if h is not None and h < 1:
            raise InvalidHType(f"row {j} has h < 1")
        if len(row) == 2:
            k = row[0]
            if j == 0:
                raise InvalidHType("row 0 cannot be a bracket row")
            if k < 2 or (h is not None and k > h):
                raise InvalidHType(f"row {j} needs 2 <= k <= h")
    if r >= 1 and len(H[r]) != 2:
        raise InvalidHType("the last row must be a bracket row")
    return H


def sequence_from_h(H) -> PlaneSequence:
    H = validate_htype(H)
    r = len(H) - 1
    n = [0] * (r + 2)
    n[r] = 1
    for j in range(r, 0, -1):
        row = H[j]
        n[j - 1] = row[0] * n[j] if len(row) == 2 else row[0] * n[j] + n[j + 1]
    seq = []
    for j in range(r):
        seq += [n[j]] * H[j][-1]
    seq.append(1)
    e = PlaneSequence.of(seq)
    if h_from_sequence(e) != H:
        raise InvalidHType("type is not the type of its own sequence", htype=[list(x) for x in H])
    return e


def htype_to_json(H) -> dict:
    return {"htype": [["inf" if x is None else x for x in row] for row in H]}


def htype_from_json(obj) -> tuple:
    return validate_htype(obj["htype"] if isinstance(obj, dict) else obj)


# -- numerical semigroups ----------------------------------------------------

def semigroup_from_sequence(e) -> GoodSemigroup:
    """Value semigroup of a branch with multiplicity sequence e, by blowing
    down from the smooth branch."""
    from .blowup import blow_down_semigroup

    if not isinstance(e, PlaneSequence):
        e = PlaneSequence.of(e)
    S = full_lattice(1)
    for m in reversed(e.prefix[:-1]):
        try:
            S = blow_down_semigroup(S, (m,))
        except (OmegaNotInS, NotGood, NegativeCoordinate) as exc:
            raise InvalidSequence(f"blow-down by {m} fails: {exc}") from exc
    return S


def sequence_from_semigroup(S: GoodSemigroup) -> PlaneSequence:
    """Multiplicities along the blow-up chain; NotPlane if S is not the
    semigroup of a plane branch."""
    from .blowup import blow_up_semigroup

    if S.dim != 1:
        raise NotPlane("a branch semigroup is one-dimensional")
    seq = []
    T = S
    while T.conductor != (0,):
        if len(seq) > S.conductor[0] + 1:
            raise NotPlane("blow-up chain does not reach N")
        try:
            T, e = blow_up_semigroup(T)
        except (NegativeCoordinate, NotGood) as exc:
            raise NotPlane(f"blow-up leaves the plane-branch class: {exc}", sequence=seq) from exc
        seq.append(e[0])
    seq.append(1)
    rep = is_plane_sequence(seq)
    if not rep.ok:
        raise NotPlane("multiplicity sequence fails proximity", sequence=seq)
    e = PlaneSequence.of(seq)
    if semigroup_from_sequence(e) != S:
        raise NotPlane("semigroup differs from the one of its multiplicity sequence", sequence=seq)
    return e


def conductor_of_sequence(e) -> int:
    """Conductor of the branch semigroup, sum of e_i (e_i - 1)."""
    if not isinstance(e, PlaneSequence):
        e = PlaneSequence.of(e)
    return sum(v * (v - 1) for v in e.prefix)


def enumerate_plane_sequences(max_e0: int, max_len: int | None = None, max_conductor: int | None = None):
    """All plane sequences with e_0 <= max_e0, prefix length (before the
    final 1) at most max_len and conductor at most max_conductor."""
    out = []

    def grow(seq, budget):
        if seq and seq[-1] == 1:
            if is_plane_sequence(seq).ok:
                out.append(PlaneSequence(tuple(seq)))
            return
        if max_len is not None and len(seq) > max_len:
            return
        top = seq[-1] if seq else max_e0
        for v in range(top, 0, -1):
            cost = v * (v - 1)
            if budget is not None and cost > budget:
                continue
            nxt = seq + [v]
            # prune on the proximity prefix test: only drops fully inside nxt matter
            if not _prefix_ok(nxt):
                continue
            grow(nxt, None if budget is None else budget - cost)

    grow([], max_conductor)
    return sorted(out, key=lambda e: e.prefix)


def _prefix_ok(seq: list) -> bool:
    for i in range(len(seq) - 1):
        if seq[i] > seq[i + 1]:
            q, r = divmod(seq[i], seq[i + 1])
            for j in range(1, q + 1):
                if i + j < len(seq) and seq[i + j] != seq[i + 1]:
                    return False
            if r and i + q + 1 < len(seq) and seq[i + q + 1] != r:
                return False
    return True
