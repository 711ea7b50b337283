"""Splitting numbers, their admissibility and compatibility, and the
assembly and read-back of multiplicity trees."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

from .branch import PlaneSequence, is_plane_sequence, restriction_numbers
from .errors import GoodSemiError, InvalidSequence, MalformedTree, NotCompatible
from .treemodel import MultiplicityTree, TreeNode, node_id

log = logging.getLogger(__name__)


class AdmissibilityMismatch(GoodSemiError):
    code = "AdmissibilityMismatch"


@dataclass(frozen=True)
class Report:
    ok: bool
    failing: str = ""
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def _seq(e) -> PlaneSequence:
    return e if isinstance(e, PlaneSequence) else PlaneSequence.of(e)


def _flat(e: PlaneSequence, i: int) -> bool:
    return e[i - 1] == e[i]


def _conds12(e, e2, k, r, r2) -> str:
    """'' if clauses 1 and 2 hold for k, else the failing clause."""
    for i in range(1, k):
        if _flat(e, i) != _flat(e2, i):
            return "1"
    for j in range(k + 1):
        if r[j] != r2[j]:
            return "2"
    return ""


def _tables(e, e2, k):
    n = k + 3
    return restriction_numbers(e.prefix, upto=n), restriction_numbers(e2.prefix, upto=n)


def admissible_four_clause(e, e2, k: int) -> Report:
    """The four-clause definition."""
    e, e2 = _seq(e), _seq(e2)
    if k == -1:
        return Report(True)
    if k < -1:
        return Report(False, "range")
    r, r2 = _tables(e, e2, k)
    bad = _conds12(e, e2, k, r, r2)
    if bad:
        return Report(False, bad)
    if k >= 1 and e[k - 1] > e[k] and e2[k - 1] != e2[k]:
        return Report(False, "3")
    if k >= 1 and r[k] == r2[k] == r[k + 1] == r2[k + 1] == 2 and e[k - 1] == e[k] and not e2[k - 1] > e2[k]:
        return Report(False, "4")
    return Report(True)


def admissible_maximal(e, e2, k: int) -> Report:
    """Clauses 1 and 2, then either k is maximal for them or both points
    after k are free."""
    e, e2 = _seq(e), _seq(e2)
    if k == -1:
        return Report(True)
    if k < -1:
        return Report(False, "range")
    r, r2 = _tables(e, e2, k)
    bad = _conds12(e, e2, k, r, r2)
    if bad:
        return Report(False, bad)
    maximal = bool(_conds12(e, e2, k + 1, r, r2))
    if maximal or r[k + 1] == r2[k + 1] == 1:
        return Report(True)
    return Report(False, "3")


def is_admissible(e, e2, k: int, strict: bool = True) -> Report:
    """Verdict of the maximality form, cross-checked against the four-clause
    form.  With ``strict`` a disagreement raises AdmissibilityMismatch."""
    a = admissible_maximal(e, e2, k)
    b = admissible_four_clause(e, e2, k)
    if a.ok != b.ok:
        msg = f"admissibility forms disagree for {_seq(e)}, {_seq(e2)}, k={k}"
        if strict:
            raise AdmissibilityMismatch(msg, maximal=a.ok, four_clause=b.ok)
        log.error(msg)
    return a


def admissible_values(e, e2, kmax: int) -> list:
    return [k for k in range(-1, kmax + 1) if is_admissible(e, e2, k).ok]


# -- compatibility -------------------------------------------------------------

def k_matrix(K, d: int) -> list:
    """Normalize K (matrix, dict {(i,j): k} 0-based, or condensed upper
    triangle k12, k13, ..., k23, ...) to a symmetric matrix."""
    if isinstance(K, dict):
        M = [[0] * d for _ in range(d)]
        for (i, j), k in K.items():
            M[i][j] = M[j][i] = int(k)
        return M
    K = list(K)
    if K and not isinstance(K[0], (list, tuple)):
        M = [[0] * d for _ in range(d)]
        it = iter(K)
        for i in range(d):
            for j in range(i + 1, d):
                M[i][j] = M[j][i] = int(next(it))
        return M
    M = [[int(v) for v in row] for row in K]
    for i in range(d):
        for j in range(d):
            if i != j and M[i][j] != M[j][i]:
                raise NotCompatible("splitting matrix is not symmetric", pair=[i + 1, j + 1])
    return M


def check_compatibility(K) -> Report:
    """For distinct i, j, t: k_{j,t} > k_{j,i} forces k_{i,t} = k_{i,j}."""
    d = len(K)
    viol = []
    for i in range(d):
        for j in range(d):
            for t in range(d):
                if len({i, j, t}) < 3:
                    continue
                if K[j][t] > K[j][i] and K[i][t] != K[i][j]:
                    viol.append((i + 1, j + 1, t + 1))
    return Report(not viol, "compatibility" if viol else "", viol)


# -- trees -----------------------------------------------------------------------

@dataclass(frozen=True)
class TreeData:
    E: tuple
    K: tuple  # symmetric matrix as tuple of tuples

    @property
    def d(self) -> int:
        return len(self.E)

    def to_json(self) -> dict:
        return {"E": [list(e.prefix) for e in self.E], "K": [list(row) for row in self.K]}


def _classes(K, members, t: int) -> list:
    out = []
    for i in members:
        for C in out:
            if K[i][C[0]] >= t:
                C.append(i)
                break
        else:
            out.append([i])
    return out


def build_tree(E: Sequence, K) -> MultiplicityTree:
    """Tree whose branch i follows e^i and shares exactly k_{i,j} + 1 vertices
    with branch j."""
    E = [_seq(e) for e in E]
    d = len(E)
    K = k_matrix(K, d)
    rep = check_compatibility(K)
    if not rep.ok:
        raise NotCompatible("splitting numbers violate compatibility", violations=rep.violations[:5])
    sep = [max([K[i][j] for j in range(d) if j != i], default=-1) + 1 for i in range(d)]
    last = []
    for i in range(d):
        t = sep[i]
        while E[i][t] != 1:
            t += 1
        last.append(t)
    nodes = []

    def visit(members, t, parent):
        if all(t > last[i] for i in members):
            return
        weight = tuple(E[i][t] if i in members else 0 for i in range(d))
        nid = node_id(t, members, d)
        nodes.append(TreeNode(nid, parent, weight, t, frozenset(members)))
        for C in _classes(K, sorted(members), t + 1):
            visit(C, t + 1, nid)

    for C in _classes(K, list(range(d)), 0):
        visit(C, 0, None)
    return MultiplicityTree(d, tuple(nodes)).canonical()


def read_tree(T: MultiplicityTree) -> TreeData:
    d = T.d
    paths = []
    for i in range(d):
        path = T.branch_path(i)
        if not path or [n.depth for n in path] != list(range(len(path))):
            raise MalformedTree(f"branch {i + 1} does not form a path from a root", branch=i + 1)
        for a, b in zip(path, path[1:]):
            if b.parent != a.id:
                raise MalformedTree(f"branch {i + 1} path is broken at {b.id}", branch=i + 1)
        paths.append(path)
    E = []
    for i, path in enumerate(paths):
        seq = [n.weight[i] for n in path]
        if any(v <= 0 for v in seq):
            raise MalformedTree(f"branch {i + 1} has a zero weight on its own path", branch=i + 1)
        if seq[-1] != 1:
            seq.append(1)
        try:
            E.append(PlaneSequence.of(seq) if is_plane_sequence(seq).ok else PlaneSequence(_raw(seq)))
        except InvalidSequence:
            E.append(PlaneSequence(_raw(seq)))
    K = [[0] * d for _ in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            common = {n.id for n in paths[i]} & {n.id for n in paths[j]}
            K[i][j] = K[j][i] = len(common) - 1
    for n in T.nodes:
        for i in range(d):
            if (i in n.branches) != (n.weight[i] > 0):
                raise MalformedTree(f"node {n.id} weight does not match its branch set", node=n.id)
    return TreeData(tuple(E), tuple(tuple(r) for r in K))


def _raw(seq) -> tuple:
    seq = list(seq)
    if 1 in seq:
        seq = seq[:seq.index(1) + 1]
    return tuple(seq)


def validate_tree(T: MultiplicityTree) -> Report:
    """Plane branch sequences, admissible pairwise splitting numbers and
    compatible splitting matrix."""
    try:
        D = read_tree(T)
    except MalformedTree as exc:
        return Report(False, "structure", [str(exc)])
    viol = []
    for i, e in enumerate(D.E):
        if not is_plane_sequence(e.prefix).ok:
            viol.append(("plane", i + 1))
    if viol:
        return Report(False, "1", viol)
    for i in range(D.d):
        for j in range(i + 1, D.d):
            rep = is_admissible(D.E[i], D.E[j], D.K[i][j])
            if not rep.ok:
                viol.append(("admissible", i + 1, j + 1, rep.failing))
    if viol:
        return Report(False, "2", viol)
    rep = check_compatibility(D.K)
    if not rep.ok:
        return Report(False, "compatibility", rep.violations)
    if build_tree(D.E, D.K) != T:
        return Report(False, "shape", ["stored vertices differ from the canonical tree of the data"])
    return Report(True)
