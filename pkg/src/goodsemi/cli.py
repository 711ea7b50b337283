"""Command-line front end.

Every command reads JSON (a file path, ``-`` for stdin, or an inline JSON
literal) and writes canonical JSON or text to stdout.  Exit status is 0 on
success, 1 on a domain error (error JSON on stderr) and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import apery, blowup, branch, curve, hn, semigroup, tree, valuation
from .errors import GoodSemiError
from .treemodel import MultiplicityTree


class UsageError(Exception):
    pass


# -- input helpers -------------------------------------------------------------

def load_json(arg: str):
    if arg == "-":
        text = sys.stdin.read()
    elif os.path.exists(arg):
        with open(arg, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = arg
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"cannot read JSON from {arg!r}: {exc}") from exc


def _int(v) -> int:
    try:
        return int(v)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"expected an integer, got {v!r}") from exc


def parse_point(text: str) -> tuple:
    text = text.strip().strip("()[]")
    return tuple(_int(x) for x in text.split(",") if x.strip())


def semigroup_from_json(obj) -> semigroup.GoodSemigroup:
    try:
        cond = [_int(c) for c in obj["conductor"]]
        smalls = [[_int(x) for x in p] for p in obj["smalls"]]
    except (KeyError, TypeError) as exc:
        raise UsageError("semigroup JSON needs 'conductor' and 'smalls'") from exc
    if "dim" in obj and _int(obj["dim"]) != len(cond):
        raise UsageError("'dim' disagrees with the conductor length")
    return semigroup.make_semigroup(smalls, cond)


def sequence_from_json(obj) -> branch.PlaneSequence:
    if isinstance(obj, dict):
        obj = obj.get("sequence")
    if not isinstance(obj, list):
        raise UsageError("expected a sequence list or {\"sequence\": [...]}")
    return branch.PlaneSequence.of([_int(v) for v in obj])


def sequences_from_json(obj) -> list:
    if isinstance(obj, dict):
        obj = obj.get("E", obj.get("sequences"))
    if not isinstance(obj, list) or not obj:
        raise UsageError("expected a list of sequences")
    if not isinstance(obj[0], (list, dict)):
        return [sequence_from_json(obj)]
    return [sequence_from_json(e) for e in obj]


def k_from_json(obj, d: int):
    if isinstance(obj, dict):
        obj = obj.get("K")
    if obj is None:
        return [[0] * d for _ in range(d)]
    if isinstance(obj, list) and obj and isinstance(obj[0], list):
        return [[_int(v) for v in row] for row in obj]
    return tree.k_matrix([_int(v) for v in obj], d)


def emit(obj) -> None:
    if isinstance(obj, str):
        sys.stdout.write(obj)
    else:
        sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


# -- commands ------------------------------------------------------------------

def cmd_good_check(a):
    obj = load_json(a.input)
    try:
        cond = [_int(c) for c in obj["conductor"]]
        pts = [tuple(_int(x) for x in p) for p in obj["smalls"]]
    except (KeyError, TypeError) as exc:
        raise UsageError("semigroup JSON needs 'conductor' and 'smalls'") from exc
    rep = semigroup.verify_good(pts, cond)
    emit({"ok": rep.ok, "violations": [list(map(str, v)) for v in rep.violations]})
    return 0 if rep.ok else 1


def _levels(a):
    S = semigroup_from_json(load_json(a.input))
    omega = parse_point(a.omega)
    cap = parse_point(a.cap) if a.cap else None
    return S, apery.levels_of(S, omega, cap)


def cmd_apery(a):
    _, P = _levels(a)
    emit(P.to_json(compress=not a.raw))
    return 0


def cmd_levels(a):
    S, P = _levels(a)
    if a.at:
        alpha = parse_point(a.at)
        emit({"alpha": list(alpha), "level": apery.level_function(P, alpha, S)})
    else:
        emit(P.to_json(compress=not a.raw))
    return 0


def cmd_blowup(a):
    S = semigroup_from_json(load_json(a.input))
    S_blow, e = blowup.blow_up_semigroup(S)
    out = S_blow.to_json()
    out["multiplicity"] = list(e)
    emit(out)
    return 0


def cmd_blowdown(a):
    S = semigroup_from_json(load_json(a.input))
    emit(blowup.blow_down_semigroup(S, parse_point(a.omega)).to_json())
    return 0


def cmd_branch_seq2sg(a):
    emit(branch.semigroup_from_sequence(sequence_from_json(load_json(a.input))).to_json())
    return 0


def cmd_branch_sg2seq(a):
    emit(branch.sequence_from_semigroup(semigroup_from_json(load_json(a.input))).to_json())
    return 0


def cmd_branch_h(a):
    obj = load_json(a.input)
    if isinstance(obj, dict) and "htype" in obj:
        emit(branch.sequence_from_h(branch.htype_from_json(obj)).to_json())
    else:
        emit(branch.htype_to_json(branch.h_from_sequence(sequence_from_json(obj))))
    return 0


def cmd_branch_check(a):
    obj = load_json(a.input)
    seq = obj.get("sequence") if isinstance(obj, dict) else obj
    rep = branch.is_plane_sequence([_int(v) for v in seq])
    emit({"ok": rep.ok, "reason": rep.reason, "restriction_numbers": list(rep.restriction_numbers)})
    return 0 if rep.ok else 1


def _curve(a) -> curve.CurveParam:
    obj = load_json(a.input)
    if "branches" not in obj:
        obj = {"branches": [obj]}
    return curve.CurveParam.from_json(obj)


def cmd_hn_expand(a):
    c = _curve(a)
    emit({"expansions": [hn.hn_expand(b, a.precision).to_json() for b in c.branches]})
    return 0


def _synth_inputs(a):
    E = sequences_from_json(load_json(a.sequences))
    K = k_from_json(load_json(a.k), len(E)) if a.k else [[0] * len(E) for _ in E]
    return E, K


def cmd_hn_synth(a):
    E, K = _synth_inputs(a)
    exps = [hn.synth_branch(E[0])] if len(E) == 1 else hn.synth_curve(E, K)
    emit({"expansions": [x.to_json() for x in exps]})
    return 0


def cmd_hn_split(a):
    c = _curve(a)
    exps = [hn.hn_expand(b, a.precision) for b in c.branches]
    out = []
    for i in range(len(exps)):
        for j in range(i + 1, len(exps)):
            sd = hn.splitting_data(exps[i], exps[j])
            row = sd.to_json()
            row.update({"i": i + 1, "j": j + 1})
            out.append(row)
    emit({"pairs": out})
    return 0


def cmd_tree_build(a):
    if a.semigroup:
        T = blowup.semigroup_tree(semigroup_from_json(load_json(a.semigroup)))
    else:
        if not a.sequences:
            raise UsageError("tree build needs --sequences (and --k) or --semigroup")
        E, K = _synth_inputs(a)
        T = tree.build_tree(E, K)
    emit(T.to_json())
    return 0


def _tree(a) -> MultiplicityTree:
    return MultiplicityTree.from_json(load_json(a.input))


def cmd_tree_read(a):
    emit(tree.read_tree(_tree(a)).to_json())
    return 0


def cmd_tree_validate(a):
    rep = tree.validate_tree(_tree(a))
    emit({"ok": rep.ok, "failing": rep.failing, "violations": [list(map(str, v)) if isinstance(v, tuple) else str(v)
                                                                for v in rep.violations]})
    return 0 if rep.ok else 1


def cmd_tree_dot(a):
    emit(_tree(a).to_dot())
    return 0


def cmd_tree_semigroup(a):
    emit(blowup.semigroup_from_tree(_tree(a)).to_json())
    return 0


def cmd_curve_semigroup(a):
    c = _curve(a)
    bound = parse_point(a.bound) if a.bound else None
    emit(valuation.value_semigroup(c, bound).to_json())
    return 0


def cmd_curve_blowup(a):
    emit(curve.blow_up_param(_curve(a), a.precision).to_json())
    return 0


def cmd_curve_synth(a):
    E, K = _synth_inputs(a)
    exps = [hn.synth_branch(E[0])] if len(E) == 1 else hn.synth_curve(E, K)
    emit(curve.CurveParam(tuple(hn.hn_to_param(x) for x in exps)).to_json())
    return 0


def cmd_render_grid(a):
    _, P = _levels(a)
    emit(apery.render_grid(P))
    return 0


# -- parser ------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(json.dumps({"error": "usage", "message": message}) + "\n")
        sys.exit(2)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="goodsemi", description="Good semigroups of plane curve singularities.")
    p.add_argument("--precision", type=int, default=None,
                   help="working precision for series (default: $GOODSEMI_PRECISION or 64)")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def leaf(parent, name, func, help_text, inp=True):
        q = parent.add_parser(name, help=help_text)
        if inp:
            q.add_argument("input", help="JSON file, '-' for stdin, or inline JSON")
        q.set_defaults(func=func)
        return q

    def group(name, help_text):
        q = sub.add_parser(name, help=help_text)
        return q.add_subparsers(dest="noun", required=True, parser_class=_Parser)

    g = group("good", "good-semigroup axioms")
    leaf(g, "check", cmd_good_check, "verify the axioms")

    for name, func in (("apery", cmd_apery), ("levels", cmd_levels)):
        q = leaf(sub, name, func, "partitioned Apéry set" if name == "apery" else "level partition or level of a point")
        q.add_argument("--omega", required=True, help="comma-separated element of S")
        q.add_argument("--cap", help="override the truncation cap (comma-separated)")
        q.add_argument("--raw", action="store_true", help="print capped coordinates as numbers")
        if name == "levels":
            q.add_argument("--at", help="print the level of this point instead")

    leaf(sub, "blowup", cmd_blowup, "semigroup of the blow-up")
    q = leaf(sub, "blowdown", cmd_blowdown, "semigroup blown down by omega")
    q.add_argument("--omega", required=True)

    b = group("branch", "plane branches")
    leaf(b, "seq2sg", cmd_branch_seq2sg, "semigroup of a multiplicity sequence")
    leaf(b, "sg2seq", cmd_branch_sg2seq, "multiplicity sequence of a branch semigroup")
    leaf(b, "h", cmd_branch_h, "type of a sequence, or sequence of a type")
    leaf(b, "check", cmd_branch_check, "plane-sequence test with restriction numbers")

    h = group("hn", "Hamburger-Noether expansions")
    leaf(h, "expand", cmd_hn_expand, "expand each branch of a curve")
    q = leaf(h, "synth", cmd_hn_synth, "synthesize expansions", inp=False)
    q.add_argument("--sequences", required=True)
    q.add_argument("--k")
    leaf(h, "split", cmd_hn_split, "pairwise splitting data of a curve")

    t = group("tree", "multiplicity trees")
    q = leaf(t, "build", cmd_tree_build, "tree from sequences and splitting numbers, or from a semigroup", inp=False)
    q.add_argument("--sequences")
    q.add_argument("--k")
    q.add_argument("--semigroup")
    leaf(t, "read", cmd_tree_read, "sequences and splitting numbers of a tree")
    leaf(t, "validate", cmd_tree_validate, "numerical characterization of plane-curve trees")
    leaf(t, "dot", cmd_tree_dot, "Graphviz export")
    leaf(t, "semigroup", cmd_tree_semigroup, "semigroup of a tree")

    c = group("curve", "parametrized curves")
    q = leaf(c, "semigroup", cmd_curve_semigroup, "value semigroup")
    q.add_argument("--bound")
    leaf(c, "blowup", cmd_curve_blowup, "parametrization of the blow-up")
    q = leaf(c, "synth", cmd_curve_synth, "parametrization from sequences and splitting numbers", inp=False)
    q.add_argument("--sequences", required=True)
    q.add_argument("--k")

    r = group("render", "text renderers")
    q = leaf(r, "grid", cmd_render_grid, "d = 2 level grid")
    q.add_argument("--omega", required=True)
    q.add_argument("--cap")
    q.set_defaults(raw=False)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(json.dumps({"error": "usage", "message": str(exc)}) + "\n")
        return 2
    except GoodSemiError as exc:
        sys.stderr.write(json.dumps(exc.to_json(), sort_keys=True) + "\n")
        return 1
    except ValueError as exc:
        sys.stderr.write(json.dumps({"error": "ValueError", "message": str(exc)}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
