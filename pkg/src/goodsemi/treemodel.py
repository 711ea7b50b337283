"""The multiplicity-tree data type, its JSON form and DOT export."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import MalformedTree


def node_id(depth: int, branches, d: int) -> str:
    sep = "," if d >= 10 else ""
    return f"{depth}:" + sep.join(str(i + 1) for i in sorted(branches))


@dataclass(frozen=True)
class TreeNode:
    id: str
    parent: str | None
    weight: tuple
    depth: int
    branches: frozenset  # 0-based branch indices passing through the node


@dataclass(frozen=True)
class MultiplicityTree:
    """Finite part of a multiplicity tree.

    Each branch path is stored down to its first unit weight after it has
    separated from every other branch; deeper vertices are all unit vectors
    and are left implicit.  ``tail_from`` is one more than the deepest stored
    depth.
    """
    d: int
    nodes: tuple

    @property
    def tail_from(self) -> int:
        return 1 + max(n.depth for n in self.nodes) if self.nodes else 0

    def by_id(self) -> dict:
        return {n.id: n for n in self.nodes}

    def roots(self) -> list:
        return [n for n in self.nodes if n.parent is None]

    def children(self, nid: str) -> list:
        return sorted((n for n in self.nodes if n.parent == nid), key=lambda n: min(n.branches))

    def branch_path(self, i: int) -> list:
        path = [n for n in self.nodes if i in n.branches]
        return sorted(path, key=lambda n: n.depth)

    def canonical(self) -> "MultiplicityTree":
        return MultiplicityTree(self.d, tuple(sorted(self.nodes, key=lambda n: (n.depth, min(n.branches)))))

    def __eq__(self, other):
        if not isinstance(other, MultiplicityTree):
            return NotImplemented
        return self.d == other.d and set(self.nodes) == set(other.nodes)

    def __hash__(self):
        return hash((self.d, frozenset(self.nodes)))

    def to_json(self) -> dict:
        nodes = [{"id": n.id, "parent": n.parent, "weight": list(n.weight)}
                 for n in self.canonical().nodes]
        return {"d": self.d, "nodes": nodes, "tail_from": self.tail_from}

    @classmethod
    def from_json(cls, obj) -> "MultiplicityTree":
        try:
            d = int(obj["d"])
            raw = obj["nodes"]
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedTree("tree JSON needs 'd' and 'nodes'") from exc
        ids = {}
        for item in raw:
            nid = str(item["id"])
            depth_s, _, br = nid.partition(":")
            try:
                depth = int(depth_s)
                parts = br.split(",") if "," in br or d >= 10 else list(br)
                branches = frozenset(int(p) - 1 for p in parts if p)
            except ValueError as exc:
                raise MalformedTree(f"bad node id {nid!r}") from exc
            weight = tuple(int(w) for w in item["weight"])
            if len(weight) != d:
                raise MalformedTree(f"node {nid} weight has wrong length")
            if not branches or min(branches) < 0 or max(branches) >= d:
                raise MalformedTree(f"node {nid} names unknown branches")
            parent = item.get("parent")
            ids[nid] = TreeNode(nid, None if parent is None else str(parent), weight, depth, branches)
        for n in ids.values():
            if n.parent is not None:
                p = ids.get(n.parent)
                if p is None:
                    raise MalformedTree(f"node {n.id} has unknown parent {n.parent}")
                if p.depth != n.depth - 1 or not n.branches <= p.branches:
                    raise MalformedTree(f"node {n.id} does not hang below {p.id}")
            elif n.depth != 0:
                raise MalformedTree(f"root {n.id} is not at depth 0")
        return cls(d, tuple(ids.values())).canonical()

    def to_dot(self) -> str:
        """Graphviz text: one cluster per root, vertices labelled by weights."""
        lines = ["digraph multiplicity_tree {", "  node [shape=ellipse];"]
        for r, root in enumerate(sorted(self.roots(), key=lambda n: min(n.branches))):
            lines.append(f"  subgraph cluster_{r} {{")
            lines.append(f'    label="branches {",".join(str(i + 1) for i in sorted(root.branches))}";')
            stack = [root]
            while stack:
                n = stack.pop(0)
                label = "(" + ",".join(str(w) for w in n.weight) + ")"
                lines.append(f'    "{n.id}" [label="{label}"];')
                for ch in self.children(n.id):
                    br = ",".join(str(i + 1) for i in sorted(ch.branches))
                    lines.append(f'    "{n.id}" -> "{ch.id}" [label="{br}"];')
                    stack.append(ch)
            lines.append("  }")
        lines.append("}")
        return "\n".join(lines) + "\n"
