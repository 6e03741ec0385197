"""Criteria trees: arbitrary-depth hierarchies whose leaves are the elementary criteria."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import UnknownEntity

INCREASING = "increasing"
DECREASING = "decreasing"


@dataclass(frozen=True)
class CriterionNode:
    id: str
    index: tuple[int, ...]  # root = (), child w of r = r + (w,)
    children: tuple["CriterionNode", ...] = ()
    column: str | None = None  # leaves only
    direction: str | None = None  # leaves only

    @property
    def is_leaf(self) -> bool:
        return not self.children


class CriterionHierarchy:
    """Tree of criteria. Leaves carry a performance-table column and a preference direction.

    Node ids are unique across the tree; index vectors are prefix-consistent
    by construction (children extend the parent's vector by one coordinate).
    """

    def __init__(self, root: CriterionNode):
        self.root = root
        self._by_id: dict[str, CriterionNode] = {}
        self._leaves_under: dict[str, tuple[str, ...]] = {}
        self._parent: dict[str, str | None] = {root.id: None}
        self._index(root)
        if not self._leaves_under[root.id]:
            raise ValueError("hierarchy has no leaves")

    def _index(self, node: CriterionNode) -> tuple[str, ...]:
        if node.id in self._by_id:
            raise ValueError(f"duplicate node id {node.id!r}")
        self._by_id[node.id] = node
        if node.is_leaf:
            if node.column is None or node.direction not in (INCREASING, DECREASING):
                raise ValueError(f"leaf {node.id!r} needs a column and a direction")
            leaves: tuple[str, ...] = (node.id,)
        else:
            acc: list[str] = []
            for child in node.children:
                self._parent[child.id] = node.id
                acc.extend(self._index(child))
            leaves = tuple(acc)
        self._leaves_under[node.id] = leaves
        return leaves

    def node(self, node_id: str) -> CriterionNode:
        try:
            return self._by_id[node_id]
        except KeyError:
            raise UnknownEntity(f"unknown criterion {node_id!r}") from None

    def __contains__(self, node_id: str) -> bool:
        return node_id in self._by_id

    def parent(self, node_id: str) -> str | None:
        self.node(node_id)
        return self._parent[node_id]

    @property
    def leaves(self) -> tuple[str, ...]:
        """Ids of all elementary criteria, in tree order."""
        return self._leaves_under[self.root.id]

    def leaves_under(self, node_id: str) -> tuple[str, ...]:
        """E(g_r): elementary criteria descending from the node (the node itself if a leaf)."""
        self.node(node_id)
        return self._leaves_under[node_id]

    @property
    def non_elementary(self) -> tuple[str, ...]:
        return tuple(n for n in self._by_id if not self._by_id[n].is_leaf)

    def columns(self) -> dict[str, str]:
        """leaf id -> performance-table column."""
        return {t: self._by_id[t].column for t in self.leaves}

    def direction(self, leaf_id: str) -> str:
        node = self.node(leaf_id)
        if not node.is_leaf:
            raise UnknownEntity(f"{leaf_id!r} is not an elementary criterion")
        return node.direction

    def to_dict(self) -> dict:
        def conv(node: CriterionNode) -> dict:
            if node.is_leaf:
                return {"id": node.id, "leaf": {"column": node.column, "direction": node.direction}}
            return {"id": node.id, "children": [conv(c) for c in node.children]}

        return conv(self.root)

    @classmethod
    def from_dict(cls, doc: dict) -> "CriterionHierarchy":
        def conv(doc: dict, index: tuple[int, ...]) -> CriterionNode:
            if "leaf" in doc:
                leaf = doc["leaf"]
                return CriterionNode(doc["id"], index, column=leaf["column"], direction=leaf["direction"])
            children = tuple(conv(c, index + (w + 1,)) for w, c in enumerate(doc.get("children", [])))
            if not children:
                raise ValueError(f"node {doc['id']!r} has neither children nor a leaf spec")
            return CriterionNode(doc["id"], index, children=children)

        return cls(conv(doc, ()))

    @classmethod
    def from_json(cls, path) -> "CriterionHierarchy":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def flat_hierarchy(leaves: list[str], directions: dict[str, str] | None = None,
                   root_id: str = "root") -> CriterionHierarchy:
    """One root directly over the given elementary criteria (column id = leaf id)."""
    directions = directions or {}
    children = tuple(
        CriterionNode(t, (w + 1,), column=t, direction=directions.get(t, INCREASING))
        for w, t in enumerate(leaves)
    )
    return CriterionHierarchy(CriterionNode(root_id, (), children=children))
