"""Data model for API usage graphs and correction rules.

A usage graph is a directed labeled multigraph: action nodes (method calls,
control structures) and data nodes (objects, raw values) connected by
data-flow edges (``para``, ``recv``, ``def``) and control-flow edges
(``sel``, ``order``). Node and edge type alphabets are treated as open
string sets. All types are immutable after construction and safe to share
across workers.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property

from .errors import EmptyGraphError, SchemaError

EMPTY_TYPE = "empty"
UNKNOWN_API = "UNKNOWN"
MISC_PACKAGE = "misc"


@dataclass(frozen=True)
class Node:
    """A single usage-graph node.

    ``label`` is the display text (method signature, declared type name, raw
    primitive value, or a special like ``<return>``). ``node_type``
    distinguishes actions from data and their subtypes. ``api`` holds the
    fully qualified declaring type name, ``UNKNOWN`` or ``""`` when
    unresolvable.
    """

    id: str
    label: str
    node_type: str
    api: str = ""

    def __post_init__(self) -> None:
        if not self.label and self.node_type != EMPTY_TYPE:
            raise ValueError(f"node {self.id!r}: empty label on non-empty node type")


@dataclass(frozen=True)
class Edge:
    """A directed edge instance; parallel edges are distinct instances."""

    source: str
    target: str
    label: str


@dataclass(frozen=True)
class AUG:
    """A directed labeled multigraph of API-usage nodes."""

    name: str
    nodes: tuple[Node, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))
        seen: set[str] = set()
        for node in self.nodes:
            if node.id in seen:
                raise ValueError(f"duplicate node id {node.id!r} in graph {self.name!r}")
            if node.node_type == EMPTY_TYPE:
                raise ValueError(
                    f"node {node.id!r}: empty nodes belong to correction rules, "
                    f"not standalone graphs"
                )
            seen.add(node.id)
        for edge in self.edges:
            if edge.source not in seen or edge.target not in seen:
                raise ValueError(
                    f"edge {edge.source!r} -> {edge.target!r} references a missing "
                    f"node in graph {self.name!r}"
                )

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def is_empty(self) -> bool:
        return not self.nodes

    @cached_property
    def nodes_by_id(self) -> dict[str, Node]:
        return {node.id: node for node in self.nodes}

    @cached_property
    def edge_label_counts(self) -> dict[tuple[str, str], Counter[str]]:
        """Multiset of edge labels per ordered node pair."""
        counts: dict[tuple[str, str], Counter[str]] = {}
        for edge in self.edges:
            counts.setdefault((edge.source, edge.target), Counter())[edge.label] += 1
        return counts

    def require_non_empty(self) -> None:
        if self.is_empty:
            raise EmptyGraphError(f"graph {self.name!r} has no nodes")


@dataclass(frozen=True)
class CorrectionRule:
    """A misuse graph, its fixed counterpart, and the node mapping between them.

    Mapping pairs are ``(misuse node id, fix node id)``; ``None`` on one side
    marks the empty node of a pure addition (``None`` on the misuse side) or
    deletion (``None`` on the fix side).
    """

    name: str
    misuse: AUG
    fix: AUG
    mapping: tuple[tuple[str | None, str | None], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "mapping", tuple(self.mapping))
        misuse_seen: set[str] = set()
        fix_seen: set[str] = set()
        for misuse_id, fix_id in self.mapping:
            if misuse_id is None and fix_id is None:
                raise SchemaError(f"rule {self.name!r}: mapping pair with two empty sides")
            if misuse_id is not None:
                if misuse_id not in self.misuse.nodes_by_id:
                    raise SchemaError(
                        f"rule {self.name!r}: mapping references unknown misuse "
                        f"node {misuse_id!r}"
                    )
                if misuse_id in misuse_seen:
                    raise SchemaError(
                        f"rule {self.name!r}: misuse node {misuse_id!r} mapped twice"
                    )
                misuse_seen.add(misuse_id)
            if fix_id is not None:
                if fix_id not in self.fix.nodes_by_id:
                    raise SchemaError(
                        f"rule {self.name!r}: mapping references unknown fix "
                        f"node {fix_id!r}"
                    )
                if fix_id in fix_seen:
                    raise SchemaError(
                        f"rule {self.name!r}: fix node {fix_id!r} mapped twice"
                    )
                fix_seen.add(fix_id)


def package_of(node: Node) -> str:
    """Package prefix of the node's declaring type, or ``misc`` when unknown.

    Unresolved APIs (empty, ``UNKNOWN``, or a bare name without a dot) carry
    no package information and land in the miscellaneous bucket.
    """
    api = node.api
    if not api or api == UNKNOWN_API:
        return MISC_PACKAGE
    cut = api.rfind(".")
    if cut < 0:
        return MISC_PACKAGE
    return api[:cut]


def split_by_api(graph: AUG) -> dict[str, AUG]:
    """Partition a graph into per-package subgraphs.

    Each subgraph keeps exactly the nodes of one package and the edges whose
    both endpoints stay inside it; edges crossing packages are dropped. The
    ``misc`` cluster is a regular entry.
    """
    graph.require_non_empty()
    clusters: dict[str, list[Node]] = {}
    for node in graph.nodes:
        clusters.setdefault(package_of(node), []).append(node)
    result: dict[str, AUG] = {}
    for package, nodes in clusters.items():
        member_ids = {node.id for node in nodes}
        edges = tuple(
            edge
            for edge in graph.edges
            if edge.source in member_ids and edge.target in member_ids
        )
        result[package] = AUG(f"{graph.name}[{package}]", tuple(nodes), edges)
    return result
