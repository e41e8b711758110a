"""Shared builders for tests."""

from __future__ import annotations

from augdist import AUG, CorrectionRule, Edge, Node


def aug(name: str, nodes, edges=()) -> AUG:
    """Build a graph from (id, label, type[, api]) and (src, dst, label) tuples."""
    built_nodes = tuple(Node(*spec) for spec in nodes)
    built_edges = tuple(Edge(*spec) for spec in edges)
    return AUG(name, built_nodes, built_edges)


def rule(name: str, misuse: AUG, fix: AUG, mapping=()) -> CorrectionRule:
    return CorrectionRule(name, misuse, fix, tuple(mapping))
