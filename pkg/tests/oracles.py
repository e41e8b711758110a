"""Independent brute-force oracles.

Everything here trades speed for obviousness: exhaustive enumeration over
mappings, matchings and paths, written without reusing any production code
path, so the fast implementations can be checked against it exactly.
"""

from __future__ import annotations

from collections import Counter
from itertools import product

from augdist import AUG, CostModel
from augdist.graphs import Node


def _edge_labels_between(graph: AUG) -> dict[tuple[str, str], list[str]]:
    table: dict[tuple[str, str], list[str]] = {}
    for edge in graph.edges:
        table.setdefault((edge.source, edge.target), []).append(edge.label)
    return table


def _all_mappings(a_ids: list[str], b_ids: list[str]):
    """Yield every injective partial mapping as a dict a_id -> b_id | None."""

    def extend(index: int, taken: frozenset, current: dict):
        if index == len(a_ids):
            yield dict(current)
            return
        a_id = a_ids[index]
        current[a_id] = None
        yield from extend(index + 1, taken, current)
        for b_id in b_ids:
            if b_id in taken:
                continue
            current[a_id] = b_id
            yield from extend(index + 1, taken | {b_id}, current)
        del current[a_id]

    yield from extend(0, frozenset(), {})


def _min_label_matching(
    labels_a: list[str], labels_b: list[str], cm: CostModel
) -> float:
    """Exhaustive cheapest edit between two edge-label multisets."""
    if not labels_a:
        return cm.edge_insert * len(labels_b)
    best = cm.edge_delete + _min_label_matching(labels_a[1:], labels_b, cm)
    for pick in range(len(labels_b)):
        candidate = cm.edge_substitute(labels_a[0], labels_b[pick]) + _min_label_matching(
            labels_a[1:], labels_b[:pick] + labels_b[pick + 1 :], cm
        )
        best = min(best, candidate)
    return best


def mapping_cost(a: AUG, b: AUG, cm: CostModel, mapping: dict) -> float:
    """Full edit cost induced by one node mapping."""
    nodes_a = a.nodes_by_id
    nodes_b = b.nodes_by_id
    cost = 0.0
    for a_id, b_id in mapping.items():
        if b_id is None:
            cost += cm.node_delete
        else:
            cost += cm.node_substitute(nodes_a[a_id], nodes_b[b_id])
    mapped_targets = {b_id for b_id in mapping.values() if b_id is not None}
    cost += cm.node_insert * (len(nodes_b) - len(mapped_targets))

    edges_a = _edge_labels_between(a)
    edges_b = _edge_labels_between(b)
    covered_b: set[tuple[str, str]] = set()
    for u, v in product(nodes_a, nodes_a):
        labels_a = edges_a.get((u, v), [])
        u_img, v_img = mapping[u], mapping[v]
        if u_img is None or v_img is None:
            cost += cm.edge_delete * len(labels_a)
            continue
        covered_b.add((u_img, v_img))
        cost += _min_label_matching(labels_a, edges_b.get((u_img, v_img), []), cm)
    for pair, labels_b in edges_b.items():
        if pair not in covered_b:
            cost += cm.edge_insert * len(labels_b)
    return cost


def brute_force_ged(a: AUG, b: AUG, cm: CostModel) -> float:
    """Exact minimal edit cost by enumerating every node mapping."""
    a_ids = sorted(a.nodes_by_id)
    b_ids = sorted(b.nodes_by_id)
    return min(
        mapping_cost(a, b, cm, mapping) for mapping in _all_mappings(a_ids, b_ids)
    )


def brute_force_node_ged(a: AUG, b: AUG, cm: CostModel) -> float:
    """Exact minimal node-only edit cost (edges ignored)."""
    nodes_a = a.nodes_by_id
    nodes_b = b.nodes_by_id
    a_ids = sorted(nodes_a)
    b_ids = sorted(nodes_b)
    best = float("inf")
    for mapping in _all_mappings(a_ids, b_ids):
        cost = 0.0
        for a_id, b_id in mapping.items():
            if b_id is None:
                cost += cm.node_delete
            else:
                cost += cm.node_substitute(nodes_a[a_id], nodes_b[b_id])
        mapped = sum(1 for b_id in mapping.values() if b_id is not None)
        cost += cm.node_insert * (len(b_ids) - mapped)
        best = min(best, cost)
    return best


def _identical(u: Node, v: Node) -> bool:
    return u.label == v.label and u.node_type == v.node_type


def max_identical_matching(a: AUG, b: AUG) -> int:
    """Largest one-to-one matching of label-and-type-identical nodes."""
    a_nodes = sorted(a.nodes, key=lambda n: n.id)
    b_nodes = sorted(b.nodes, key=lambda n: n.id)

    def extend(index: int, taken: frozenset) -> int:
        if index == len(a_nodes):
            return 0
        best = extend(index + 1, taken)
        for k, candidate in enumerate(b_nodes):
            if k in taken or not _identical(a_nodes[index], candidate):
                continue
            best = max(best, 1 + extend(index + 1, taken | {k}))
        return best

    return extend(0, frozenset())


def enumerate_path_features(graph: AUG) -> Counter:
    """Count 2..4-node simple-path features by iterating node tuples.

    For each ordered tuple of distinct nodes, multiply the parallel-edge
    choices per hop and attribute the product to the label sequence.
    """
    labels = {node.id: node.label for node in graph.nodes}
    edge_table = {
        pair: Counter(edge_labels)
        for pair, edge_labels in _edge_labels_between(graph).items()
    }
    ids = sorted(labels)
    counts: Counter = Counter()

    def tuples(length: int, chosen: tuple[str, ...]):
        if len(chosen) == length:
            yield chosen
            return
        for node_id in ids:
            if node_id in chosen:
                continue
            yield from tuples(length, chosen + (node_id,))

    for length in (2, 3, 4):
        for node_tuple in tuples(length, ()):
            options = []
            feasible = True
            for u, v in zip(node_tuple, node_tuple[1:]):
                hop = edge_table.get((u, v))
                if not hop:
                    feasible = False
                    break
                options.append(sorted(hop.items()))
            if not feasible:
                continue
            for combo in product(*options):
                multiplicity = 1
                sequence: list[str] = [labels[node_tuple[0]]]
                for (label, count), node_id in zip(combo, node_tuple[1:]):
                    multiplicity *= count
                    sequence.extend((label, labels[node_id]))
                counts[("path", *sequence)] += multiplicity
    return counts


def full_feature_oracle(graph: AUG) -> Counter:
    """Degree features from direct counting plus the exhaustive path features."""
    indegree: Counter = Counter()
    outdegree: Counter = Counter()
    for edge in graph.edges:
        outdegree[edge.source] += 1
        indegree[edge.target] += 1
    counts = enumerate_path_features(graph)
    for node in graph.nodes:
        counts[
            ("pq", node.label, node.node_type, indegree[node.id], outdegree[node.id])
        ] += 1
    return counts


def oracle_exas_l1(a: AUG, b: AUG) -> float:
    """Mean absolute max-normalized difference, from the oracle vectors."""
    vec_a = full_feature_oracle(a)
    vec_b = full_feature_oracle(b)
    keys = sorted(vec_a.keys() | vec_b.keys())
    diffs = [vec_a.get(key, 0) - vec_b.get(key, 0) for key in keys]
    scale = max(1, max((abs(d) for d in diffs), default=0))
    return sum(abs(d) / scale for d in diffs) / len(diffs)


def dense_node_similarity(a: AUG, b: AUG, tol: float, max_iter: int):
    """Loop-based re-implementation of the coupled similarity iteration."""
    a_ids = sorted(node.id for node in a.nodes)
    b_ids = sorted(node.id for node in b.nodes)
    pos_a = {node_id: i for i, node_id in enumerate(a_ids)}
    pos_b = {node_id: i for i, node_id in enumerate(b_ids)}
    n_a, n_b = len(a_ids), len(b_ids)
    adj_a = [[0.0] * n_a for _ in range(n_a)]
    adj_b = [[0.0] * n_b for _ in range(n_b)]
    for source, target in {(e.source, e.target) for e in a.edges}:
        adj_a[pos_a[source]][pos_a[target]] = 1.0
    for source, target in {(e.source, e.target) for e in b.edges}:
        adj_b[pos_b[source]][pos_b[target]] = 1.0

    def frobenius(matrix):
        return sum(value * value for row in matrix for value in row) ** 0.5

    current = [[1.0] * n_a for _ in range(n_b)]
    norm = frobenius(current)
    current = [[value / norm for value in row] for row in current]
    previous = current
    for iteration in range(1, max_iter + 1):
        update = [[0.0] * n_a for _ in range(n_b)]
        for x in range(n_b):
            for y in range(n_a):
                forward = sum(
                    adj_b[x][p] * current[p][q] * adj_a[y][q]
                    for p in range(n_b)
                    for q in range(n_a)
                )
                backward = sum(
                    adj_b[p][x] * current[p][q] * adj_a[q][y]
                    for p in range(n_b)
                    for q in range(n_a)
                )
                update[x][y] = forward + backward
        norm = frobenius(update)
        if norm == 0:
            raise ZeroDivisionError("degenerate structure")
        current = [[value / norm for value in row] for row in update]
        if iteration % 2 == 0:
            delta = (
                sum(
                    (current[x][y] - previous[x][y]) ** 2
                    for x in range(n_b)
                    for y in range(n_a)
                )
                ** 0.5
            )
            if delta < tol:
                break
            previous = current
    return current


def best_assignment_mean(matrix) -> float:
    """Maximum mean similarity over one-to-one pairings, by enumeration."""
    n_rows = len(matrix)
    n_cols = len(matrix[0])
    size = min(n_rows, n_cols)

    def extend(row: int, taken: frozenset, picked: int) -> float:
        if picked == size or row == n_rows:
            return 0.0 if picked == size else float("-inf")
        best = extend(row + 1, taken, picked)
        for col in range(n_cols):
            if col in taken:
                continue
            best = max(
                best, matrix[row][col] + extend(row + 1, taken | {col}, picked + 1)
            )
        return best

    return extend(0, frozenset(), 0) / size
