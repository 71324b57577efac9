"""Deterministic two-phase greedy modularity maximization.

Local moving visits nodes in ascending index order and relocates a node
only on a strict modularity gain (ties broken toward the smallest community
label); stable communities are then collapsed into a supergraph and the
process repeats until a phase makes no move.  All randomness-free, so the
same graph always yields the same partition.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from . import kernels
from .hetero import WeightedGraph


@dataclass(frozen=True)
class Partition:
    """Community assignment with a canonical community order.

    Communities are numbered by descending total (weighted) degree, ties by
    smallest member node id; this fixed order is what domain-embedding
    components refer to.
    """

    node_ids: tuple[str, ...]
    labels: tuple[int, ...]
    communities: tuple[tuple[str, ...], ...]
    phase_modularity: tuple[float, ...] = ()

    @property
    def community_count(self) -> int:
        return len(self.communities)

    def label_of(self) -> dict[str, int]:
        return {nid: c for nid, c in zip(self.node_ids, self.labels)}


def _canonical_partition(
    graph: WeightedGraph, raw_labels: np.ndarray, trace: tuple[float, ...]
) -> Partition:
    groups: dict[int, list[int]] = {}
    for i, lab in enumerate(raw_labels):
        groups.setdefault(int(lab), []).append(i)
    keyed = []
    for members in groups.values():
        total_degree = float(sum(graph.strength[i] for i in members))
        member_ids = sorted(graph.node_ids[i] for i in members)
        keyed.append((-total_degree, member_ids[0], tuple(member_ids), members))
    keyed.sort(key=lambda item: (item[0], item[1]))
    labels = [0] * graph.n_nodes
    communities = []
    for new_label, (_, _, member_ids, members) in enumerate(keyed):
        communities.append(member_ids)
        for i in members:
            labels[i] = new_label
    return Partition(
        node_ids=graph.node_ids,
        labels=tuple(labels),
        communities=tuple(communities),
        phase_modularity=trace,
    )


def _assignment_modularity(
    indptr: np.ndarray,
    indices: np.ndarray,
    weights: np.ndarray,
    strength: np.ndarray,
    labels: np.ndarray,
    m: float,
) -> float:
    n = strength.shape[0]
    rows = np.repeat(np.arange(n), np.diff(indptr))
    intra = labels[rows] == labels[indices]
    n_comms = int(labels.max()) + 1 if n else 0
    w_in = np.zeros(n_comms, dtype=np.float64)
    np.add.at(w_in, labels[rows][intra], weights[intra])
    w_in /= 2.0
    deg = np.zeros(n_comms, dtype=np.float64)
    np.add.at(deg, labels, strength)
    q = w_in / m - np.square(deg / (2.0 * m))
    return float(q.sum())


def modularity(graph: WeightedGraph, partition: Partition) -> float:
    """Q = sum_c [w_in(c)/m - (deg(c)/2m)^2] on the original graph."""
    if graph.total_weight <= 0.0:
        raise ValueError("modularity is undefined on a graph with no edges")
    label_of = partition.label_of()
    try:
        labels = np.array([label_of[nid] for nid in graph.node_ids], dtype=np.int64)
    except KeyError as exc:
        raise ValueError(f"partition does not cover node {exc.args[0]!r}") from exc
    return _assignment_modularity(
        graph.indptr, graph.indices, graph.weights, graph.strength, labels, graph.total_weight
    )


def _aggregate(
    indptr: np.ndarray,
    indices: np.ndarray,
    weights: np.ndarray,
    labels: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Collapse communities into supernodes, renumbered by first appearance.

    Returns (new_labels_per_old_node, indptr, indices, weights, strength);
    intra-community weight lands on doubled self-loop entries.
    """
    n = indptr.shape[0] - 1
    remap = np.full(int(labels.max()) + 1, -1, dtype=np.int64)
    next_id = 0
    new_labels = np.empty(n, dtype=np.int64)
    for v in range(n):
        lab = labels[v]
        if remap[lab] < 0:
            remap[lab] = next_id
            next_id += 1
        new_labels[v] = remap[lab]
    acc: dict[tuple[int, int], float] = {}
    rows = np.repeat(np.arange(n), np.diff(indptr))
    for r, c, w in zip(new_labels[rows], new_labels[indices], weights):
        key = (int(r), int(c))
        acc[key] = acc.get(key, 0.0) + float(w)
    entries = sorted(acc.items())
    sn = next_id
    sindptr = np.zeros(sn + 1, dtype=np.int64)
    sindices = np.empty(len(entries), dtype=np.int64)
    sweights = np.empty(len(entries), dtype=np.float64)
    for k, ((i, j), w) in enumerate(entries):
        sindptr[i + 1] += 1
        sindices[k] = j
        sweights[k] = w
    np.cumsum(sindptr, out=sindptr)
    sstrength = np.zeros(sn, dtype=np.float64)
    np.add.at(sstrength, np.repeat(np.arange(sn), np.diff(sindptr)), sweights)
    return new_labels, sindptr, sindices, sweights, sstrength


def louvain(graph: WeightedGraph) -> Partition:
    """Community detection; an edgeless graph degenerates to singletons."""
    n = graph.n_nodes
    if graph.total_weight <= 0.0 or n == 0:
        return _canonical_partition(graph, np.arange(n, dtype=np.int64), ())
    m = graph.total_weight
    indptr = graph.indptr.copy()
    indices = graph.indices.copy()
    weights = graph.weights.copy()
    strength = graph.strength.copy()
    node_to_super = np.arange(n, dtype=np.int64)
    trace = [
        _assignment_modularity(indptr, indices, weights, strength, node_to_super, m)
    ]
    while True:
        n_super = indptr.shape[0] - 1
        labels = np.arange(n_super, dtype=np.int64)
        comm_tot = strength.copy()
        moves = kernels.louvain_sweeps(indptr, indices, weights, strength, labels, comm_tot, m)
        if moves == 0:
            break
        trace.append(
            _assignment_modularity(indptr, indices, weights, strength, labels, m)
        )
        new_labels, indptr, indices, weights, strength = _aggregate(
            indptr, indices, weights, labels
        )
        node_to_super = new_labels[node_to_super]
    return _canonical_partition(graph, node_to_super, tuple(trace))


def partition_fingerprint(partition: Partition) -> str:
    """Stable digest of the canonical community ordering."""
    text = "\n".join(",".join(members) for members in partition.communities)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
