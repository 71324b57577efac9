"""Soft domain membership vectors over discovered communities.

A record's membership in a community is the degree-weighted share of its
users/words that fall inside that community; records with no graph-present
item get the uniform vector.  Also contains the user-overlap baseline that
assigns hard communities from pairwise Jaccard similarity.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .hetero import RecordContent, WeightedGraph, from_edge_weights, record_item_set
from .louvain import Partition, louvain


@dataclass(frozen=True)
class DomainEmbedding:
    ids: tuple[str, ...]
    matrix: np.ndarray  # (n_records, n_components) float64

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[1])

    def vector(self, record_id: str) -> np.ndarray:
        pos = self.ids.index(record_id)
        return self.matrix[pos]

    def subset(self, record_ids: Iterable[str]) -> "DomainEmbedding":
        wanted = list(record_ids)
        pos = {rid: i for i, rid in enumerate(self.ids)}
        rows = [pos[rid] for rid in wanted]
        return DomainEmbedding(ids=tuple(wanted), matrix=self.matrix[rows])


def soft_membership(view: RecordContent, graph: WeightedGraph, partition: Partition) -> np.ndarray:
    """Degree share of the record's graph-present items per community.

    Items absent from the graph are ignored; when none is present the
    record gets the uniform 1/|C| vector.
    """
    n_comms = partition.community_count
    label_of = partition.label_of()
    shares = np.zeros(n_comms, dtype=np.float64)
    total = 0.0
    for name in record_item_set(view):
        idx = graph.index.get(name)
        if idx is None:
            continue
        deg = float(graph.strength[idx])
        shares[label_of[name]] += deg
        total += deg
    if total == 0.0:
        return np.full(n_comms, 1.0 / n_comms)
    return shares / total


def domain_embed(
    views: Iterable[RecordContent], graph: WeightedGraph, partition: Partition
) -> DomainEmbedding:
    views = list(views)
    matrix = np.zeros((len(views), partition.community_count), dtype=np.float64)
    for i, view in enumerate(views):
        matrix[i] = soft_membership(view, graph, partition)
    return DomainEmbedding(ids=tuple(v.record_id for v in views), matrix=matrix)


def baseline_jaccard_embed(views: Iterable[RecordContent], alpha: float = 0.4) -> DomainEmbedding:
    """User-overlap baseline: Jaccard graph over records, hard communities,
    embedding row = cosine of one-hot indicators against every record."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    views = list(views)
    ids = [v.record_id for v in views]
    edge_weights: dict[tuple[str, str], float] = {}
    for i in range(len(views)):
        ui = views[i].users
        for j in range(i + 1, len(views)):
            uj = views[j].users
            union = len(ui | uj)
            if union == 0:
                continue
            jac = len(ui & uj) / union
            if jac > alpha:
                edge_weights[(ids[i], ids[j])] = 1.0
    comm_of: dict[str, int] = {}
    if edge_weights:
        graph = from_edge_weights(edge_weights)
        partition = louvain(graph)
        comm_of.update(partition.label_of())
    next_comm = max(comm_of.values(), default=-1) + 1
    for rid in ids:
        if rid not in comm_of:
            comm_of[rid] = next_comm
            next_comm += 1
    matrix = np.zeros((len(ids), len(ids)), dtype=np.float64)
    for i, a in enumerate(ids):
        for j, b in enumerate(ids):
            if comm_of[a] == comm_of[b]:
                matrix[i, j] = 1.0
    return DomainEmbedding(ids=tuple(ids), matrix=matrix)


def write_partition_csv(path, partition: Partition) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["node", "community"])
        for nid, label in zip(partition.node_ids, partition.labels):
            writer.writerow([nid, label])


def write_embedding_csv(path, embedding: DomainEmbedding) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", *[f"c{k}" for k in range(embedding.dim)]])
        for rid, row in zip(embedding.ids, embedding.matrix):
            writer.writerow([rid, *[repr(float(v)) for v in row]])


def read_embedding_csv(path) -> DomainEmbedding:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[0] != "id":
            raise ValueError(f"{path}: expected a header starting with 'id'")
        ids: list[str] = []
        rows: list[list[float]] = []
        for row in reader:
            ids.append(row[0])
            rows.append([float(x) for x in row[1:]])
    matrix = np.array(rows, dtype=np.float64) if rows else np.zeros((0, len(header) - 1))
    return DomainEmbedding(ids=tuple(ids), matrix=matrix)
