"""Weighted undirected graphs and the user/word co-occurrence builder.

Graph nodes are namespaced strings (``user:<id>``, ``word:<token>``) so a
username can never collide with a title word.  Storage is CSR with both
directions materialized; self-loop entries (which only appear in Louvain's
aggregated supergraphs) carry doubled weight so that node strength is a
plain row sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

from .records import NewsRecord, users_within
from .textfeat import tokenize


@dataclass(frozen=True)
class RecordContent:
    """Label-free view of a record: just its id, title tokens and users."""

    record_id: str
    tokens: frozenset[str]
    users: frozenset[str]


def content_view(record: NewsRecord, delta_t: int) -> RecordContent:
    return RecordContent(
        record_id=record.id,
        tokens=frozenset(tokenize(record.title)),
        users=users_within(record, delta_t),
    )


def content_views(records: Iterable[NewsRecord], delta_t: int) -> list[RecordContent]:
    return [content_view(r, delta_t) for r in records]


@dataclass(frozen=True)
class WeightedGraph:
    node_ids: tuple[str, ...]
    index: dict[str, int]
    indptr: np.ndarray    # int64, length n + 1
    indices: np.ndarray   # int64
    weights: np.ndarray   # float64; self-loop entries doubled
    strength: np.ndarray  # float64 row sums
    total_weight: float   # sum of edge weights, each undirected edge once

    @property
    def n_nodes(self) -> int:
        return len(self.node_ids)

    @property
    def n_edges(self) -> int:
        self_entries = int(np.count_nonzero(self.indices == np.repeat(
            np.arange(self.n_nodes), np.diff(self.indptr))))
        return (len(self.indices) - self_entries) // 2 + self_entries

    def degree(self, node_id: str) -> float:
        return float(self.strength[self.index[node_id]])


def from_edge_weights(edge_weights: Mapping[tuple[str, str], float]) -> WeightedGraph:
    """Build a graph from undirected edge weights keyed by node-id pairs."""
    names: set[str] = set()
    for (a, b), w in edge_weights.items():
        if a == b:
            raise ValueError(f"self-loop on '{a}' not allowed in input edges")
        if w <= 0:
            raise ValueError(f"edge ({a}, {b}) has non-positive weight {w}")
        names.add(a)
        names.add(b)
    node_ids = tuple(sorted(names))
    index = {name: i for i, name in enumerate(node_ids)}
    n = len(node_ids)
    entries: list[tuple[int, int, float]] = []
    for (a, b), w in edge_weights.items():
        i, j = index[a], index[b]
        entries.append((i, j, float(w)))
        entries.append((j, i, float(w)))
    entries.sort()
    indptr = np.zeros(n + 1, dtype=np.int64)
    indices = np.empty(len(entries), dtype=np.int64)
    weights = np.empty(len(entries), dtype=np.float64)
    for k, (i, j, w) in enumerate(entries):
        indptr[i + 1] += 1
        indices[k] = j
        weights[k] = w
    np.cumsum(indptr, out=indptr)
    strength = np.zeros(n, dtype=np.float64)
    np.add.at(strength, np.repeat(np.arange(n), np.diff(indptr)), weights)
    return WeightedGraph(
        node_ids=node_ids,
        index=index,
        indptr=indptr,
        indices=indices,
        weights=weights,
        strength=strength,
        total_weight=float(sum(edge_weights.values())),
    )


def record_item_set(view: RecordContent) -> tuple[str, ...]:
    """S^r: the record's users and title tokens, namespaced and sorted."""
    items = [f"user:{u}" for u in view.users]
    items.extend(f"word:{t}" for t in view.tokens)
    return tuple(sorted(items))


def build_cooccurrence_graph(views: Iterable[RecordContent]) -> WeightedGraph:
    """Accumulate +1 per record over every unordered pair of its items.

    Records with fewer than two distinct items contribute nothing; nodes
    only exist through edges.
    """
    views = list(views)
    if not views:
        raise ValueError("cannot build a co-occurrence graph from zero records")
    counts: dict[tuple[str, str], int] = {}
    for view in views:
        items = record_item_set(view)
        for a, b in combinations(items, 2):
            key = (a, b)
            counts[key] = counts.get(key, 0) + 1
    return from_edge_weights(counts)
