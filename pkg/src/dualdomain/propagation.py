"""Propagation network construction and network-level feature extraction.

A record's cascade becomes a directed graph rooted at a synthetic source
node (index 0).  Edges come from explicit parent pointers; nodes without a
retained parent fall back to mention edges, plus time-window edges when
``time_edges`` is enabled.  The source node points at every remaining
in-degree-0 node, and at one node per otherwise unreachable component so
the network is always connected.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from . import kernels
from .lexicon import SentimentLexicon, default_lexicon
from .records import CascadeNode, NewsRecord, nodes_within
from .textfeat import tokenize

SOURCE_ID = "__source__"

NODE_FEATURE_NAMES = (
    "verified", "followers", "friends", "lists", "favourites",
    "sentiment", "pos_words", "neg_words", "n_mentions", "n_hashtags",
    "dt_source", "dt_predecessor", "dt_successors", "user_created_at",
)

SPEED_EPS_HOURS = 1.0 / 3600.0


@dataclass(frozen=True)
class PropagationNetwork:
    record_id: str
    delta_t: int
    published_at: int
    node_ids: tuple[str, ...]            # index 0 is the source node
    timestamps: np.ndarray               # int64; source carries published_at
    edges: tuple[tuple[int, int], ...]   # directed (i -> j), deduplicated
    nodes: tuple[CascadeNode | None, ...]  # None for the source
    features: np.ndarray                 # (n, 14) float64; zeros for the source

    @property
    def n_nodes(self) -> int:
        return len(self.node_ids)

    def index_of(self, tweet_id: str) -> int:
        return self.node_ids.index(tweet_id)

    def out_neighbors(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.n_nodes)]
        for i, j in self.edges:
            out[i].append(j)
        return tuple(tuple(v) for v in out)

    def in_neighbors(self) -> tuple[tuple[int, ...], ...]:
        inn: list[list[int]] = [[] for _ in range(self.n_nodes)]
        for i, j in self.edges:
            inn[j].append(i)
        return tuple(tuple(v) for v in inn)


def _reachable(n: int, out: list[list[int]], start: int, seen: np.ndarray) -> None:
    stack = [start]
    seen[start] = True
    while stack:
        u = stack.pop()
        for v in out[u]:
            if not seen[v]:
                seen[v] = True
                stack.append(v)


def build_propagation_graph(
    record: NewsRecord,
    delta_t: int,
    lexicon: SentimentLexicon | None = None,
    time_edges: bool = False,
) -> PropagationNetwork:
    if delta_t <= 0:
        raise ValueError(f"delta_t must be > 0, got {delta_t}")
    lexicon = lexicon or default_lexicon()
    kept = nodes_within(record, delta_t)
    node_ids = (SOURCE_ID,) + tuple(n.tweet_id for n in kept)
    index = {tid: i for i, tid in enumerate(node_ids)}
    timestamps = np.empty(len(node_ids), dtype=np.int64)
    timestamps[0] = record.published_at
    for k, node in enumerate(kept, start=1):
        timestamps[k] = node.timestamp

    edge_set: set[tuple[int, int]] = set()
    has_parent_edge = [False] * len(node_ids)
    for node in kept:
        if node.parent is not None and node.parent in index:
            j = index[node.tweet_id]
            edge_set.add((index[node.parent], j))
            has_parent_edge[j] = True
    for node in kept:
        j = index[node.tweet_id]
        if has_parent_edge[j]:
            continue
        for other in kept:
            i = index[other.tweet_id]
            if i == j:
                continue
            if node.user_id in other.mentions:
                edge_set.add((i, j))
            elif time_edges and other.is_public and 0 < node.timestamp - other.timestamp <= delta_t:
                edge_set.add((i, j))

    n = len(node_ids)
    indeg = [0] * n
    out: list[list[int]] = [[] for _ in range(n)]
    for i, j in sorted(edge_set):
        indeg[j] += 1
        out[i].append(j)
    for j in range(1, n):
        if indeg[j] == 0:
            edge_set.add((0, j))
            out[0].append(j)
    seen = np.zeros(n, dtype=bool)
    _reachable(n, out, 0, seen)
    for j in range(1, n):
        if not seen[j]:
            edge_set.add((0, j))
            out[0].append(j)
            _reachable(n, out, j, seen)

    edges = tuple(sorted(edge_set))
    net = PropagationNetwork(
        record_id=record.id,
        delta_t=delta_t,
        published_at=record.published_at,
        node_ids=node_ids,
        timestamps=timestamps,
        edges=edges,
        nodes=(None,) + kept,
        features=np.zeros((n, len(NODE_FEATURE_NAMES))),
    )
    feats = np.zeros((n, len(NODE_FEATURE_NAMES)), dtype=np.float64)
    for k, node in enumerate(kept, start=1):
        feats[k] = node_features(node, net, lexicon)
    object.__setattr__(net, "features", feats)
    return net


def node_features(
    node: CascadeNode, ctx: PropagationNetwork, lexicon: SentimentLexicon | None = None
) -> np.ndarray:
    """The 14 per-node attributes (user, text, temporal) as float64."""
    lexicon = lexicon or default_lexicon()
    idx = ctx.index_of(node.tweet_id)
    tokens = tokenize(node.text) if node.text else []
    sentiment, pos_prop, neg_prop = lexicon.score(tokens)
    t = int(ctx.timestamps[idx])
    preds = [i for i, j in ctx.edges if j == idx]
    if preds:
        # latest in-neighbour counts as the immediate predecessor
        pred_t = max(int(ctx.timestamps[i]) for i in preds)
    else:
        pred_t = ctx.published_at
    succs = [j for i, j in ctx.edges if i == idx]
    if succs:
        dt_succ = float(np.mean([int(ctx.timestamps[j]) - t for j in succs]))
    else:
        dt_succ = 0.0
    return np.array(
        [
            1.0 if node.user_verified else 0.0,
            float(node.followers),
            float(node.friends),
            float(node.lists),
            float(node.favourites),
            sentiment,
            pos_prop,
            neg_prop,
            float(len(node.mentions)),
            float(len(node.hashtags)),
            float(t - ctx.published_at),
            float(t - pred_t),
            dt_succ,
            float(node.user_created_at),
        ],
        dtype=np.float64,
    )


@dataclass(frozen=True)
class GlobalFeatureVector:
    wiener_index: float
    node_count: int
    depth: int
    nodes_per_hop: tuple[float, ...]
    branching_per_level: tuple[float, ...]
    max_outdegree: int
    propagation_speed: float

    def as_array(self) -> np.ndarray:
        return np.array(
            [
                self.wiener_index,
                float(self.node_count),
                float(self.depth),
                *self.nodes_per_hop,
                *self.branching_per_level,
                float(self.max_outdegree),
                self.propagation_speed,
            ],
            dtype=np.float64,
        )


def global_feature_names(levels: int) -> tuple[str, ...]:
    return (
        "wiener_index",
        "node_count",
        "depth",
        *[f"nodes_hop_{h}" for h in range(1, levels + 1)],
        *[f"branching_level_{h}" for h in range(levels)],
        "max_outdegree",
        "propagation_speed",
    )


def _undirected_csr(net: PropagationNetwork) -> tuple[np.ndarray, np.ndarray]:
    n = net.n_nodes
    pairs: set[tuple[int, int]] = set()
    for i, j in net.edges:
        pairs.add((i, j))
        pairs.add((j, i))
    ordered = sorted(pairs)
    indptr = np.zeros(n + 1, dtype=np.int64)
    indices = np.empty(len(ordered), dtype=np.int64)
    for k, (i, j) in enumerate(ordered):
        indptr[i + 1] += 1
        indices[k] = j
    np.cumsum(indptr, out=indptr)
    return indptr, indices


def hop_levels(net: PropagationNetwork) -> np.ndarray:
    """Directed hop distance from the source; every node is reachable."""
    n = net.n_nodes
    out = net.out_neighbors()
    level = np.full(n, -1, dtype=np.int64)
    level[0] = 0
    queue: deque[int] = deque([0])
    while queue:
        u = queue.popleft()
        for v in out[u]:
            if level[v] < 0:
                level[v] = level[u] + 1
                queue.append(v)
    return level


def global_features(net: PropagationNetwork, levels: int = 5) -> GlobalFeatureVector:
    n = net.n_nodes
    if n == 1:
        return GlobalFeatureVector(
            wiener_index=0.0,
            node_count=1,
            depth=0,
            nodes_per_hop=(0.0,) * levels,
            branching_per_level=(0.0,) * levels,
            max_outdegree=0,
            propagation_speed=0.0,
        )
    indptr, indices = _undirected_csr(net)
    wiener = int(kernels.wiener_total(indptr, indices))
    if wiener < 0:
        raise AssertionError(f"propagation network of '{net.record_id}' is disconnected")
    level = hop_levels(net)
    depth = int(level.max())
    outdeg = np.zeros(n, dtype=np.int64)
    for i, _ in net.edges:
        outdeg[i] += 1
    nodes_per_hop = tuple(
        float(np.count_nonzero(level == h)) for h in range(1, levels + 1)
    )
    branching = []
    for h in range(levels):
        mask = level == h
        branching.append(float(outdeg[mask].mean()) if mask.any() else 0.0)
    tweet_ts = net.timestamps[1:]
    span_hours = float(tweet_ts.max() - tweet_ts.min()) / 3600.0
    speed = (n - 1) / max(SPEED_EPS_HOURS, span_hours)
    return GlobalFeatureVector(
        wiener_index=float(wiener),
        node_count=n,
        depth=depth,
        nodes_per_hop=nodes_per_hop,
        branching_per_level=tuple(branching),
        max_outdegree=int(outdeg.max()),
        propagation_speed=speed,
    )


def local_aggregate(net: PropagationNetwork, iterations: int) -> np.ndarray:
    """Iterated half-self / half-mean-of-successors smoothing; returns the
    source row after ``iterations`` steps.  Nodes without successors keep
    their value."""
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    n = net.n_nodes
    h = net.features.copy()
    out = net.out_neighbors()
    has_succ = np.array([len(o) > 0 for o in out], dtype=bool)
    weights = np.zeros((n, n), dtype=np.float64)
    for i, o in enumerate(out):
        if o:
            w = 1.0 / len(o)
            for j in o:
                weights[i, j] = w
    for _ in range(iterations):
        mixed = 0.5 * h + 0.5 * (weights @ h)
        h = np.where(has_succ[:, None], mixed, h)
    return h[0]


def network_feature_names(levels: int = 5) -> tuple[str, ...]:
    return global_feature_names(levels) + tuple(f"local_{name}" for name in NODE_FEATURE_NAMES)


def network_features(
    net: PropagationNetwork, levels: int = 5, iterations: int = 3
) -> np.ndarray:
    """f_global concatenated with the aggregated local representation."""
    return np.concatenate([global_features(net, levels).as_array(), local_aggregate(net, iterations)])
