from collections import deque

import numpy as np
import pytest

from dualdomain.lexicon import default_lexicon
from dualdomain.propagation import (
    NODE_FEATURE_NAMES,
    SOURCE_ID,
    build_propagation_graph,
    global_features,
    hop_levels,
    local_aggregate,
    network_feature_names,
    network_features,
    node_features,
)
from dualdomain.records import CascadeNode, NewsRecord
from dualdomain.synthetic import DomainSpec, SyntheticConfig, generate_synthetic


def record_with(nodes, published_at=100, title="some title"):
    return NewsRecord(id="r", published_at=published_at, title=title, cascade=tuple(nodes))


def test_parent_chain_becomes_path():
    rec = record_with([
        CascadeNode("a", "u1", 200),
        CascadeNode("b", "u2", 300, parent="a"),
    ])
    net = build_propagation_graph(rec, 18000)
    assert net.node_ids == (SOURCE_ID, "a", "b")
    assert net.edges == ((0, 1), (1, 2))


def test_cutoff_is_inclusive_and_drops_late_nodes():
    rec = record_with([
        CascadeNode("a", "u1", 100 + 18000),      # exactly on the boundary: kept
        CascadeNode("b", "u2", 100 + 18000 + 1),  # one second late: dropped
    ])
    net = build_propagation_graph(rec, 18000)
    assert net.node_ids == (SOURCE_ID, "a")


def test_time_rule_links_parentless_public_tweets():
    rec = record_with([
        CascadeNode("a", "u1", 200, is_public=True),
        CascadeNode("b", "u2", 800, is_public=True),
    ])
    net = build_propagation_graph(rec, 18000, time_edges=True)
    # earlier -> later, plus source -> the remaining in-degree-0 node
    assert (1, 2) in net.edges
    assert (0, 1) in net.edges
    assert (2, 1) not in net.edges


def test_mention_rule_links_tweets():
    rec = record_with([
        CascadeNode("a", "u1", 200, mentions=("u2",)),
        CascadeNode("b", "u2", 500),
    ])
    net = build_propagation_graph(rec, 18000)
    assert (1, 2) in net.edges  # a mentions b's user


def test_mention_cycle_stays_reachable():
    rec = record_with([
        CascadeNode("a", "u1", 200, mentions=("u2",)),
        CascadeNode("b", "u2", 300, mentions=("u1",)),
    ])
    net = build_propagation_graph(rec, 18000)
    level = hop_levels(net)
    assert (level >= 0).all()
    assert all(j != 0 for _, j in net.edges)  # nothing points at the source


def test_empty_cascade_gives_source_only():
    net = build_propagation_graph(record_with([]), 18000)
    assert net.node_ids == (SOURCE_ID,)
    gf = global_features(net)
    assert gf.wiener_index == 0.0
    assert gf.depth == 0
    assert gf.propagation_speed == 0.0


def test_rejects_nonpositive_delta_t():
    with pytest.raises(ValueError):
        build_propagation_graph(record_with([]), 0)


def test_node_features_hand_values():
    rec = record_with([
        CascadeNode(
            "a", "u1", 700, user_verified=True, followers=10, friends=3,
            lists=2, favourites=5, mentions=("x", "y"), hashtags=("h",),
            user_created_at=42,
        ),
        CascadeNode("b", "u2", 1000, parent="a", text="good good bad"),
    ])
    net = build_propagation_graph(rec, 18000)
    fa = node_features(rec.cascade[0], net, default_lexicon())
    names = dict(zip(NODE_FEATURE_NAMES, fa))
    assert names["verified"] == 1.0
    assert names["followers"] == 10.0
    assert names["sentiment"] == 0.0  # no text
    assert names["n_mentions"] == 2.0
    assert names["n_hashtags"] == 1.0
    assert names["dt_source"] == 600.0
    assert names["dt_predecessor"] == 600.0  # source is the predecessor
    assert names["dt_successors"] == 300.0
    assert names["user_created_at"] == 42.0
    fb = node_features(rec.cascade[1], net, default_lexicon())
    nb = dict(zip(NODE_FEATURE_NAMES, fb))
    assert nb["pos_words"] == pytest.approx(2 / 3)
    assert nb["neg_words"] == pytest.approx(1 / 3)
    assert nb["sentiment"] == pytest.approx(1 / 3)
    assert nb["dt_source"] == 900.0
    assert nb["dt_predecessor"] == 300.0
    assert nb["dt_successors"] == 0.0


def test_global_features_path():
    rec = record_with([
        CascadeNode("a", "u1", 200),
        CascadeNode("b", "u2", 300, parent="a"),
    ])
    gf = global_features(build_propagation_graph(rec, 18000))
    assert gf.wiener_index == 4.0
    assert gf.depth == 2
    assert gf.node_count == 3
    assert gf.nodes_per_hop == (1.0, 1.0, 0.0, 0.0, 0.0)


def test_global_features_star():
    rec = record_with([
        CascadeNode("a", "u1", 200),
        CascadeNode("b", "u2", 300),
        CascadeNode("c", "u3", 400),
    ])
    gf = global_features(build_propagation_graph(rec, 18000))
    assert gf.max_outdegree == 3
    assert gf.branching_per_level[0] == 3.0
    assert gf.branching_per_level[1] == 0.0
    assert gf.depth == 1


def test_propagation_speed():
    rec = record_with([
        CascadeNode("a", "u1", 200),
        CascadeNode("b", "u2", 200 + 3600, parent="a"),
    ])
    gf = global_features(build_propagation_graph(rec, 18000))
    assert gf.propagation_speed == pytest.approx(2.0)  # 2 tweets in one hour


def _brute_wiener(net):
    n = net.n_nodes
    adj = [set() for _ in range(n)]
    for i, j in net.edges:
        adj[i].add(j)
        adj[j].add(i)
    total = 0
    for s in range(n):
        dist = {s: 0}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        assert len(dist) == n
        total += sum(d for t, d in dist.items() if t > s)
    return total


def test_wiener_matches_bruteforce_on_random_trees():
    rng = np.random.default_rng(5)
    for trial in range(25):
        n = int(rng.integers(2, 30))
        nodes = []
        for k in range(n):
            parent = None if k == 0 else f"t{int(rng.integers(0, k))}"
            nodes.append(CascadeNode(f"t{k}", f"u{k}", 200 + 10 * k, parent=parent))
        net = build_propagation_graph(record_with(nodes), 18000)
        assert global_features(net).wiener_index == _brute_wiener(net)


def test_local_aggregate_hand_cases():
    rec = record_with([CascadeNode("a", "u1", 200)])
    net = build_propagation_graph(rec, 18000)
    feats = net.features.copy()
    feats[1] = 1.0  # leaf gets all-ones, source stays zero
    object.__setattr__(net, "features", feats)
    assert np.allclose(local_aggregate(net, 1), 0.5)
    assert np.allclose(local_aggregate(net, 2), 0.75)


def test_local_aggregate_source_only_keeps_value():
    net = build_propagation_graph(record_with([]), 18000)
    assert np.allclose(local_aggregate(net, 5), net.features[0])


def test_local_aggregate_constant_fixed_point():
    rng = np.random.default_rng(1)
    nodes = [
        CascadeNode(f"t{k}", f"u{k}", 200 + k, parent=None if k == 0 else "t0")
        for k in range(6)
    ]
    net = build_propagation_graph(record_with(nodes), 18000)
    feats = np.full_like(net.features, 3.25)
    object.__setattr__(net, "features", feats)
    for k in (1, 2, 5):
        assert np.allclose(local_aggregate(net, k), 3.25)


def test_local_aggregate_stays_in_convex_hull():
    rng = np.random.default_rng(8)
    for trial in range(10):
        n = int(rng.integers(2, 15))
        nodes = [
            CascadeNode(
                f"t{k}", f"u{k}", 200 + 10 * k,
                parent=None if k == 0 else f"t{int(rng.integers(0, k))}",
            )
            for k in range(n)
        ]
        net = build_propagation_graph(record_with(nodes), 18000)
        feats = rng.normal(size=net.features.shape)
        object.__setattr__(net, "features", feats)
        out = local_aggregate(net, int(rng.integers(1, 5)))
        assert (out >= feats.min(axis=0) - 1e-12).all()
        assert (out <= feats.max(axis=0) + 1e-12).all()


def test_network_features_shape_and_names():
    rec = record_with([CascadeNode("a", "u1", 200)])
    net = build_propagation_graph(rec, 18000)
    vec = network_features(net, levels=5, iterations=2)
    names = network_feature_names(5)
    assert vec.shape == (len(names),)
    assert len(names) == 2 * 5 + 5 + len(NODE_FEATURE_NAMES)


def test_synthetic_domains_differ_in_propagation():
    cfg = SyntheticConfig(
        domains=(
            DomainSpec(name="fast", records=40, branching_mean=2.0, interarrival_mean=120.0),
            DomainSpec(name="slow", records=40, branching_mean=1.05, interarrival_mean=2400.0),
        )
    )
    rs = generate_synthetic(cfg, seed=2)
    from dualdomain.stats import welch_t_test

    depth = {"fast": [], "slow": []}
    speed = {"fast": [], "slow": []}
    for r in rs:
        gf = global_features(build_propagation_graph(r, 18000))
        depth[r.domain_tag].append(gf.depth)
        speed[r.domain_tag].append(gf.propagation_speed)
    assert welch_t_test(depth["fast"], depth["slow"]).p < 0.05
    assert welch_t_test(speed["fast"], speed["slow"]).p < 0.05
