"""Deterministic multi-domain synthetic corpus generator.

Each domain owns a disjoint topic-word pool and a mostly-private user pool;
cascades are Galton-Watson trees with exponential inter-arrival times.  Fake
records mix marker words into the title and propagate through denser
cascades, with strength controlled per domain by ``label_signal``.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field

import numpy as np

from .lexicon import DEFAULT_NEGATIVE, DEFAULT_POSITIVE
from .records import CascadeNode, NewsRecord, RecordSet, validate_record

_SEED_MASK = 0x7FFFFFFFFFFFFFFF


@dataclass(frozen=True)
class DomainSpec:
    name: str
    records: int
    fake_fraction: float = 0.3
    topic_words: int = 60
    users: int = 150
    branching_mean: float = 1.3
    interarrival_mean: float = 900.0
    min_children: int = 0  # >0 truncates the offspring draw, preventing extinction
    label_signal: float = 0.8
    shared_user_prob: float = 0.05
    shared_marker_fraction: float = 0.0
    # sub-topics within the domain: records favour one slice of the topic
    # and user pools, giving the community detector finer structure to find
    subclusters: int = 3
    subcluster_affinity: float = 0.85


@dataclass(frozen=True)
class SyntheticConfig:
    domains: tuple[DomainSpec, ...] = field(default_factory=tuple)
    title_words: int = 8
    marker_words: int = 12
    shared_markers: int = 12
    shared_users: int = 40
    max_cascade_nodes: int = 60
    base_time: int = 1_600_000_000


def _validate(cfg: SyntheticConfig) -> None:
    if not cfg.domains:
        raise ValueError("synthetic config needs at least one domain")
    names = [d.name for d in cfg.domains]
    if len(set(names)) != len(names):
        raise ValueError("domain names must be distinct")
    for d in cfg.domains:
        if d.records < 1:
            raise ValueError(f"domain '{d.name}': records must be >= 1")
        if not 0.0 <= d.fake_fraction <= 1.0:
            raise ValueError(f"domain '{d.name}': fake_fraction must be in [0, 1]")
        if d.topic_words < 1 or d.users < 1:
            raise ValueError(f"domain '{d.name}': topic_words and users must be >= 1")
        if d.branching_mean <= 0 or d.interarrival_mean <= 0:
            raise ValueError(f"domain '{d.name}': cascade parameters must be > 0")
        if d.subclusters < 1:
            raise ValueError(f"domain '{d.name}': subclusters must be >= 1")
        if not 0.0 <= d.subcluster_affinity <= 1.0:
            raise ValueError(f"domain '{d.name}': subcluster_affinity must be in [0, 1]")


def _record_rng(seed: int, domain_index: int, record_index: int) -> np.random.Generator:
    return np.random.default_rng([seed & _SEED_MASK, domain_index, record_index])


def _pick(rng: np.random.Generator, pool: list[str]) -> str:
    return pool[int(rng.integers(0, len(pool)))]


def _subcluster_slice(pool: list[str], sc: int, count: int) -> list[str]:
    size = len(pool)
    start = (sc * size) // count
    end = ((sc + 1) * size) // count
    return pool[start:end] or pool


def _make_cascade(
    rng: np.random.Generator,
    record_id: str,
    published_at: int,
    spec: DomainSpec,
    cfg: SyntheticConfig,
    fake: bool,
    user_slice: list[str],
    domain_users: list[str],
    shared_users: list[str],
    tweet_vocab: list[str],
) -> tuple[CascadeNode, ...]:
    branching = spec.branching_mean * (1.0 + 0.8 * spec.label_signal) if fake else spec.branching_mean
    interarrival = spec.interarrival_mean / (1.0 + spec.label_signal) if fake else spec.interarrival_mean

    def draw_user() -> str:
        if shared_users and rng.random() < spec.shared_user_prob:
            return _pick(rng, shared_users)
        if rng.random() < spec.subcluster_affinity:
            return _pick(rng, user_slice)
        return _pick(rng, domain_users)

    nodes: list[CascadeNode] = []
    frontier: list[int] = []

    def add_node(parent_index: int | None) -> int:
        idx = len(nodes)
        if parent_index is None:
            base = published_at
            parent_id = None
            parent_user = None
        else:
            base = nodes[parent_index].timestamp
            parent_id = nodes[parent_index].tweet_id
            parent_user = nodes[parent_index].user_id
        ts = base + 1 + int(rng.exponential(interarrival))
        words = [_pick(rng, tweet_vocab) for _ in range(int(rng.integers(3, 7)))]
        if rng.random() < 0.3:
            words.append(DEFAULT_POSITIVE[int(rng.integers(0, len(DEFAULT_POSITIVE)))])
        if rng.random() < 0.3:
            words.append(DEFAULT_NEGATIVE[int(rng.integers(0, len(DEFAULT_NEGATIVE)))])
        mentions: tuple[str, ...] = ()
        if parent_user is not None and rng.random() < 0.5:
            mentions = (parent_user,)
        n_tags = int(rng.integers(0, 3))
        hashtags = tuple(_pick(rng, tweet_vocab) for _ in range(n_tags))
        nodes.append(
            CascadeNode(
                tweet_id=f"{record_id}-t{idx}",
                user_id=draw_user(),
                timestamp=ts,
                parent=parent_id,
                is_public=bool(rng.random() < 0.9),
                mentions=mentions,
                hashtags=hashtags,
                text=" ".join(words),
                user_verified=bool(rng.random() < 0.25),
                followers=int(rng.integers(0, 5000)),
                friends=int(rng.integers(0, 2000)),
                lists=int(rng.integers(0, 50)),
                favourites=int(rng.integers(0, 10000)),
                user_created_at=cfg.base_time - int(rng.integers(100_000, 100_000_000)),
            )
        )
        return idx

    n_roots = 1 + int(rng.random() < 0.3)
    for _ in range(n_roots):
        frontier.append(add_node(None))
    while frontier and len(nodes) < cfg.max_cascade_nodes:
        parent = frontier.pop(0)
        n_children = int(rng.poisson(branching))
        for _ in range(n_children):
            if len(nodes) >= cfg.max_cascade_nodes:
                break
            frontier.append(add_node(parent))
    return tuple(nodes)


def generate_synthetic(cfg: SyntheticConfig, seed: int) -> RecordSet:
    """Generate a labelled, domain-tagged corpus; byte-stable for a given seed."""
    _validate(cfg)
    shared_markers = [f"mk_{i}" for i in range(cfg.shared_markers)]
    shared_users = [f"shared_u{i}" for i in range(cfg.shared_users)]
    records: list[NewsRecord] = []
    global_index = 0
    for di, spec in enumerate(cfg.domains):
        topic = [f"{spec.name}_t{i}" for i in range(spec.topic_words)]
        markers = [f"{spec.name}_mk{i}" for i in range(cfg.marker_words)]
        users = [f"{spec.name}_u{i}" for i in range(spec.users)]
        for ri in range(spec.records):
            rng = _record_rng(seed, di, ri)
            record_id = f"{spec.name}-{ri:04d}"
            sc = ri % spec.subclusters
            topic_slice = _subcluster_slice(topic, sc, spec.subclusters)
            user_slice = _subcluster_slice(users, sc, spec.subclusters)
            fake = bool(rng.random() < spec.fake_fraction)
            published_at = cfg.base_time + global_index * 7200 + int(rng.integers(0, 3600))
            words = []
            for _ in range(cfg.title_words):
                pool = topic_slice if rng.random() < spec.subcluster_affinity else topic
                words.append(_pick(rng, pool))
            if fake:
                n_mark = max(1, round(3 * spec.label_signal))
                for _ in range(n_mark):
                    if rng.random() < spec.shared_marker_fraction:
                        words.append(_pick(rng, shared_markers))
                    else:
                        words.append(_pick(rng, markers))
            cascade = _make_cascade(
                rng, record_id, published_at, spec, cfg, fake,
                user_slice, users, shared_users, topic_slice,
            )
            record = NewsRecord(
                id=record_id,
                published_at=published_at,
                title=" ".join(words),
                cascade=cascade,
                label=1 if fake else 0,
                domain_tag=spec.name,
            )
            validate_record(record, record_id)
            records.append(record)
            global_index += 1
    return RecordSet(records=tuple(records), provenance=f"synthetic seed={seed}")


def demo_config() -> SyntheticConfig:
    """Three-domain corpus (100/700/200) with distinct propagation profiles."""
    common = dict(
        topic_words=100, users=250, label_signal=1.0,
        subclusters=5, subcluster_affinity=0.75,
    )
    return SyntheticConfig(
        domains=(
            DomainSpec(
                name="politics", records=100, fake_fraction=0.45,
                branching_mean=2.0, interarrival_mean=180.0, **common,
            ),
            DomainSpec(
                name="gossip", records=700, fake_fraction=0.35,
                branching_mean=1.05, interarrival_mean=1800.0, **common,
            ),
            DomainSpec(
                name="health", records=200, fake_fraction=0.25,
                branching_mean=1.5, interarrival_mean=600.0, **common,
            ),
        )
    )


_DOMAIN_INT_KEYS = {"records", "topic_words", "users", "subclusters"}
_DOMAIN_FLOAT_KEYS = {
    "fake_fraction", "branching_mean", "interarrival_mean",
    "label_signal", "shared_user_prob", "shared_marker_fraction",
    "subcluster_affinity",
}
_CORPUS_INT_KEYS = {
    "title_words", "marker_words", "shared_markers", "shared_users",
    "max_cascade_nodes", "base_time",
}


def parse_synthetic_config(text: str) -> SyntheticConfig:
    """Parse the flat key = value config format (domains as repeated sections)."""
    parser = configparser.ConfigParser()
    parser.read_string(text)
    corpus_kwargs: dict = {}
    domains: list[DomainSpec] = []
    for section in parser.sections():
        if section == "corpus":
            for key, value in parser.items(section):
                if key not in _CORPUS_INT_KEYS:
                    raise ValueError(f"unknown corpus key '{key}'")
                corpus_kwargs[key] = int(value)
        elif section.startswith("domain "):
            name = section[len("domain "):].strip()
            if not name:
                raise ValueError("domain section needs a name: [domain <name>]")
            kwargs: dict = {"name": name}
            for key, value in parser.items(section):
                if key in _DOMAIN_INT_KEYS:
                    kwargs[key] = int(value)
                elif key in _DOMAIN_FLOAT_KEYS:
                    kwargs[key] = float(value)
                else:
                    raise ValueError(f"unknown key '{key}' in [domain {name}]")
            if "records" not in kwargs:
                raise ValueError(f"[domain {name}] must set records")
            domains.append(DomainSpec(**kwargs))
        else:
            raise ValueError(f"unknown section '[{section}]'")
    cfg = SyntheticConfig(domains=tuple(domains), **corpus_kwargs)
    _validate(cfg)
    return cfg


def load_synthetic_config(path) -> SyntheticConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_synthetic_config(fh.read())
