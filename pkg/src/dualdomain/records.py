"""Corpus data model and JSONL (de)serialization.

A corpus file is UTF-8 text, one JSON object per line.  Record objects carry
``id``, ``published_at``, ``title``, ``cascade`` and optionally ``label``
(0 real / 1 fake) and ``domain_tag`` (evaluation-only ground truth, never
shown to discovery, selection or training code).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np


class RecordError(ValueError):
    """Malformed corpus content."""


@dataclass(frozen=True)
class CascadeNode:
    tweet_id: str
    user_id: str
    timestamp: int
    parent: str | None = None
    is_public: bool = True
    mentions: tuple[str, ...] = ()
    hashtags: tuple[str, ...] = ()
    text: str | None = None
    user_verified: bool = False
    followers: int = 0
    friends: int = 0
    lists: int = 0
    favourites: int = 0
    user_created_at: int = 0


@dataclass(frozen=True)
class NewsRecord:
    id: str
    published_at: int
    title: str
    cascade: tuple[CascadeNode, ...] = ()
    label: int | None = None
    domain_tag: str | None = None


@dataclass(frozen=True)
class RecordSet:
    """Ordered collection of records; iteration order is file order."""

    records: tuple[NewsRecord, ...] = ()
    provenance: str = ""

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for r in self.records:
            if r.id in seen:
                raise RecordError(f"duplicate record id '{r.id}'")
            seen.add(r.id)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[NewsRecord]:
        return iter(self.records)

    def ids(self) -> tuple[str, ...]:
        return tuple(r.id for r in self.records)

    def by_id(self, record_id: str) -> NewsRecord:
        for r in self.records:
            if r.id == record_id:
                return r
        raise KeyError(record_id)


_NODE_COUNT_FIELDS = ("followers", "friends", "lists", "favourites")


def _require(obj: dict, name: str, where: str) -> object:
    if name not in obj:
        raise RecordError(f"{where}: missing field {name}")
    return obj[name]


def _as_int(value: object, name: str, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise RecordError(f"{where}: field {name} must be an integer")
    return value


def _as_str_list(value: object, name: str, where: str) -> tuple[str, ...]:
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise RecordError(f"{where}: field {name} must be a list of strings")
    return tuple(value)


def _parse_node(obj: dict, where: str) -> CascadeNode:
    if not isinstance(obj, dict):
        raise RecordError(f"{where}: cascade entries must be objects")
    tweet_id = _require(obj, "tweet_id", where)
    user_id = _require(obj, "user_id", where)
    timestamp = _as_int(_require(obj, "timestamp", where), "timestamp", where)
    if timestamp < 0:
        raise RecordError(f"{where}: timestamp must be >= 0")
    counts = {}
    for name in _NODE_COUNT_FIELDS:
        counts[name] = _as_int(obj.get(name, 0), name, where)
        if counts[name] < 0:
            raise RecordError(f"{where}: {name} must be >= 0")
    parent = obj.get("parent")
    if parent is not None and not isinstance(parent, str):
        raise RecordError(f"{where}: field parent must be a string")
    text = obj.get("text")
    if text is not None and not isinstance(text, str):
        raise RecordError(f"{where}: field text must be a string")
    return CascadeNode(
        tweet_id=str(tweet_id),
        user_id=str(user_id),
        timestamp=timestamp,
        parent=parent,
        is_public=bool(obj.get("is_public", True)),
        mentions=_as_str_list(obj.get("mentions", []), "mentions", where),
        hashtags=_as_str_list(obj.get("hashtags", []), "hashtags", where),
        text=text,
        user_verified=bool(obj.get("user_verified", False)),
        user_created_at=_as_int(obj.get("user_created_at", 0), "user_created_at", where),
        **counts,
    )


def validate_record(record: NewsRecord, where: str = "record") -> None:
    """Check intra-record invariants: unique tweet ids, known parents."""
    seen: set[str] = set()
    for node in record.cascade:
        if node.tweet_id in seen:
            raise RecordError(f"{where}: duplicate tweet_id '{node.tweet_id}'")
        seen.add(node.tweet_id)
    for node in record.cascade:
        if node.parent is not None and node.parent not in seen:
            raise RecordError(
                f"{where}: parent '{node.parent}' of tweet '{node.tweet_id}' not found in record"
            )
        if node.parent == node.tweet_id:
            raise RecordError(f"{where}: tweet '{node.tweet_id}' is its own parent")


def _parse_line(line: str, where: str) -> NewsRecord:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise RecordError(f"{where}: invalid JSON: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise RecordError(f"{where}: expected a JSON object")
    rid = _require(obj, "id", where)
    published_at = _as_int(_require(obj, "published_at", where), "published_at", where)
    title = _require(obj, "title", where)
    if not isinstance(title, str):
        raise RecordError(f"{where}: field title must be a string")
    cascade_raw = obj.get("cascade", [])
    if not isinstance(cascade_raw, list):
        raise RecordError(f"{where}: field cascade must be a list")
    cascade = tuple(
        _parse_node(n, f"{where}: cascade[{k}]") for k, n in enumerate(cascade_raw)
    )
    label = obj.get("label")
    if label is not None:
        if isinstance(label, bool) or label not in (0, 1):
            raise RecordError(f"{where}: label must be 0 or 1")
    domain_tag = obj.get("domain_tag")
    if domain_tag is not None and not isinstance(domain_tag, str):
        raise RecordError(f"{where}: field domain_tag must be a string")
    record = NewsRecord(
        id=str(rid),
        published_at=published_at,
        title=title,
        cascade=cascade,
        label=label,
        domain_tag=domain_tag,
    )
    validate_record(record, where)
    return record


def parse_records(lines: Iterable[str], provenance: str = "") -> RecordSet:
    """Parse line-delimited JSON records, preserving file order."""
    out: list[NewsRecord] = []
    seen: set[str] = set()
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        record = _parse_line(line, f"line {lineno}")
        if record.id in seen:
            raise RecordError(f"line {lineno}: duplicate record id '{record.id}'")
        seen.add(record.id)
        out.append(record)
    return RecordSet(records=tuple(out), provenance=provenance)


def node_to_dict(node: CascadeNode) -> dict:
    out: dict = {
        "tweet_id": node.tweet_id,
        "user_id": node.user_id,
        "timestamp": node.timestamp,
    }
    if node.parent is not None:
        out["parent"] = node.parent
    out["is_public"] = node.is_public
    out["mentions"] = list(node.mentions)
    out["hashtags"] = list(node.hashtags)
    if node.text is not None:
        out["text"] = node.text
    out["user_verified"] = node.user_verified
    out["followers"] = node.followers
    out["friends"] = node.friends
    out["lists"] = node.lists
    out["favourites"] = node.favourites
    out["user_created_at"] = node.user_created_at
    return out


def record_to_json(record: NewsRecord) -> str:
    out: dict = {
        "id": record.id,
        "published_at": record.published_at,
        "title": record.title,
        "cascade": [node_to_dict(n) for n in record.cascade],
    }
    if record.label is not None:
        out["label"] = record.label
    if record.domain_tag is not None:
        out["domain_tag"] = record.domain_tag
    return json.dumps(out, separators=(",", ":"), ensure_ascii=False)


def serialize_records(rs: RecordSet) -> str:
    return "".join(record_to_json(r) + "\n" for r in rs)


def load_records(path, provenance: str | None = None) -> RecordSet:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_records(fh, provenance if provenance is not None else str(path))


def dump_records(rs: RecordSet, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_records(rs))


def split_dataset(rs: RecordSet, train_fraction: float, seed: int) -> tuple[RecordSet, RecordSet]:
    """Uniform random split; both halves keep the original file order."""
    if not 0.0 <= train_fraction <= 1.0:
        raise ValueError(f"train_fraction must be in [0, 1], got {train_fraction}")
    if len(rs) == 0:
        raise ValueError("cannot split an empty record set")
    n = len(rs)
    k = round(train_fraction * n)
    perm = np.random.default_rng(seed).permutation(n)
    train_idx = sorted(int(i) for i in perm[:k])
    test_idx = sorted(int(i) for i in perm[k:])
    train = RecordSet(
        records=tuple(rs.records[i] for i in train_idx),
        provenance=f"{rs.provenance} [train {train_fraction} seed {seed}]",
    )
    test = RecordSet(
        records=tuple(rs.records[i] for i in test_idx),
        provenance=f"{rs.provenance} [test {1.0 - train_fraction} seed {seed}]",
    )
    return train, test


def nodes_within(record: NewsRecord, delta_t: int) -> tuple[CascadeNode, ...]:
    """Cascade nodes inside the observation window [published_at, published_at + delta_t]."""
    lo = record.published_at
    hi = record.published_at + delta_t
    return tuple(n for n in record.cascade if lo <= n.timestamp <= hi)


def users_within(record: NewsRecord, delta_t: int) -> frozenset[str]:
    return frozenset(n.user_id for n in nodes_within(record, delta_t))
