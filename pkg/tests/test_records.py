import numpy as np
import pytest

from dualdomain.records import (
    CascadeNode,
    NewsRecord,
    RecordError,
    RecordSet,
    nodes_within,
    parse_records,
    record_to_json,
    serialize_records,
    split_dataset,
    users_within,
)

LINE_A = '{"id":"a","published_at":100,"title":"hello world","cascade":[{"tweet_id":"t1","user_id":"u1","timestamp":150}]}'
LINE_B = '{"id":"b","published_at":200,"title":"other news","cascade":[],"label":1,"domain_tag":"politics"}'


def test_parse_two_lines_preserves_order():
    rs = parse_records([LINE_A, LINE_B])
    assert len(rs) == 2
    assert rs.ids() == ("a", "b")
    assert rs.records[1].label == 1
    assert rs.records[1].domain_tag == "politics"


def test_parse_empty_input():
    assert len(parse_records([])) == 0
    assert len(parse_records(["", "   "])) == 0


def test_missing_id_names_line():
    bad = '{"published_at":1,"title":"x","cascade":[]}'
    with pytest.raises(RecordError, match="line 3: missing field id"):
        parse_records([LINE_A, LINE_B, bad])


def test_invalid_json_names_line():
    with pytest.raises(RecordError, match="line 2: invalid JSON"):
        parse_records([LINE_A, "{nope"])


def test_duplicate_record_id_names_id():
    with pytest.raises(RecordError, match="duplicate record id 'a'"):
        parse_records([LINE_A, LINE_A])


def test_unknown_parent_rejected():
    bad = (
        '{"id":"c","published_at":1,"title":"x","cascade":'
        '[{"tweet_id":"t1","user_id":"u1","timestamp":2,"parent":"ghost"}]}'
    )
    with pytest.raises(RecordError, match="parent 'ghost'"):
        parse_records([bad])


def test_duplicate_tweet_id_rejected():
    bad = (
        '{"id":"c","published_at":1,"title":"x","cascade":'
        '[{"tweet_id":"t1","user_id":"u1","timestamp":2},'
        '{"tweet_id":"t1","user_id":"u2","timestamp":3}]}'
    )
    with pytest.raises(RecordError, match="duplicate tweet_id 't1'"):
        parse_records([bad])


def test_label_must_be_binary():
    bad = '{"id":"c","published_at":1,"title":"x","cascade":[],"label":2}'
    with pytest.raises(RecordError, match="label must be 0 or 1"):
        parse_records([bad])


def test_negative_timestamp_rejected():
    bad = (
        '{"id":"c","published_at":1,"title":"x","cascade":'
        '[{"tweet_id":"t1","user_id":"u1","timestamp":-5}]}'
    )
    with pytest.raises(RecordError, match="timestamp must be >= 0"):
        parse_records([bad])


def test_round_trip_is_identity():
    rs = parse_records([LINE_A, LINE_B])
    again = parse_records(serialize_records(rs).splitlines())
    assert again.records == rs.records
    # and a second serialization is byte-identical
    assert serialize_records(again) == serialize_records(rs)


def test_round_trip_preserves_full_node():
    node = CascadeNode(
        tweet_id="t9",
        user_id="u9",
        timestamp=123,
        parent=None,
        is_public=False,
        mentions=("u1", "u2"),
        hashtags=("tag",),
        text="some words",
        user_verified=True,
        followers=10,
        friends=4,
        lists=1,
        favourites=7,
        user_created_at=99,
    )
    record = NewsRecord(id="r", published_at=5, title="t", cascade=(node,), label=0)
    parsed = parse_records([record_to_json(record)])
    assert parsed.records[0] == record


def test_recordset_rejects_duplicate_ids():
    r = NewsRecord(id="x", published_at=0, title="t")
    with pytest.raises(RecordError):
        RecordSet(records=(r, r))


def _corpus(n):
    return RecordSet(
        records=tuple(NewsRecord(id=f"r{i}", published_at=i, title="t") for i in range(n))
    )


def test_split_sizes_and_disjointness():
    rs = _corpus(100)
    train, test = split_dataset(rs, 0.75, seed=3)
    assert len(train) == 75 and len(test) == 25
    assert set(train.ids()) | set(test.ids()) == set(rs.ids())
    assert set(train.ids()) & set(test.ids()) == set()


def test_split_boundary_fractions():
    rs = _corpus(10)
    train, test = split_dataset(rs, 1.0, seed=1)
    assert len(train) == 10 and len(test) == 0
    train, test = split_dataset(rs, 0.0, seed=1)
    assert len(train) == 0 and len(test) == 10


def test_split_deterministic():
    rs = _corpus(40)
    a = split_dataset(rs, 0.6, seed=9)
    b = split_dataset(rs, 0.6, seed=9)
    assert a[0].ids() == b[0].ids() and a[1].ids() == b[1].ids()
    c = split_dataset(rs, 0.6, seed=10)
    assert c[0].ids() != a[0].ids()


def test_split_rejects_bad_fraction_and_empty():
    with pytest.raises(ValueError):
        split_dataset(_corpus(5), 1.5, seed=0)
    with pytest.raises(ValueError):
        split_dataset(RecordSet(), 0.5, seed=0)


def test_split_union_is_exact_multiset_over_random_inputs():
    rng = np.random.default_rng(0)
    for trial in range(20):
        n = int(rng.integers(1, 60))
        frac = float(rng.random())
        rs = _corpus(n)
        train, test = split_dataset(rs, frac, seed=trial)
        assert len(train) == round(frac * n)
        assert sorted(train.ids() + test.ids()) == sorted(rs.ids())


def test_nodes_within_window_inclusive():
    record = NewsRecord(
        id="r",
        published_at=100,
        title="t",
        cascade=(
            CascadeNode("a", "u1", 100),
            CascadeNode("b", "u2", 150),
            CascadeNode("c", "u3", 151),
        ),
    )
    kept = nodes_within(record, 50)
    assert [n.tweet_id for n in kept] == ["a", "b"]
    assert users_within(record, 50) == frozenset({"u1", "u2"})
