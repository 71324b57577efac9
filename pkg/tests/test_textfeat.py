import numpy as np
import pytest

from dualdomain.lexicon import default_lexicon, parse_lexicon
from dualdomain.textfeat import hashed_text_features, load_embedding_table, lookup_text_features
from dualdomain.vectors import Standardizer, assemble_input


def test_empty_title_is_zero_vector():
    vec = hashed_text_features("", 16, seed=1)
    assert vec.shape == (16,)
    assert not vec.any()


def test_hashing_deterministic_and_bag_like():
    a = hashed_text_features("Vote Now Today", 64, seed=5)
    b = hashed_text_features("vote now today", 64, seed=5)
    c = hashed_text_features("today vote now", 64, seed=5)
    assert np.array_equal(a, b)  # case folded
    assert np.array_equal(a, c)  # order independent
    d = hashed_text_features("vote now today", 64, seed=6)
    assert not np.array_equal(a, d)


def test_hashing_output_is_unit_norm():
    vec = hashed_text_features("some words here and there", 32, seed=0)
    assert np.isclose(np.linalg.norm(vec), 1.0)


def test_hashing_rejects_tiny_dim():
    with pytest.raises(ValueError):
        hashed_text_features("x", 1, seed=0)


def test_lookup_missing_id_names_it():
    with pytest.raises(ValueError, match="'r42'"):
        lookup_text_features("r42", {"r1": np.zeros(3)})


def test_lookup_table_csv(tmp_path):
    path = tmp_path / "emb.csv"
    path.write_text("id,e0,e1\nr1,0.5,-1.0\nr2,0.0,2.0\n", encoding="utf-8")
    table = load_embedding_table(path)
    assert np.allclose(lookup_text_features("r2", table), [0.0, 2.0])


def test_standardizer_hand_case():
    s = Standardizer.fit(np.array([[1.0], [3.0]]))
    assert np.allclose(s.apply(np.array([[1.0], [3.0]])), [[-1.0], [1.0]])


def test_standardizer_constant_column_passthrough():
    s = Standardizer.fit(np.array([[5.0, 1.0], [5.0, 3.0], [5.0, 5.0]]))
    out = s.apply(np.array([[5.0, 3.0]]))
    assert np.allclose(out, [[0.0, 0.0]])


def test_standardizer_zero_mean_on_fit_data():
    rng = np.random.default_rng(2)
    x = rng.normal(3.0, 2.0, size=(50, 4))
    s = Standardizer.fit(x)
    assert np.allclose(s.apply(x).mean(axis=0), 0.0, atol=1e-12)


def test_standardizer_dimension_mismatch():
    s = Standardizer.fit(np.zeros((3, 4)))
    with pytest.raises(ValueError, match="dimension mismatch"):
        s.apply(np.zeros(5))


def test_assemble_concatenates_text_first():
    text = np.array([1.0, 2.0, 3.0, 4.0])
    net = np.array([5.0, 6.0, 7.0])
    out = assemble_input(text, net)
    assert out.shape == (7,)
    assert np.array_equal(out[:4], text)
    assert np.array_equal(out[4:], net)


def test_assemble_rejects_non_finite():
    with pytest.raises(ValueError):
        assemble_input(np.array([np.nan]), np.array([1.0]))


def test_lexicon_scoring():
    lex = default_lexicon()
    score, pos, neg = lex.score("good good bad".split())
    assert np.isclose(pos, 2 / 3)
    assert np.isclose(neg, 1 / 3)
    assert np.isclose(score, 1 / 3)


def test_lexicon_parse_sections():
    lex = parse_lexicon("positive:\nyay\nnegative:\nboo\nugh\n")
    assert lex.positive == {"yay"}
    assert lex.negative == {"boo", "ugh"}
    with pytest.raises(ValueError):
        parse_lexicon("word-before-section\n")
