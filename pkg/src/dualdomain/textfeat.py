"""Title text representations: signed feature hashing or precomputed lookup."""

from __future__ import annotations

import csv
import hashlib

import numpy as np


def tokenize(text: str) -> list[str]:
    return text.lower().split()


def _token_hash(token: str, seed: int) -> int:
    salt = (seed & 0xFFFFFFFFFFFFFFFF).to_bytes(8, "little")
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8, salt=salt).digest()
    return int.from_bytes(digest, "big")


def hashed_text_features(title: str, dim: int, seed: int) -> np.ndarray:
    """Signed feature hashing of whitespace tokens, L2-normalized.

    Bag semantics: token order is irrelevant; an empty title maps to the
    zero vector.  Stable across processes (keyed blake2b, not builtin hash).
    """
    if dim < 2:
        raise ValueError(f"text dimension must be >= 2, got {dim}")
    vec = np.zeros(dim, dtype=np.float64)
    for token in tokenize(title):
        h = _token_hash(token, seed)
        sign = 1.0 if (h >> 63) & 1 == 0 else -1.0
        vec[h % dim] += sign
    norm = float(np.linalg.norm(vec))
    if norm > 0.0:
        vec /= norm
    return vec


def lookup_text_features(record_id: str, table: dict[str, np.ndarray]) -> np.ndarray:
    if record_id not in table:
        raise ValueError(f"no precomputed text vector for record '{record_id}'")
    return np.asarray(table[record_id], dtype=np.float64)


def load_embedding_table(path) -> dict[str, np.ndarray]:
    """Read an id-keyed vector table from CSV (header: id,e0,e1,...)."""
    table: dict[str, np.ndarray] = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[0] != "id":
            raise ValueError(f"{path}: expected a header starting with 'id'")
        width = len(header) - 1
        for row in reader:
            if len(row) != width + 1:
                raise ValueError(f"{path}: row for '{row[0]}' has {len(row) - 1} values, expected {width}")
            table[row[0]] = np.array([float(x) for x in row[1:]], dtype=np.float64)
    return table
