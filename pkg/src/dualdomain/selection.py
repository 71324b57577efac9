"""Budgeted diverse instance selection over domain embeddings.

Repeated rounds of sign-random-projection hashing bucket the unselected
records; one record is drawn per bucket per round until the labelling
budget is met.  Projection entries follow the sparse +-sqrt(3)/0 scheme
(probabilities 1/6, 2/3, 1/6).  Coverage of a selected set is measured by
the coefficient of variation of nearest-neighbour distances (lower =
more even coverage).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .domains import DomainEmbedding

_SEED_MASK = 0x7FFFFFFFFFFFFFFF
_SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class ProjectionBank:
    vectors: np.ndarray  # (count, dim), entries in {+sqrt(3), 0, -sqrt(3)}
    seed: int

    @property
    def count(self) -> int:
        return int(self.vectors.shape[0])

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])


def sample_projections(dim: int, count: int, seed: int) -> ProjectionBank:
    if dim < 1 or count < 1:
        raise ValueError("projection bank needs dim >= 1 and count >= 1")
    rng = np.random.default_rng(seed & _SEED_MASK)
    support = np.array([_SQRT3, 0.0, -_SQRT3])
    vectors = rng.choice(support, size=(count, dim), p=[1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0])
    return ProjectionBank(vectors=vectors, seed=seed)


@dataclass(frozen=True, order=True)
class HashKey:
    bits: str  # one char per hash function; '1' for the non-negative side

    def __post_init__(self) -> None:
        if not self.bits or any(c not in "01" for c in self.bits):
            raise ValueError(f"hash key must be a nonempty 0/1 string, got {self.bits!r}")

    def __len__(self) -> int:
        return len(self.bits)

    def hamming(self, other: "HashKey") -> int:
        if len(other) != len(self):
            raise ValueError("hash keys have different widths")
        return sum(a != b for a, b in zip(self.bits, other.bits))


def hash_record(embedding_vector: np.ndarray, bank: ProjectionBank) -> HashKey:
    """Concatenated projection signs; sign(0) counts as positive."""
    vec = np.asarray(embedding_vector, dtype=np.float64)
    if vec.shape != (bank.dim,):
        raise ValueError(f"vector has dim {vec.shape}, bank expects ({bank.dim},)")
    signs = (bank.vectors @ vec) >= 0.0
    return HashKey("".join("1" if s else "0" for s in signs))


def hash_matrix(matrix: np.ndarray, bank: ProjectionBank) -> list[str]:
    signs = (np.asarray(matrix, dtype=np.float64) @ bank.vectors.T) >= 0.0
    return ["".join("1" if s else "0" for s in row) for row in signs]


@dataclass(frozen=True)
class RoundStats:
    round: int
    bins: int
    picked: int


@dataclass(frozen=True)
class SelectionResult:
    ids: tuple[str, ...]
    rounds: int
    round_stats: tuple[RoundStats, ...]

    def __post_init__(self) -> None:
        if len(set(self.ids)) != len(self.ids):
            raise ValueError("selection contains duplicate ids")


def lsh_select(
    embeddings: DomainEmbedding,
    budget: int,
    n_hashes: int = 10,
    seed: int = 0,
) -> SelectionResult:
    """Round r rehashes the still-unselected pool with bank seed (seed XOR r)
    and picks uniformly from each bucket, ascending key order, until the
    budget is exhausted."""
    n = len(embeddings)
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    if budget > n:
        raise ValueError(f"budget {budget} exceeds pool size {n}")
    remaining = list(range(n))
    chosen: list[int] = []
    stats: list[RoundStats] = []
    round_idx = 0
    while len(chosen) < budget:
        bank = sample_projections(embeddings.dim, n_hashes, seed ^ round_idx)
        keys = hash_matrix(embeddings.matrix[remaining], bank)
        buckets: dict[str, list[int]] = {}
        for pos, key in zip(remaining, keys):
            buckets.setdefault(key, []).append(pos)
        rng = np.random.default_rng([seed & _SEED_MASK, round_idx])
        picked_now: list[int] = []
        for key in sorted(buckets):
            if len(chosen) + len(picked_now) >= budget:
                break
            bucket = buckets[key]
            picked_now.append(bucket[int(rng.integers(0, len(bucket)))])
        chosen.extend(picked_now)
        stats.append(RoundStats(round=round_idx, bins=len(buckets), picked=len(picked_now)))
        picked_set = set(picked_now)
        remaining = [i for i in remaining if i not in picked_set]
        round_idx += 1
    return SelectionResult(
        ids=tuple(embeddings.ids[i] for i in chosen),
        rounds=round_idx,
        round_stats=tuple(stats),
    )


def coverage_lambda(points: np.ndarray | DomainEmbedding) -> float:
    """Population std over mean of nearest-neighbour distances."""
    if isinstance(points, DomainEmbedding):
        points = points.matrix
    points = np.ascontiguousarray(np.asarray(points, dtype=np.float64))
    if points.ndim != 2 or points.shape[0] < 2:
        raise ValueError("coverage needs at least two points")
    deltas = kernels.nn_min_dists(points)
    mean = float(deltas.mean())
    if mean == 0.0:
        raise ValueError("degenerate point set: all nearest-neighbour distances are zero")
    return float(deltas.std()) / mean


def random_select(ids: Sequence[str], budget: int, seed: int = 0) -> SelectionResult:
    """Uniform sample without replacement."""
    n = len(ids)
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    if budget > n:
        raise ValueError(f"budget {budget} exceeds pool size {n}")
    perm = np.random.default_rng(seed & _SEED_MASK).permutation(n)[:budget]
    return SelectionResult(
        ids=tuple(ids[int(i)] for i in perm),
        rounds=1,
        round_stats=(RoundStats(round=0, bins=1, picked=budget),),
    )


def farthest_point_select(
    embeddings: DomainEmbedding, budget: int, seed: int = 0
) -> tuple[str, ...]:
    """Greedy max-min (k-center) reference selector, O(budget * n)."""
    n = len(embeddings)
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    if budget > n:
        raise ValueError(f"budget {budget} exceeds pool size {n}")
    matrix = embeddings.matrix
    rng = np.random.default_rng(seed & _SEED_MASK)
    start = int(rng.integers(0, n))
    chosen = [start]
    min_d = np.linalg.norm(matrix - matrix[start], axis=1)
    min_d[start] = -np.inf
    while len(chosen) < budget:
        nxt = int(np.argmax(min_d))
        chosen.append(nxt)
        d = np.linalg.norm(matrix - matrix[nxt], axis=1)
        min_d = np.minimum(min_d, d)
        min_d[nxt] = -np.inf
    return tuple(embeddings.ids[i] for i in chosen)
