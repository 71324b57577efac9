"""Versioned JSON checkpoints: model blocks, standardizer, partition digest.

The partition fingerprint ties a trained model to the community ordering its
domain embeddings came from, so a stale embedding artifact is caught on load
rather than silently misaligning components.
"""

from __future__ import annotations

import json

import numpy as np

from .model import ALL_BLOCKS, BLOCK_PARAMS, DenseBlock, ModelParams
from .vectors import Standardizer

FORMAT_VERSION = 1


def save_checkpoint(
    path,
    m: ModelParams,
    standardizer: Standardizer,
    partition_fingerprint: str,
) -> None:
    payload = {
        "format_version": FORMAT_VERSION,
        "dims": {"d_in": m.d_in, "d_latent": m.d_latent, "n_domains": m.n_domains},
        "seed": m.seed,
        "blocks": {
            name: {p: getattr(m.block(name), p).tolist() for p in BLOCK_PARAMS}
            for name in ALL_BLOCKS
        },
        "standardizer": {
            "mean": standardizer.mean.tolist(),
            "std": standardizer.std.tolist(),
        },
        "partition_fingerprint": partition_fingerprint,
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def load_checkpoint(path) -> tuple[ModelParams, Standardizer, str]:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    version = payload.get("format_version")
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported checkpoint version {version!r}")
    dims = payload["dims"]
    blocks = {}
    for name in ALL_BLOCKS:
        raw = payload["blocks"][name]
        blocks[name] = DenseBlock(
            w1=np.array(raw["w1"], dtype=np.float64),
            b1=np.array(raw["b1"], dtype=np.float64),
            w2=np.array(raw["w2"], dtype=np.float64),
            b2=np.array(raw["b2"], dtype=np.float64),
        )
    m = ModelParams(
        **blocks,
        d_in=int(dims["d_in"]),
        d_latent=int(dims["d_latent"]),
        n_domains=int(dims["n_domains"]),
        seed=int(payload["seed"]),
    )
    standardizer = Standardizer(
        mean=np.array(payload["standardizer"]["mean"], dtype=np.float64),
        std=np.array(payload["standardizer"]["std"], dtype=np.float64),
    )
    return m, standardizer, str(payload["partition_fingerprint"])
