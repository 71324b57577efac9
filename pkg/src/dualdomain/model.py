"""Dual-subspace classifier: six 2-layer sigmoid blocks and the 4-term loss.

Two encoders map the input into a domain-specific and a cross-domain latent
space; decoders recover the label, the input, and the domain embedding.
The cross-domain decoder is the adversary: its loss enters the total with a
negative weight so the shared encoder learns to defeat it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

BCE_CLAMP = 1e-7

THETA1_BLOCKS = ("f_specific", "f_shared", "g_pred", "g_recon", "g_specific")
THETA2_BLOCKS = ("g_shared",)
ALL_BLOCKS = THETA1_BLOCKS + THETA2_BLOCKS
BLOCK_PARAMS = ("w1", "b1", "w2", "b2")


def sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x, dtype=np.float64)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def hidden_size(d_in: int, d_out: int) -> int:
    return max(1, -(-max(d_in, d_out) // 2))


@dataclass
class DenseBlock:
    """z = sigmoid(w2 @ sigmoid(w1 @ x + b1) + b2)."""

    w1: np.ndarray  # (hidden, d_in)
    b1: np.ndarray  # (hidden,)
    w2: np.ndarray  # (d_out, hidden)
    b2: np.ndarray  # (d_out,)

    @property
    def d_in(self) -> int:
        return self.w1.shape[1]

    @property
    def d_out(self) -> int:
        return self.w2.shape[0]

    def apply(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(hidden activations, outputs) for a (n, d_in) batch."""
        h = sigmoid(x @ self.w1.T + self.b1)
        z = sigmoid(h @ self.w2.T + self.b2)
        return h, z


def _glorot(rng: np.random.Generator, d_out: int, d_in: int) -> np.ndarray:
    limit = math.sqrt(6.0 / (d_in + d_out))
    return rng.uniform(-limit, limit, size=(d_out, d_in))


def init_block(d_in: int, d_out: int, rng: np.random.Generator) -> DenseBlock:
    hidden = hidden_size(d_in, d_out)
    return DenseBlock(
        w1=_glorot(rng, hidden, d_in),
        b1=np.zeros(hidden),
        w2=_glorot(rng, d_out, hidden),
        b2=np.zeros(d_out),
    )


@dataclass
class ModelParams:
    f_specific: DenseBlock
    f_shared: DenseBlock
    g_pred: DenseBlock
    g_recon: DenseBlock
    g_specific: DenseBlock
    g_shared: DenseBlock
    d_in: int
    d_latent: int
    n_domains: int
    seed: int

    def block(self, name: str) -> DenseBlock:
        return getattr(self, name)


def init_model(d_in: int, d_latent: int, n_domains: int, seed: int) -> ModelParams:
    if min(d_in, d_latent, n_domains) < 1:
        raise ValueError("all model dimensions must be >= 1")
    rng = np.random.default_rng(seed & 0x7FFFFFFFFFFFFFFF)
    return ModelParams(
        f_specific=init_block(d_in, d_latent, rng),
        f_shared=init_block(d_in, d_latent, rng),
        g_pred=init_block(2 * d_latent, 1, rng),
        g_recon=init_block(2 * d_latent, d_in, rng),
        g_specific=init_block(d_latent, n_domains, rng),
        g_shared=init_block(d_latent, n_domains, rng),
        d_in=d_in,
        d_latent=d_latent,
        n_domains=n_domains,
        seed=seed,
    )


@dataclass
class ForwardPass:
    """All activations of one batch; 2-D arrays even for a single example."""

    x: np.ndarray
    y_hat: np.ndarray      # (n,)
    x_hat: np.ndarray      # (n, d_in)
    d_spec: np.ndarray     # (n, n_domains)
    d_shared: np.ndarray   # (n, n_domains)
    z_spec: np.ndarray     # (n, d_latent)
    z_shared: np.ndarray   # (n, d_latent)
    z_concat: np.ndarray   # (n, 2 * d_latent)
    h_f_specific: np.ndarray
    h_f_shared: np.ndarray
    h_g_pred: np.ndarray
    h_g_recon: np.ndarray
    h_g_specific: np.ndarray
    h_g_shared: np.ndarray


def forward(m: ModelParams, x: np.ndarray) -> ForwardPass:
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if x.shape[1] != m.d_in:
        raise ValueError(f"input width {x.shape[1]} does not match model d_in {m.d_in}")
    if not np.all(np.isfinite(x)):
        raise ValueError("model input has non-finite entries")
    h_spec, z_spec = m.f_specific.apply(x)
    h_shared, z_shared = m.f_shared.apply(x)
    z_concat = np.concatenate([z_spec, z_shared], axis=1)
    h_pred, y_hat = m.g_pred.apply(z_concat)
    h_recon, x_hat = m.g_recon.apply(z_concat)
    h_gspec, d_spec = m.g_specific.apply(z_spec)
    h_gshared, d_shared = m.g_shared.apply(z_shared)
    return ForwardPass(
        x=x,
        y_hat=y_hat[:, 0],
        x_hat=x_hat,
        d_spec=d_spec,
        d_shared=d_shared,
        z_spec=z_spec,
        z_shared=z_shared,
        z_concat=z_concat,
        h_f_specific=h_spec,
        h_f_shared=h_shared,
        h_g_pred=h_pred,
        h_g_recon=h_recon,
        h_g_specific=h_gspec,
        h_g_shared=h_gshared,
    )


@dataclass(frozen=True)
class LossBreakdown:
    l_pred: float
    l_recon: float
    l_specific: float
    l_shared: float
    l_final: float
    lambda1: float
    lambda2: float
    lambda3: float


def combine_losses(
    l_pred: float, l_recon: float, l_specific: float, l_shared: float,
    lambda1: float, lambda2: float, lambda3: float,
) -> LossBreakdown:
    return LossBreakdown(
        l_pred=l_pred,
        l_recon=l_recon,
        l_specific=l_specific,
        l_shared=l_shared,
        l_final=l_pred + lambda1 * l_recon + lambda2 * l_specific - lambda3 * l_shared,
        lambda1=lambda1,
        lambda2=lambda2,
        lambda3=lambda3,
    )


def losses(
    out: ForwardPass,
    y: np.ndarray,
    x_target: np.ndarray,
    f_domain: np.ndarray,
    lambda1: float,
    lambda2: float,
    lambda3: float,
) -> LossBreakdown:
    """Batch-mean loss terms; squared errors are averaged over dimensions."""
    y = np.atleast_1d(np.asarray(y, dtype=np.float64))
    x_target = np.atleast_2d(np.asarray(x_target, dtype=np.float64))
    f_domain = np.atleast_2d(np.asarray(f_domain, dtype=np.float64))
    y_hat = np.clip(out.y_hat, BCE_CLAMP, 1.0 - BCE_CLAMP)
    l_pred = float(np.mean(-(y * np.log(y_hat) + (1.0 - y) * np.log(1.0 - y_hat))))
    l_recon = float(np.mean(np.square(x_target - out.x_hat)))
    l_specific = float(np.mean(np.square(f_domain - out.d_spec)))
    l_shared = float(np.mean(np.square(out.d_shared - f_domain)))
    return combine_losses(l_pred, l_recon, l_specific, l_shared, lambda1, lambda2, lambda3)


def block_param_arrays(block: DenseBlock) -> dict[str, np.ndarray]:
    return {name: getattr(block, name) for name in BLOCK_PARAMS}


def model_dims(m: ModelParams) -> dict[str, int]:
    return {"d_in": m.d_in, "d_latent": m.d_latent, "n_domains": m.n_domains}


def zero_like_params(m: ModelParams, block_names: tuple[str, ...]) -> dict[str, dict[str, np.ndarray]]:
    return {
        bname: {pname: np.zeros_like(arr) for pname, arr in block_param_arrays(m.block(bname)).items()}
        for bname in block_names
    }
