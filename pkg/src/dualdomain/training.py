"""Alternating minimax training of the dual-subspace model.

Step A descends the full loss over every block except the cross-domain
decoder (the negative adversary weight makes the shared encoder ascend the
adversary's loss); step B recomputes the forward pass and descends the
adversary's loss over the cross-domain decoder alone.  Gradients are exact
backpropagation; Adam states for the two groups are kept separate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import (
    BCE_CLAMP,
    THETA1_BLOCKS,
    THETA2_BLOCKS,
    DenseBlock,
    ForwardPass,
    LossBreakdown,
    ModelParams,
    block_param_arrays,
    combine_losses,
    forward,
    losses,
    sigmoid,
    zero_like_params,
)

GradTree = dict[str, dict[str, np.ndarray]]


def _block_backward(
    block: DenseBlock, x: np.ndarray, h: np.ndarray, z: np.ndarray, g_z: np.ndarray
) -> tuple[dict[str, np.ndarray], np.ndarray]:
    ga2 = g_z * z * (1.0 - z)
    gw2 = ga2.T @ h
    gb2 = ga2.sum(axis=0)
    gh = ga2 @ block.w2
    ga1 = gh * h * (1.0 - h)
    gw1 = ga1.T @ x
    gb1 = ga1.sum(axis=0)
    gx = ga1 @ block.w1
    return {"w1": gw1, "b1": gb1, "w2": gw2, "b2": gb2}, gx


def _loss_output_grads(
    fp: ForwardPass, y: np.ndarray, x_target: np.ndarray, f_domain: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Gradients of the four batch-mean loss terms w.r.t. the head outputs."""
    n = fp.x.shape[0]
    y_hat = fp.y_hat
    clipped = np.clip(y_hat, BCE_CLAMP, 1.0 - BCE_CLAMP)
    inside = (y_hat > BCE_CLAMP) & (y_hat < 1.0 - BCE_CLAMP)
    g_pred = np.where(inside, (clipped - y) / (clipped * (1.0 - clipped)), 0.0) / n
    g_recon = 2.0 * (fp.x_hat - x_target) / fp.x_hat.size
    g_spec = 2.0 * (fp.d_spec - f_domain) / fp.d_spec.size
    g_shared = 2.0 * (fp.d_shared - f_domain) / fp.d_shared.size
    return g_pred, g_recon, g_spec, g_shared


def theta1_gradients(
    m: ModelParams,
    fp: ForwardPass,
    y: np.ndarray,
    x_target: np.ndarray,
    f_domain: np.ndarray,
    lambda1: float,
    lambda2: float,
    lambda3: float,
) -> GradTree:
    """d(batch-mean L_final)/d(theta1); the adversary's parameters only
    route gradient through to the shared encoder."""
    g_pred_out, g_recon_out, g_spec_out, g_shared_out = _loss_output_grads(
        fp, y, x_target, f_domain
    )
    d = m.d_latent
    grads: GradTree = {}
    grads["g_pred"], g_concat_pred = _block_backward(
        m.g_pred, fp.z_concat, fp.h_g_pred, fp.y_hat[:, None], g_pred_out[:, None]
    )
    grads["g_recon"], g_concat_recon = _block_backward(
        m.g_recon, fp.z_concat, fp.h_g_recon, fp.x_hat, lambda1 * g_recon_out
    )
    grads["g_specific"], g_zspec_dec = _block_backward(
        m.g_specific, fp.z_spec, fp.h_g_specific, fp.d_spec, lambda2 * g_spec_out
    )
    _, g_zshared_dec = _block_backward(
        m.g_shared, fp.z_shared, fp.h_g_shared, fp.d_shared, -lambda3 * g_shared_out
    )
    g_zspec = g_concat_pred[:, :d] + g_concat_recon[:, :d] + g_zspec_dec
    g_zshared = g_concat_pred[:, d:] + g_concat_recon[:, d:] + g_zshared_dec
    grads["f_specific"], _ = _block_backward(
        m.f_specific, fp.x, fp.h_f_specific, fp.z_spec, g_zspec
    )
    grads["f_shared"], _ = _block_backward(
        m.f_shared, fp.x, fp.h_f_shared, fp.z_shared, g_zshared
    )
    return grads


def shared_loss_gradients(m: ModelParams, fp: ForwardPass, f_domain: np.ndarray) -> GradTree:
    """d(batch-mean L_shared)/d(g_shared parameters), unscaled."""
    g_shared_out = 2.0 * (fp.d_shared - f_domain) / fp.d_shared.size
    grads, _ = _block_backward(
        m.g_shared, fp.z_shared, fp.h_g_shared, fp.d_shared, g_shared_out
    )
    return {"g_shared": grads}


def theta2_gradients(m: ModelParams, fp: ForwardPass, f_domain: np.ndarray, lambda3: float) -> GradTree:
    """d(-L_final)/d(theta2) == lambda3 * d(L_shared)/d(g_shared)."""
    base = shared_loss_gradients(m, fp, f_domain)
    return {"g_shared": {k: lambda3 * v for k, v in base["g_shared"].items()}}


def _check_finite(grads: GradTree) -> None:
    for bname, params in grads.items():
        for arr in params.values():
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"non-finite gradient in block '{bname}'")


@dataclass
class OptimizerState:
    """Adam with separate moments and step counters per parameter group."""

    learning_rate: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-7
    step1: int = 0
    step2: int = 0
    m1: GradTree = field(default_factory=dict)
    v1: GradTree = field(default_factory=dict)
    m2: GradTree = field(default_factory=dict)
    v2: GradTree = field(default_factory=dict)


def init_optimizer(m: ModelParams, learning_rate: float = 0.001) -> OptimizerState:
    return OptimizerState(
        learning_rate=learning_rate,
        m1=zero_like_params(m, THETA1_BLOCKS),
        v1=zero_like_params(m, THETA1_BLOCKS),
        m2=zero_like_params(m, THETA2_BLOCKS),
        v2=zero_like_params(m, THETA2_BLOCKS),
    )


def _adam_apply(
    m: ModelParams,
    grads: GradTree,
    moment1: GradTree,
    moment2: GradTree,
    step: int,
    opt: OptimizerState,
) -> None:
    correction1 = 1.0 - opt.beta1**step
    correction2 = 1.0 - opt.beta2**step
    for bname, params in grads.items():
        block = m.block(bname)
        for pname, g in params.items():
            m1 = moment1[bname][pname]
            v1 = moment2[bname][pname]
            m1 *= opt.beta1
            m1 += (1.0 - opt.beta1) * g
            v1 *= opt.beta2
            v1 += (1.0 - opt.beta2) * np.square(g)
            m_hat = m1 / correction1
            v_hat = v1 / correction2
            getattr(block, pname)[...] -= opt.learning_rate * m_hat / (np.sqrt(v_hat) + opt.eps)


def train_step(
    m: ModelParams,
    opt: OptimizerState,
    x: np.ndarray,
    y: np.ndarray,
    f_domain: np.ndarray,
    lambda1: float,
    lambda2: float,
    lambda3: float,
    x_target: np.ndarray | None = None,
) -> tuple[ModelParams, OptimizerState, LossBreakdown]:
    """One alternation: theta1 descends L_final, then theta2 (with a fresh
    forward pass) descends the adversary loss.  Parameters and optimizer
    state are updated in place and returned."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if x.shape[0] == 0:
        raise ValueError("empty batch")
    y = np.atleast_1d(np.asarray(y, dtype=np.float64))
    f_domain = np.atleast_2d(np.asarray(f_domain, dtype=np.float64))
    if x_target is None:
        x_target = sigmoid(x)
    fp = forward(m, x)
    breakdown = losses(fp, y, x_target, f_domain, lambda1, lambda2, lambda3)
    g1 = theta1_gradients(m, fp, y, x_target, f_domain, lambda1, lambda2, lambda3)
    _check_finite(g1)
    opt.step1 += 1
    _adam_apply(m, g1, opt.m1, opt.v1, opt.step1, opt)
    fp2 = forward(m, x)
    g2 = theta2_gradients(m, fp2, f_domain, lambda3)
    _check_finite(g2)
    opt.step2 += 1
    _adam_apply(m, g2, opt.m2, opt.v2, opt.step2, opt)
    return m, opt, breakdown


def fit(
    m: ModelParams,
    x: np.ndarray,
    y: np.ndarray,
    f_domain: np.ndarray,
    epochs: int,
    batch_size: int,
    lambda1: float,
    lambda2: float,
    lambda3: float,
    seed: int,
    learning_rate: float = 0.001,
) -> tuple[ModelParams, list[LossBreakdown]]:
    """Seeded shuffled mini-batch training; history holds per-epoch means."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    n = x.shape[0]
    if n == 0:
        raise ValueError("empty training set")
    y = np.asarray(y, dtype=np.float64)
    f_domain = np.atleast_2d(np.asarray(f_domain, dtype=np.float64))
    if y.shape[0] != n or f_domain.shape[0] != n:
        raise ValueError("x, y and f_domain must have matching lengths")
    if epochs < 1 or batch_size < 1:
        raise ValueError("epochs and batch_size must be >= 1")
    x_target = sigmoid(x)
    opt = init_optimizer(m, learning_rate=learning_rate)
    rng = np.random.default_rng(seed & 0x7FFFFFFFFFFFFFFF)
    history: list[LossBreakdown] = []
    for _ in range(epochs):
        perm = rng.permutation(n)
        sums = np.zeros(4)
        for start in range(0, n, batch_size):
            idx = perm[start:start + batch_size]
            _, _, bd = train_step(
                m, opt, x[idx], y[idx], f_domain[idx],
                lambda1, lambda2, lambda3, x_target=x_target[idx],
            )
            sums += len(idx) * np.array([bd.l_pred, bd.l_recon, bd.l_specific, bd.l_shared])
        means = sums / n
        history.append(
            combine_losses(*[float(v) for v in means], lambda1, lambda2, lambda3)
        )
    return m, history


def _objective(
    m: ModelParams,
    x: np.ndarray,
    y: np.ndarray,
    x_target: np.ndarray,
    f_domain: np.ndarray,
    lambda1: float,
    lambda2: float,
    lambda3: float,
    negate: bool,
) -> float:
    bd = losses(forward(m, x), y, x_target, f_domain, lambda1, lambda2, lambda3)
    return -bd.l_final if negate else bd.l_final


def grad_check(
    m: ModelParams,
    x: np.ndarray,
    y: np.ndarray,
    f_domain: np.ndarray,
    lambda1: float,
    lambda2: float,
    lambda3: float,
    eps: float = 1e-5,
    x_target: np.ndarray | None = None,
) -> dict[str, float]:
    """Max relative error of analytic vs central-difference gradients, per block.

    theta1 blocks are checked against L_final, the adversary block against
    -L_final (equivalently lambda3 * L_shared).
    """
    if not 0.0 < eps <= 1e-3:
        raise ValueError(f"eps must be in (0, 1e-3], got {eps}")
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    y = np.atleast_1d(np.asarray(y, dtype=np.float64))
    f_domain = np.atleast_2d(np.asarray(f_domain, dtype=np.float64))
    if x_target is None:
        x_target = sigmoid(x)
    fp = forward(m, x)
    analytic = theta1_gradients(m, fp, y, x_target, f_domain, lambda1, lambda2, lambda3)
    analytic.update(theta2_gradients(m, fp, f_domain, lambda3))
    result: dict[str, float] = {}
    for bname in THETA1_BLOCKS + THETA2_BLOCKS:
        negate = bname in THETA2_BLOCKS
        worst = 0.0
        for pname, arr in block_param_arrays(m.block(bname)).items():
            flat = arr.reshape(-1)
            a_flat = analytic[bname][pname].reshape(-1)
            for i in range(flat.shape[0]):
                orig = flat[i]
                flat[i] = orig + eps
                hi = _objective(m, x, y, x_target, f_domain, lambda1, lambda2, lambda3, negate)
                flat[i] = orig - eps
                lo = _objective(m, x, y, x_target, f_domain, lambda1, lambda2, lambda3, negate)
                flat[i] = orig
                fd = (hi - lo) / (2.0 * eps)
                denom = max(abs(a_flat[i]) + abs(fd), 1e-8)
                worst = max(worst, abs(a_flat[i] - fd) / denom)
        result[bname] = worst
    return result
