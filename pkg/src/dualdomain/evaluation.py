"""Prediction and per-domain classification metrics (positive class = fake)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelParams, forward

THRESHOLD = 0.5


def predict(m: ModelParams, x: np.ndarray) -> np.ndarray:
    """Fake-news probability per input row."""
    return forward(m, x).y_hat


def classify(m: ModelParams, x: np.ndarray, threshold: float = THRESHOLD) -> np.ndarray:
    return (predict(m, x) >= threshold).astype(np.int64)


@dataclass(frozen=True)
class GroupMetrics:
    accuracy: float
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def support(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


def metrics_from_counts(tp: int, fp: int, fn: int, tn: int) -> GroupMetrics:
    total = tp + fp + fn + tn
    precision = tp / (tp + fp) if tp + fp > 0 else 0.0
    recall = tp / (tp + fn) if tp + fn > 0 else 0.0
    f1 = 2.0 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return GroupMetrics(
        accuracy=(tp + tn) / total if total else 0.0,
        precision=precision,
        recall=recall,
        f1=f1,
        tp=tp,
        fp=fp,
        fn=fn,
        tn=tn,
    )


def _group_metrics(y_true: np.ndarray, y_pred: np.ndarray) -> GroupMetrics:
    tp = int(np.sum((y_pred == 1) & (y_true == 1)))
    fp = int(np.sum((y_pred == 1) & (y_true == 0)))
    fn = int(np.sum((y_pred == 0) & (y_true == 1)))
    tn = int(np.sum((y_pred == 0) & (y_true == 0)))
    return metrics_from_counts(tp, fp, fn, tn)


@dataclass(frozen=True)
class EvalReport:
    overall: GroupMetrics
    per_domain: dict[str, GroupMetrics]


def evaluate(
    m: ModelParams,
    x: np.ndarray,
    y: np.ndarray,
    domain_tags: list[str | None],
    threshold: float = THRESHOLD,
) -> EvalReport:
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if x.shape[0] == 0:
        raise ValueError("empty evaluation set")
    y = np.asarray(y)
    if np.any(y == None) or not set(np.unique(y)) <= {0, 1}:  # noqa: E711
        raise ValueError("every evaluation record needs a 0/1 label")
    y = y.astype(np.int64)
    y_pred = classify(m, x, threshold)
    per_domain: dict[str, GroupMetrics] = {}
    tags = np.array(["" if t is None else t for t in domain_tags])
    for tag in sorted(set(tags)):
        mask = tags == tag
        per_domain[tag] = _group_metrics(y[mask], y_pred[mask])
    return EvalReport(overall=_group_metrics(y, y_pred), per_domain=per_domain)


def nearest_centroid_accuracy(latents: np.ndarray, tags: list[str]) -> float:
    """Fit one centroid per tag and score 1-NN-to-centroid accuracy in place.

    The probe for how much domain information a latent space retains."""
    latents = np.asarray(latents, dtype=np.float64)
    names = sorted(set(tags))
    if len(names) < 2:
        raise ValueError("need at least two distinct tags to probe")
    tag_arr = np.array(tags)
    centroids = np.stack([latents[tag_arr == name].mean(axis=0) for name in names])
    d2 = (
        np.square(latents).sum(axis=1)[:, None]
        - 2.0 * latents @ centroids.T
        + np.square(centroids).sum(axis=1)[None, :]
    )
    predicted = np.argmin(d2, axis=1)
    truth = np.array([names.index(t) for t in tags])
    return float(np.mean(predicted == truth))
