"""Feature standardization, input assembly, and CSV matrix io."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Standardizer:
    """Per-dimension (x - mean) / std, fitted on the training pool only.

    Population standard deviation; constant dimensions keep std 1 so they
    pass through as zeros.
    """

    mean: np.ndarray
    std: np.ndarray

    @classmethod
    def fit(cls, matrix: np.ndarray) -> "Standardizer":
        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] < 1:
            raise ValueError("standardizer needs a nonempty 2-D matrix")
        mean = matrix.mean(axis=0)
        std = matrix.std(axis=0)
        std = np.where(std == 0.0, 1.0, std)
        return cls(mean=mean, std=std)

    def apply(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape[-1] != self.mean.shape[0]:
            raise ValueError(
                f"dimension mismatch: standardizer fitted on {self.mean.shape[0]} dims, got {x.shape[-1]}"
            )
        return (x - self.mean) / self.std


def assemble_input(f_text: np.ndarray, f_network: np.ndarray) -> np.ndarray:
    """Concatenate the text part (first) and the standardized network part."""
    f_text = np.asarray(f_text, dtype=np.float64)
    f_network = np.asarray(f_network, dtype=np.float64)
    out = np.concatenate([f_text, f_network], axis=-1)
    if not np.all(np.isfinite(out)):
        raise ValueError("input vector has non-finite entries")
    return out


def write_matrix_csv(path, ids: list[str], matrix: np.ndarray, columns: list[str]) -> None:
    matrix = np.asarray(matrix)
    if matrix.shape != (len(ids), len(columns)):
        raise ValueError(f"matrix shape {matrix.shape} does not match ids/columns")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", *columns])
        for rid, row in zip(ids, matrix):
            writer.writerow([rid, *[repr(float(v)) for v in row]])


def read_matrix_csv(path) -> tuple[list[str], np.ndarray, list[str]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[0] != "id":
            raise ValueError(f"{path}: expected a header starting with 'id'")
        ids: list[str] = []
        rows: list[list[float]] = []
        for row in reader:
            ids.append(row[0])
            rows.append([float(x) for x in row[1:]])
    matrix = np.array(rows, dtype=np.float64) if rows else np.zeros((0, len(header) - 1))
    return ids, matrix, header[1:]
