"""Hot numeric kernels: numba-jitted by default, pure-numpy fallback.

Set the environment variable ``DUALDOMAIN_NUMBA=0`` (before import) to force
the fallback path; anything else keeps numba on when it is importable.
The two backends implement the same contracts; the sequential kernels
(`louvain_sweeps`) run the identical Python source either way, so results
are bit-identical across backends.
"""

from __future__ import annotations

import os

import numpy as np


def _numba_enabled() -> bool:
    if os.environ.get("DUALDOMAIN_NUMBA", "1") == "0":
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_ENABLED = _numba_enabled()


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"


def _louvain_sweeps_impl(indptr, indices, weights, strength, labels, comm_tot, m):
    """Greedy local-moving passes over a weighted undirected CSR graph.

    Nodes are visited in ascending index order; a node moves to the
    neighbouring community with the largest modularity gain, smallest
    community label on ties, and only when the gain strictly beats staying.
    Repeats full sweeps until one completes with no moves.  `labels` and
    `comm_tot` are updated in place; returns the total number of moves.
    """
    n = indptr.shape[0] - 1
    w_to = np.zeros(n, dtype=np.float64)
    touched = np.empty(n, dtype=np.int64)
    inv_m = 1.0 / m
    inv_2m2 = 1.0 / (2.0 * m * m)
    total_moves = 0
    moved = True
    while moved:
        moved = False
        for v in range(n):
            cv = labels[v]
            kv = strength[v]
            comm_tot[cv] -= kv
            ntouched = 0
            for j in range(indptr[v], indptr[v + 1]):
                u = indices[j]
                if u == v:
                    continue
                cu = labels[u]
                if w_to[cu] == 0.0:
                    touched[ntouched] = cu
                    ntouched += 1
                w_to[cu] += weights[j]
            best_c = cv
            best_gain = w_to[cv] * inv_m - comm_tot[cv] * kv * inv_2m2
            for t in range(ntouched):
                c = touched[t]
                if c == cv:
                    continue
                gain = w_to[c] * inv_m - comm_tot[c] * kv * inv_2m2
                if gain > best_gain or (gain == best_gain and best_c != cv and c < best_c):
                    best_gain = gain
                    best_c = c
            for t in range(ntouched):
                w_to[touched[t]] = 0.0
            w_to[cv] = 0.0
            comm_tot[best_c] += kv
            labels[v] = best_c
            if best_c != cv:
                moved = True
                total_moves += 1
    return total_moves


def _wiener_total_impl(indptr, indices):
    """Sum of shortest-path lengths over unordered node pairs (unweighted CSR).

    Returns -1 when the graph is disconnected.
    """
    n = indptr.shape[0] - 1
    dist = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    total = 0
    for s in range(n):
        for i in range(n):
            dist[i] = -1
        dist[s] = 0
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            for j in range(indptr[u], indptr[u + 1]):
                w = indices[j]
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue[tail] = w
                    tail += 1
        if tail < n:
            return -1
        for t in range(s + 1, n):
            total += dist[t]
    return total


def _nn_min_dists_impl(points):
    """Euclidean distance from each row to its nearest other row."""
    n, d = points.shape
    out = np.full(n, np.inf, dtype=np.float64)
    for i in range(n):
        for j in range(i + 1, n):
            acc = 0.0
            for k in range(d):
                diff = points[i, k] - points[j, k]
                acc += diff * diff
            dist = np.sqrt(acc)
            if dist < out[i]:
                out[i] = dist
            if dist < out[j]:
                out[j] = dist
    return out


def _wiener_total_numpy(indptr, indices):
    # Level-synchronous BFS from all sources at once via boolean matmul.
    n = indptr.shape[0] - 1
    adj = np.zeros((n, n), dtype=bool)
    rows = np.repeat(np.arange(n), np.diff(indptr))
    adj[rows, indices] = True
    visited = np.eye(n, dtype=bool)
    frontier = visited.copy()
    total = 0
    depth = 0
    while frontier.any():
        depth += 1
        frontier = (frontier @ adj) & ~visited
        total += depth * int(np.count_nonzero(frontier))
        visited |= frontier
    if not visited.all():
        return -1
    return total // 2


def _nn_min_dists_numpy(points):
    sq = np.einsum("ij,ij->i", points, points)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (points @ points.T)
    np.maximum(d2, 0.0, out=d2)
    np.fill_diagonal(d2, np.inf)
    return np.sqrt(d2.min(axis=1))


if NUMBA_ENABLED:
    from numba import njit

    louvain_sweeps = njit(cache=True)(_louvain_sweeps_impl)
    wiener_total = njit(cache=True)(_wiener_total_impl)
    nn_min_dists = njit(cache=True)(_nn_min_dists_impl)
else:
    louvain_sweeps = _louvain_sweeps_impl
    wiener_total = _wiener_total_numpy
    nn_min_dists = _nn_min_dists_numpy
