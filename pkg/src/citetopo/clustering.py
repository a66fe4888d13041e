"""
Standard, delta-corrected and degree-corrected clustering coefficients.

All three are computed on the undirected view of the graph:

* ``C = 2t / (k(k-1))`` with ``t`` the number of linked neighbour pairs,
* ``B = C * k / h`` with ``h`` the maximum degree,
* ``D = t / omega`` where ``omega = floor(sum_j min(k_j - 1, k - 1) / 2)``
  over the neighbours ``j`` bounds the number of neighbour pairs that can be
  linked given the neighbours' own degrees.

Every score is 0 for ``k <= 1``, and ``D`` is 0 when ``omega`` is.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .degree import pearson

VARIANTS = ("C", "B", "D")


@numba.njit(cache=True)
def _triangles(ptr, idx):
    n = len(ptr) - 1
    t = np.zeros(n, dtype=np.int64)
    for i in range(n):
        a0, a1 = ptr[i], ptr[i + 1]
        for p in range(a0, a1):
            j = idx[p]
            if j <= i:
                continue
            # common neighbours of i and j greater than j
            b0, b1 = ptr[j], ptr[j + 1]
            x, y = p + 1, b0
            while y < b1 and idx[y] <= j:
                y += 1
            while x < a1 and y < b1:
                u, v = idx[x], idx[y]
                if u == v:
                    t[i] += 1
                    t[j] += 1
                    t[u] += 1
                    x += 1
                    y += 1
                elif u < v:
                    x += 1
                else:
                    y += 1
    return t


def triangles(u):
    """Per-node count of linked neighbour pairs on an undirected view."""
    return _triangles(u.ptr, u.idx)


def omega_bound(u):
    """Degree-constrained maximum of linked neighbour pairs for every node."""
    k = u.degree
    src = np.repeat(np.arange(u.n), k)
    cap = np.minimum(k[u.idx] - 1, k[src] - 1)
    return np.bincount(src, weights=cap, minlength=u.n).astype(np.int64) // 2


@dataclass(frozen=True, eq=False)
class ClusteringScores:
    C: np.ndarray
    B: np.ndarray
    D: np.ndarray
    t: np.ndarray
    omega: np.ndarray
    k: np.ndarray
    h: int

    def __getitem__(self, variant):
        if variant not in VARIANTS:
            raise KeyError(variant)
        return getattr(self, variant)

    def means(self):
        return {v: float(self[v].mean()) for v in VARIANTS}


def clustering_all(g):
    """Compute ``C``, ``B`` and ``D`` for every node of ``g``."""
    u = g.undirected()
    k = u.degree.astype(np.int64)
    t = triangles(u)
    om = omega_bound(u)
    h = int(k.max())
    kf = k.astype(float)
    with np.errstate(divide="ignore", invalid="ignore"):
        C = np.where(k > 1, 2.0 * t / (kf * (kf - 1.0)), 0.0)
        D = np.where((k > 1) & (om > 0), t / np.maximum(om, 1), 0.0)
    B = C * kf / h
    return ClusteringScores(C=C, B=B, D=D, t=t, omega=om, k=k, h=h)


def clustering_mixing(g, scores, variant):
    """Correlation of a clustering score at link sources and targets."""
    x = scores[variant]
    e = g.edges()
    return pearson(x[e[:, 0]], x[e[:, 1]])


def clustering_profile(scores, variant="C"):
    """Mean score per occurring undirected degree; returns ``(degrees, means)``."""
    values, inv = np.unique(scores.k, return_inverse=True)
    return values, np.bincount(inv, weights=scores[variant]) / np.bincount(inv)
