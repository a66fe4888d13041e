"""
Degree distributions, power-law tail fits, neighbour connectivity and
degree mixing.

Degree modes are ``"k"`` (``k_in + k_out``), ``"in"`` and ``"out"``.
Undefined correlation coefficients (zero variance on either side) are
returned as ``nan``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

MODES = ("k", "in", "out")
KMIN_CANDIDATES = (10, 25)


def degree_vector(g, mode):
    if mode == "k":
        return g.k
    if mode == "in":
        return g.k_in
    if mode == "out":
        return g.k_out
    raise ValueError(f"unknown degree mode {mode!r}; expected one of {MODES}")


@dataclass(frozen=True)
class DegreeDistribution:
    degree: np.ndarray
    count: np.ndarray

    @property
    def n(self):
        return int(self.count.sum())

    @property
    def mean(self):
        return float((self.degree * self.count).sum() / self.count.sum())

    def pmf(self):
        return self.count / self.count.sum()


def degree_distribution(g, mode="k"):
    """Histogram of the occurring degree values."""
    d, c = np.unique(degree_vector(g, mode), return_counts=True)
    return DegreeDistribution(d, c)


def mean_degree(g):
    """``<k> = 2m/n``."""
    return 2.0 * g.m / g.n


# --------------------------------------------------------------------------
#  Power-law fits


@dataclass(frozen=True)
class PowerLawFit:
    kmin: int
    gamma: float
    tail_n: int
    ks_distance: float
    degenerate: bool = False

    @property
    def ks_critical(self):
        """Asymptotic Kolmogorov critical distance at the 5% level."""
        return stats.kstwobign.ppf(0.95) / math.sqrt(self.tail_n)

    @property
    def plausible(self):
        """``False`` when the KS distance rejects the fitted tail at 5%."""
        return (not self.degenerate) and self.ks_distance <= self.ks_critical


def fit_power_law(sample, kmin):
    """
    Maximum-likelihood exponent of a power-law tail ``P(k) ~ k^-gamma``.

    ``gamma = 1 + n_tail / sum(ln(k / kmin))`` over the sample values
    ``k >= kmin``.  The KS distance compares the empirical tail CCDF with
    ``(k / kmin) ** (1 - gamma)`` at every observed tail value.

    A tail whose values all equal ``kmin`` has an infinite exponent; it is
    returned with ``degenerate=True`` rather than raising.

    :raises ValueError: if ``kmin < 1`` or no value reaches ``kmin``.
    """
    if kmin < 1:
        raise ValueError("kmin must be >= 1")
    x = np.asarray(sample, dtype=float)
    tail = np.sort(x[x >= kmin])
    nt = len(tail)
    if nt == 0:
        raise ValueError(f"empty tail: no sample value >= kmin={kmin}")
    s = float(np.log(tail / kmin).sum())
    if s <= 0.0:
        return PowerLawFit(kmin=kmin, gamma=math.inf, tail_n=nt, ks_distance=1.0, degenerate=True)
    gamma = 1.0 + nt / s
    # empirical P(K >= v) at each distinct tail value v
    vals, first = np.unique(tail, return_index=True)
    emp_ge = 1.0 - first / nt
    emp_gt = np.append(emp_ge[1:], 0.0)
    fit = (vals / kmin) ** (1.0 - gamma)
    ks = float(max(np.abs(emp_ge - fit).max(), np.abs(emp_gt - fit).max()))
    return PowerLawFit(kmin=kmin, gamma=gamma, tail_n=nt, ks_distance=ks)


def best_power_law(sample, kmins=KMIN_CANDIDATES):
    """
    Fit every candidate ``kmin`` and keep the smallest KS distance.

    Returns ``(best, fits)`` where ``fits`` maps each usable ``kmin`` to its
    fit.  Zero degrees are excluded.  ``best`` is ``None`` when no candidate
    has a non-empty tail.
    """
    x = np.asarray(sample)
    x = x[x > 0]
    fits = {}
    for kmin in kmins:
        if (x >= kmin).any():
            fits[kmin] = fit_power_law(x, kmin)
    usable = [f for f in fits.values() if not f.degenerate]
    best = min(usable, key=lambda f: (f.ks_distance, f.kmin)) if usable else None
    return best, fits


# --------------------------------------------------------------------------
#  Neighbour connectivity


def neighbour_connectivity(g, mode="k"):
    """
    Mean neighbour degree as a function of node degree.

    For every node the same-mode degrees of its undirected neighbours are
    averaged; those per-node means are then averaged over all nodes sharing
    a degree value.  Returns ``(degrees, mean_neighbour_degree)``.
    """
    u = g.undirected()
    deg = degree_vector(g, mode).astype(float)
    kund = u.degree
    nbr_sum = np.add.reduceat(deg[u.idx], u.ptr[:-1]) if len(u.idx) else np.zeros(g.n)
    per_node = nbr_sum / kund
    values, inv = np.unique(degree_vector(g, mode), return_inverse=True)
    sums = np.bincount(inv, weights=per_node)
    counts = np.bincount(inv)
    return values, sums / counts


# --------------------------------------------------------------------------
#  Mixing


def pearson(x, y):
    """Pearson correlation using population moments; ``nan`` on zero variance."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 2:
        return math.nan
    dx = x - x.mean()
    dy = y - y.mean()
    sx = math.sqrt(float(np.dot(dx, dx)))
    sy = math.sqrt(float(np.dot(dy, dy)))
    scale = max(float(np.abs(x).max()), float(np.abs(y).max()), 1.0)
    if sx <= 1e-12 * scale * math.sqrt(len(x)) or sy <= 1e-12 * scale * math.sqrt(len(y)):
        return math.nan
    r = float(np.dot(dx, dy)) / (sx * sy)
    return min(1.0, max(-1.0, r))


def degree_mixing_directed(g, alpha, beta):
    """
    Correlation of ``alpha``-degree at link sources with ``beta``-degree at
    link targets, over all directed links.  ``alpha, beta`` in ``{"in", "out"}``.
    """
    if alpha not in ("in", "out") or beta not in ("in", "out"):
        raise ValueError("alpha and beta must be 'in' or 'out'")
    e = g.edges()
    return pearson(degree_vector(g, alpha)[e[:, 0]], degree_vector(g, beta)[e[:, 1]])


def degree_mixing_undirected(u, degree=None):
    """
    Newman's degree assortativity on an undirected view.

    Every undirected edge enters in both orientations.  ``degree`` defaults
    to the view's own degrees; pass ``g.k`` to correlate the directed total
    degree ``k_in + k_out`` instead.
    """
    d = u.degree if degree is None else np.asarray(degree)
    src = np.repeat(np.arange(u.n), u.degree)
    return pearson(d[src], d[u.idx])


def all_degree_mixing(g):
    """The five mixing coefficients keyed ``r, r_in_in, r_in_out, r_out_in, r_out_out``."""
    out = {"r": degree_mixing_undirected(g.undirected(), g.k)}
    for a in ("in", "out"):
        for b in ("in", "out"):
            out[f"r_{a}_{b}"] = degree_mixing_directed(g, a, b)
    return out
