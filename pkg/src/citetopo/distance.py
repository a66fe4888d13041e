"""
Hop plots and effective diameters.

The hop plot ``H(d)`` is the fraction of finally-reachable ordered node
pairs ``(u, v)``, ``u != v``, connected by a path of at most ``d`` hops.
Large graphs use the approximate neighbourhood function: every node keeps
``trials`` Flajolet-Martin bitmasks that are OR-ed along links hop by hop,
and ``|N(u, d)|`` is read off the masks.  Small graphs can be measured
exactly with breadth-first search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np
from scipy.sparse import csgraph

from .errors import ResourceError

FM_CORRECTION = 0.77351
MASK_BITS = 64
DEFAULT_EXACT_CAP = 10_000
DEFAULT_MEMORY_LIMIT = 2 * 1024**3


@dataclass(frozen=True, eq=False)
class HopPlot:
    """
    ``counts[r][d]`` is the (estimated) number of reachable ordered pairs
    within ``d`` hops in realization ``r``; ``d = 0`` is always 0.
    """

    counts: list
    directed: bool
    exact: bool = False

    @property
    def realizations(self):
        return len(self.counts)

    def fractions(self):
        """Per-realization curves normalized to end at 1, padded to equal length."""
        width = max(len(c) for c in self.counts)
        out = np.ones((len(self.counts), width))
        for r, c in enumerate(self.counts):
            c = np.asarray(c, dtype=float)
            total = c[-1]
            out[r, : len(c)] = c / total if total > 0 else 1.0
            out[r, 0] = 0.0
        return out

    @property
    def mean_curve(self):
        return self.fractions().mean(axis=0)

    @property
    def sem_curve(self):
        f = self.fractions()
        if len(f) < 2:
            return np.zeros(f.shape[1])
        return f.std(axis=0, ddof=1) / math.sqrt(len(f))

    def to_csv(self):
        lines = ["hop,mean_fraction,sem"]
        for d, (mu, se) in enumerate(zip(self.mean_curve, self.sem_curve)):
            lines.append(f"{d},{mu:.6g},{se:.6g}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class EffectiveDiameter:
    mean: float
    sem: float
    directed: bool
    values: tuple = ()


# --------------------------------------------------------------------------
#  Exact


def _adjacency_for(g, directed):
    if directed:
        return g.adjacency()
    u = g.undirected()
    from scipy import sparse

    return sparse.csr_matrix((np.ones(len(u.idx), dtype=np.int8), u.idx, u.ptr), shape=(u.n, u.n))


def exact_hop_plot(g, directed=True, cap=DEFAULT_EXACT_CAP, chunk=256):
    """
    Exact hop plot from breadth-first search out of every node.

    :raises ResourceError: if ``g.n`` exceeds ``cap``; use
        :func:`anf_hop_plot` for larger graphs.
    """
    if g.n > cap:
        raise ResourceError(
            f"exact hop plot limited to {cap} nodes (graph has {g.n}); use anf_hop_plot"
        )
    a = _adjacency_for(g, directed)
    hist = np.zeros(1, dtype=np.int64)
    for lo in range(0, g.n, chunk):
        dist = csgraph.shortest_path(
            a, method="D", directed=directed, unweighted=True,
            indices=np.arange(lo, min(lo + chunk, g.n)),
        )
        d = dist[np.isfinite(dist) & (dist > 0)].astype(np.int64)
        h = np.bincount(d)
        if len(h) > len(hist):
            hist = np.pad(hist, (0, len(h) - len(hist)))
        hist[: len(h)] += h
    return HopPlot(counts=[np.cumsum(hist).astype(float)], directed=directed, exact=True)


# --------------------------------------------------------------------------
#  Approximate neighbourhood function


@numba.njit(cache=True)
def _fm_total(masks):
    # sum over nodes of 2^(mean lowest-zero-bit index) / phi
    n, trials = masks.shape
    total = 0.0
    for u in range(n):
        s = 0
        for t in range(trials):
            m = masks[u, t]
            b = 0
            while b < 64 and (m >> np.uint64(b)) & np.uint64(1):
                b += 1
            s += b
        total += 2.0 ** (s / trials)
    return total / 0.77351


@numba.njit(cache=True)
def _anf_step(ptr, idx, cur, nxt):
    n, trials = cur.shape
    changed = False
    for u in range(n):
        for t in range(trials):
            nxt[u, t] = cur[u, t]
        for p in range(ptr[u], ptr[u + 1]):
            v = idx[p]
            for t in range(trials):
                nxt[u, t] |= cur[v, t]
        if not changed:
            for t in range(trials):
                if nxt[u, t] != cur[u, t]:
                    changed = True
                    break
    return changed


def _initial_masks(n, trials, rng):
    pos = np.minimum(rng.geometric(0.5, size=(n, trials)) - 1, MASK_BITS - 1)
    return np.left_shift(np.uint64(1), pos.astype(np.uint64))


def _anf_realization(ptr, idx, n, trials, rng, max_hops):
    cur = _initial_masks(n, trials, rng)
    nxt = np.empty_like(cur)
    base = _fm_total(cur)
    counts = [0.0]
    for _ in range(max_hops):
        if not _anf_step(ptr, idx, cur, nxt):
            break
        cur, nxt = nxt, cur
        counts.append(_fm_total(cur) - base)
    return np.maximum.accumulate(np.asarray(counts))


def anf_hop_plot(g, directed=True, realizations=100, trials=32, seed=0,
                 max_hops=None, memory_limit=DEFAULT_MEMORY_LIMIT):
    """
    Hop plot estimated with the approximate neighbourhood function.

    Each realization draws fresh FM bitmasks (``trials`` per node), then
    repeatedly sets ``mask(u) |= mask(v)`` for every link ``u -> v`` (or
    every undirected neighbour) until no mask changes.  The estimated
    neighbourhood size of a node is ``2^b / 0.77351`` with ``b`` the mean
    index of the lowest unset bit over its trials.  Pair counts exclude
    the node itself by subtracting the hop-0 estimate.

    Realization ``r`` uses the ``r``-th child of ``SeedSequence(seed)``, so a
    fixed seed reproduces the plot bit for bit.

    :raises ResourceError: if the bitmask arrays would exceed ``memory_limit``.
    """
    if realizations < 1 or trials < 1:
        raise ValueError("realizations and trials must be >= 1")
    need = 2 * g.n * trials * 8
    if need > memory_limit:
        raise ResourceError(
            f"ANF needs about {need / 2**20:.1f} MiB of bitmasks, limit is "
            f"{memory_limit / 2**20:.1f} MiB", required_bytes=need,
        )
    if directed:
        ptr, idx = g.out_ptr, g.out_idx
    else:
        u = g.undirected()
        ptr, idx = u.ptr, u.idx
    if max_hops is None:
        max_hops = g.n
    children = np.random.SeedSequence(seed).spawn(realizations)
    counts = [
        _anf_realization(ptr, idx, g.n, trials, np.random.default_rng(s), max_hops)
        for s in children
    ]
    return HopPlot(counts=counts, directed=directed, exact=False)


# --------------------------------------------------------------------------
#  Effective diameter


def interpolate_crossing(curve, quantile=0.9):
    """
    First hop at which a normalized hop-plot curve reaches ``quantile``,
    linearly interpolated between the bracketing integer hops.
    """
    curve = np.asarray(curve, dtype=float)
    above = np.flatnonzero(curve >= quantile)
    if len(above) == 0:
        return float(len(curve) - 1)
    d = int(above[0])
    if d == 0:
        return 0.0
    lo, hi = curve[d - 1], curve[d]
    if hi == lo:
        return float(d)
    return (d - 1) + (quantile - lo) / (hi - lo)


def effective_diameter(hp, quantile=0.9):
    """Mean and s.e.m. of the per-realization ``quantile`` crossings."""
    if not 0.0 < quantile < 1.0:
        raise ValueError("quantile must lie strictly between 0 and 1")
    vals = np.array([interpolate_crossing(c, quantile) for c in hp.fractions()])
    sem = float(vals.std(ddof=1) / math.sqrt(len(vals))) if len(vals) > 1 else 0.0
    return EffectiveDiameter(mean=float(vals.mean()), sem=sem, directed=hp.directed,
                             values=tuple(float(v) for v in vals))
