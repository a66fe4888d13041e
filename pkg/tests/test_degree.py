import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from citetopo.degree import (
    best_power_law, degree_distribution, degree_mixing_directed, degree_mixing_undirected,
    fit_power_law, mean_degree, neighbour_connectivity,
)
from citetopo.graph import graph_from_edges

from conftest import random_graphs


def star(n):
    return graph_from_edges([[0, i] for i in range(1, n)])


def test_power_law_formula():
    f = fit_power_law([20, 40, 80, 3, 5], kmin=10)
    assert f.tail_n == 3
    assert f.gamma == pytest.approx(1 + 3 / (6 * math.log(2)), abs=1e-12)
    assert f.gamma == pytest.approx(1.7213, abs=1e-4)


def test_power_law_degenerate_tail():
    f = fit_power_law([10, 10, 10, 2], 10)
    assert f.degenerate and math.isinf(f.gamma)
    assert not f.plausible


def test_power_law_empty_tail():
    with pytest.raises(ValueError):
        fit_power_law([1, 2, 3], 10)
    with pytest.raises(ValueError):
        fit_power_law([1, 2, 3], 0)


@given(st.lists(st.integers(1, 500), min_size=1, max_size=60), st.integers(2, 7))
@settings(max_examples=200, deadline=None)
def test_power_law_scale_invariant(sample, factor):
    kmin = 5
    if not any(x > kmin for x in sample):
        return
    a = fit_power_law(sample, kmin)
    b = fit_power_law([x * factor for x in sample], kmin * factor)
    assert a.gamma == pytest.approx(b.gamma, rel=1e-12)
    assert a.tail_n == b.tail_n


def test_power_law_continuous_recovery():
    rng = np.random.default_rng(7)
    x = 10.0 * (1.0 - rng.random(100_000)) ** (-1.0 / 1.5)
    assert 2.45 <= fit_power_law(x, 10).gamma <= 2.55


def test_power_law_discrete_matches_analytic_limit():
    # For an exact discrete power law p(k) ~ k^-2.5 on k >= 10 the estimator
    # converges to 1 + 1/E[ln(k/10)], computed here by direct summation.
    ks = np.arange(10, 10**7, dtype=float)
    p = ks**-2.5
    p /= p.sum()
    limit = 1 + 1 / (p * np.log(ks / 10)).sum()
    rng = np.random.default_rng(8)
    cdf = np.cumsum(p)
    sample = ks[np.minimum(np.searchsorted(cdf, rng.random(100_000)), len(ks) - 1)]
    assert fit_power_law(sample, 10).gamma == pytest.approx(limit, abs=0.02)
    assert limit == pytest.approx(2.62, abs=0.005)


def test_best_power_law_picks_smaller_ks():
    rng = np.random.default_rng(9)
    x = np.floor(10.0 * (1.0 - rng.random(20_000)) ** (-1.0 / 1.5)).astype(int)
    best, fits = best_power_law(np.concatenate([x, np.zeros(10, int)]))
    assert set(fits) == {10, 25}
    assert best.ks_distance == min(f.ks_distance for f in fits.values())


def test_ks_flags_non_power_law():
    rng = np.random.default_rng(10)
    x = rng.poisson(14, 50_000)
    best, _ = best_power_law(x)
    assert not best.plausible
    y = 10.0 * (1.0 - rng.random(5_000)) ** (-1.0 / 1.5)
    assert fit_power_law(y, 10).plausible


def test_degree_distribution_and_mean():
    g = star(5)
    dd = degree_distribution(g, "k")
    assert dd.degree.tolist() == [1, 4] and dd.count.tolist() == [4, 1]
    assert dd.n == g.n
    assert dd.mean == mean_degree(g) == 2 * 4 / 5


def test_neighbour_connectivity_star_and_triangle():
    d, knn = neighbour_connectivity(star(5), "k")
    assert dict(zip(d.tolist(), knn.tolist())) == {1: 4.0, 4: 1.0}
    tri = graph_from_edges([[0, 1], [1, 2], [2, 0]])
    d, knn = neighbour_connectivity(tri, "k")
    assert dict(zip(d.tolist(), knn.tolist())) == {2: 2.0}


@pytest.mark.parametrize("mode", ["k", "in", "out"])
def test_neighbour_connectivity_oracle(mode):
    for g in random_graphs(30, seed=11, n_max=50):
        deg = {"k": g.k, "in": g.k_in, "out": g.k_out}[mode]
        nb = {i: set() for i in range(g.n)}
        for a, b in g.edges().tolist():
            nb[a].add(b)
            nb[b].add(a)
        groups = {}
        for i in range(g.n):
            groups.setdefault(int(deg[i]), []).append(sum(deg[j] for j in nb[i]) / len(nb[i]))
        d, knn = neighbour_connectivity(g, mode)
        assert d.tolist() == sorted(groups)
        for dv, v in zip(d.tolist(), knn.tolist()):
            assert v == pytest.approx(sum(groups[dv]) / len(groups[dv]), rel=1e-12)
            assert deg.min() <= v <= deg.max()


def test_mixing_cycle_undefined():
    g = graph_from_edges([[0, 1], [1, 2], [2, 3], [3, 0]])
    for a in ("in", "out"):
        for b in ("in", "out"):
            assert math.isnan(degree_mixing_directed(g, a, b))


def test_undirected_mixing_star_and_complete():
    assert degree_mixing_undirected(star(5).undirected()) == pytest.approx(-1.0)
    k4 = graph_from_edges([[i, j] for i in range(4) for j in range(4) if i < j])
    assert math.isnan(degree_mixing_undirected(k4.undirected()))


def _textbook_pearson(x, y):
    n = len(x)
    mx, my = sum(x) / n, sum(y) / n
    cov = sum((a - mx) * (b - my) for a, b in zip(x, y))
    vx = sum((a - mx) ** 2 for a in x)
    vy = sum((b - my) ** 2 for b in y)
    if vx == 0 or vy == 0:
        return math.nan
    return cov / math.sqrt(vx * vy)


def test_directed_mixing_oracle():
    for g in random_graphs(40, seed=12, n_max=50):
        pairs = g.edges().tolist()
        for a in ("in", "out"):
            for b in ("in", "out"):
                da = {"in": g.k_in, "out": g.k_out}[a]
                db = {"in": g.k_in, "out": g.k_out}[b]
                want = _textbook_pearson([int(da[s]) for s, _ in pairs], [int(db[t]) for _, t in pairs])
                got = degree_mixing_directed(g, a, b)
                if math.isnan(want):
                    assert math.isnan(got)
                else:
                    assert got == pytest.approx(want, abs=1e-12)
                    assert -1 <= got <= 1


def test_undirected_mixing_relabel_invariant():
    rng = np.random.default_rng(13)
    for g in random_graphs(20, seed=13, n_max=40):
        e = g.edges()
        perm = rng.permutation(g.n) * 7 + 3
        h = graph_from_edges(perm[e][rng.permutation(len(e))])
        a = degree_mixing_undirected(g.undirected(), g.k)
        b = degree_mixing_undirected(h.undirected(), h.k)
        assert (math.isnan(a) and math.isnan(b)) or a == pytest.approx(b, abs=1e-12)
