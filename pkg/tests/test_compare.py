import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy import stats

from citetopo.compare import (
    NEMENYI_Q, StatMatrix, cd_groups, compare, fisher_independence_test, friedman_statistic,
    friedman_test, nemenyi_cd, rank_datasets, significant_pairs, spearman,
    studentized_residuals,
)
from citetopo.errors import StatisticsError

MEAN_DEGREE = [9.11, 9.08, 7.90, 9.99, 7.90, 24.40]


def col(values, name="x"):
    return StatMatrix(np.asarray(values, float)[:, None], [f"d{i}" for i in range(len(values))], [name])


def loo_residual(values, i):
    """Leave-one-out residual computed with the statistics module directly."""
    others = [v for k, v in enumerate(values) if k != i]
    mu = stats.tmean(others)
    sd = stats.tstd(others)   # N - 2 denominator over the N - 1 others
    return (values[i] - mu) / (sd * math.sqrt(1 - 1 / len(values)))


def test_constant_column_zero():
    r = studentized_residuals(col([3.0] * 6))
    assert r.residuals.ravel().tolist() == [0.0] * 6
    assert r.pvalues.ravel().tolist() == [1.0] * 6
    assert r.constant.tolist() == [True]


def test_mean_degree_column():
    r = studentized_residuals(col(MEAN_DEGREE))
    x = r.residuals.ravel()
    assert x[-1] == pytest.approx(19.08, abs=0.01)
    assert x[-1] == pytest.approx(loo_residual(MEAN_DEGREE, 5), rel=1e-12)
    assert np.argmax(np.abs(x)) == 5
    assert r.pvalues[-1, 0] < 0.05
    assert r.pvalues[-1, 0] == pytest.approx(2 * stats.t.sf(abs(x[-1]), 4))
    for i in range(6):
        assert x[i] == pytest.approx(loo_residual(MEAN_DEGREE, i), rel=1e-12)


def test_single_outlier_column():
    r = studentized_residuals(col([0, 0, 0, 0, 0, 1]))
    x = r.residuals.ravel()
    # the remainder is constant, so the outlier residual saturates
    assert x[-1] == math.inf and r.pvalues[-1, 0] == 0.0
    assert (x[:-1] < 0).all()
    assert np.argmax(np.abs(x)) == 5


def test_residuals_need_four_datasets():
    with pytest.raises(StatisticsError):
        studentized_residuals(col([1, 2, 3]))


finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


@given(st.lists(finite, min_size=5, max_size=9, unique=True),
       st.floats(0.01, 100), st.floats(-1e3, 1e3))
@settings(max_examples=200, deadline=None)
def test_residual_location_scale_invariance(values, a, b):
    # affine rounding error is amplified by ptp / (leave-one-out sd); skip ill-conditioned columns
    v = np.asarray(values)
    loo_sd = min(np.std(np.delete(v, i), ddof=1) for i in range(len(v)))
    assume(loo_sd > 1e-3 * max(np.ptp(v), 1.0))
    base = studentized_residuals(col(values)).residuals
    moved = studentized_residuals(col([a * v + b for v in values])).residuals
    np.testing.assert_allclose(moved, base, rtol=1e-7, atol=1e-7)


@given(st.lists(st.floats(0.0, 50.0), min_size=4, max_size=10))
@settings(max_examples=200, deadline=None)
def test_rank_monotone_invariance(values):
    m = StatMatrix(np.array(values)[:, None], [f"d{i}" for i in range(len(values))], ["x"])
    res = studentized_residuals(m)
    res2 = studentized_residuals(m)
    res2.residuals = np.sign(res.residuals) * (np.abs(res.residuals) ** 3 + 2 * np.abs(res.residuals))
    assert np.array_equal(rank_datasets(res).ranks, rank_datasets(res2).ranks)


def _ranks_of(absvals):
    res = studentized_residuals(col([1, 2, 3, 4]))
    res.residuals = np.asarray(absvals, float)[:, None]
    return rank_datasets(res).ranks.ravel().tolist()


def test_rank_examples():
    assert _ranks_of([0.1, 0.2, 0.3]) == [1, 2, 3]
    assert _ranks_of([0.5, 0.5, 1.0]) == [1.5, 1.5, 3]
    assert _ranks_of([-0.3, 0.1, 0.2]) == [3, 1, 2]


def test_rank_rejects_undefined():
    res = studentized_residuals(col([1, 2, 3, 4]))
    res.residuals[0, 0] = math.nan
    with pytest.raises(StatisticsError):
        rank_datasets(res)


def _rank_matrix(cols):
    m = StatMatrix(np.column_stack(cols).astype(float), [f"d{i}" for i in range(len(cols[0]))],
                   [f"s{j}" for j in range(len(cols))])
    res = studentized_residuals(m)
    return rank_datasets(res)


def test_spearman_identity_and_reversal():
    rm = _rank_matrix([[1, 2, 3, 4, 5, 6]] * 2)
    rm.ranks = np.array([[1, 1, 6], [2, 2, 5], [3, 3, 4], [4, 4, 3], [5, 5, 2], [6, 6, 1]], float)
    rm.statistics = ["a", "b", "c"]
    assert spearman(rm, "a", "b") == pytest.approx(1.0)
    assert spearman(rm, "a", "c") == pytest.approx(-1.0)


def test_spearman_matches_brute_force():
    rng = np.random.default_rng(41)
    for _ in range(50):
        rm = _rank_matrix([[1, 2, 3, 4, 5, 6]] * 2)
        a, b = rng.permutation(6) + 1.0, rng.permutation(6) + 1.0
        rm.ranks = np.column_stack([a, b])
        rm.statistics = ["a", "b"]
        ma, mb = a.mean(), b.mean()
        want = ((a - ma) * (b - mb)).sum() / math.sqrt(((a - ma) ** 2).sum() * ((b - mb) ** 2).sum())
        assert spearman(rm, "a", "b") == pytest.approx(want, abs=1e-12)
        assert spearman(rm, "a", "b") == pytest.approx(stats.spearmanr(a, b).statistic, abs=1e-12)


def test_fisher():
    t = fisher_independence_test(0.0, 6)
    assert t.z == 0 and t.p == 1.0
    assert fisher_independence_test(0.5, 6).z == pytest.approx(math.sqrt(3) / 2 * math.log(3))
    assert fisher_independence_test(0.5, 6).z == pytest.approx(0.9514, abs=1e-4)
    s = fisher_independence_test(1.0, 6)
    assert s.saturated and s.p == 0.0


def test_friedman_examples():
    chi2, p = friedman_statistic([3.5] * 6, 10)
    assert chi2 == 0 and p == pytest.approx(1.0)
    chi2, p = friedman_statistic([2.2, 3.1, 3.1, 3.6, 4.0, 5.0], 10)
    assert chi2 == pytest.approx(12.914, abs=1e-3)
    assert chi2 > stats.chi2.ppf(0.95, 5) and p < 0.05
    chi2_2, _ = friedman_statistic([2.2, 3.1, 3.1, 3.6, 4.0, 5.0], 20)
    assert chi2_2 == pytest.approx(2 * chi2)


def test_friedman_matches_scipy_without_ties():
    rng = np.random.default_rng(42)
    R = np.array([rng.permutation(6) + 1 for _ in range(12)], float).T
    ours = friedman_statistic(R.mean(axis=1), R.shape[1])
    ref = stats.friedmanchisquare(*R)
    assert ours[0] == pytest.approx(ref.statistic)
    assert ours[1] == pytest.approx(ref.pvalue)


def test_friedman_relabel_invariant():
    mr = np.array([2.2, 3.1, 3.1, 3.6, 4.0, 5.0])
    assert friedman_statistic(mr[::-1], 10)[0] == pytest.approx(friedman_statistic(mr, 10)[0])


def test_nemenyi_examples():
    assert nemenyi_cd(6, 10, 0.05) == pytest.approx(2.385, abs=1e-3)
    assert nemenyi_cd(6, 10, 0.10) == pytest.approx(2.166, abs=1e-3)
    assert nemenyi_cd(6, 40, 0.05) == pytest.approx(nemenyi_cd(6, 10, 0.05) / 2)
    with pytest.raises(StatisticsError):
        nemenyi_cd(21, 10)


@pytest.mark.parametrize("alpha", [0.05, 0.10])
def test_nemenyi_table_against_studentized_range(alpha):
    for k, q in NEMENYI_Q[alpha].items():
        ref = stats.studentized_range.ppf(1 - alpha, k, np.inf) / math.sqrt(2)
        assert q == pytest.approx(ref, abs=2e-3)


def test_cd_groups_examples():
    ranks = [2.2, 3.1, 3.1, 4.0, 5.0, 3.6]
    cd = nemenyi_cd(6, 10)
    assert significant_pairs(ranks, cd) == [(0, 4)]
    groups = cd_groups(ranks, cd)
    assert all(not (0 in g and 4 in g) for g in groups)
    assert set().union(*map(set, groups)) == set(range(6))
    assert cd_groups([3.0] * 5, 1.0) == [[0, 1, 2, 3, 4]]
    assert cd_groups([1, 5], 3) == [[0], [1]]
    assert cd_groups([1, 3], 3) == [[0, 1]]


@given(st.lists(st.floats(1, 10), min_size=2, max_size=12), st.floats(0.1, 5))
@settings(max_examples=200, deadline=None)
def test_cd_groups_direction_independent(ranks, cd):
    asc = cd_groups(ranks, cd)
    r = np.asarray(ranks)
    # descending view: negate, group, map back
    desc = cd_groups(-r, cd)
    norm = lambda gs: sorted(tuple(sorted(g)) for g in gs)
    assert norm(asc) == norm(desc)
    for g in asc:
        assert r[g].max() - r[g].min() < cd


def test_compare_identical_profiles():
    m = StatMatrix(np.tile([1.0, 2.0, 3.0], (4, 1)), list("abcd"), ["x", "y", "z"])
    rep = compare(m)
    assert rep.friedman == 0.0
    assert rep.group_names() == [list("abcd")]
    assert rep.pairs == []


def test_compare_rejects_small_or_unknown():
    m = StatMatrix(np.ones((3, 2)), list("abc"), ["x", "y"])
    with pytest.raises(StatisticsError):
        compare(m)
    m = StatMatrix(np.ones((4, 2)), list("abcd"), ["x", "y"])
    with pytest.raises(StatisticsError):
        compare(m, ["x", "nope"])


def test_statmatrix_csv_roundtrip():
    m = StatMatrix(np.array([[1.5, 2.0], [3.25, -4.0]]), ["a", "b"], ["x", "y"])
    back = StatMatrix.from_csv(m.to_csv())
    assert back.datasets == m.datasets and back.statistics == m.statistics
    assert np.array_equal(back.values, m.values)


def test_statmatrix_rejects_missing():
    with pytest.raises(StatisticsError):
        StatMatrix(np.array([[1.0, math.nan]]), ["a"], ["x", "y"])
