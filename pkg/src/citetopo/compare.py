"""
Nonparametric comparison of networks over many statistics.

The pipeline on an ``N x S`` matrix (datasets x statistics):

1. externally studentized residuals per cell, with two-tailed t p-values
   (``N - 2`` degrees of freedom);
2. per-statistic ranks of ``|residual|`` (rank 1 = most consistent);
3. pairwise Spearman correlation of the rank vectors with a Fisher z-test
   for independence;
4. Friedman test on the mean ranks, then the Nemenyi critical difference
   and the groups of datasets it cannot tell apart.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .errors import StatisticsError

# Nemenyi critical values q_alpha (studentized range / sqrt 2, infinite df),
# keyed by number of compared datasets.  2..10 as tabulated by Demsar (2006);
# 11..20 from the studentized range distribution.
NEMENYI_Q = {
    0.05: {2: 1.960, 3: 2.343, 4: 2.569, 5: 2.728, 6: 2.850, 7: 2.949, 8: 3.031,
           9: 3.102, 10: 3.164, 11: 3.219, 12: 3.268, 13: 3.313, 14: 3.354,
           15: 3.391, 16: 3.426, 17: 3.458, 18: 3.489, 19: 3.517, 20: 3.544},
    0.10: {2: 1.645, 3: 2.052, 4: 2.291, 5: 2.459, 6: 2.589, 7: 2.693, 8: 2.780,
           9: 2.855, 10: 2.920, 11: 2.978, 12: 3.030, 13: 3.077, 14: 3.120,
           15: 3.159, 16: 3.196, 17: 3.230, 18: 3.261, 19: 3.291, 20: 3.319},
}

_EPS = 1e-12


@dataclass
class StatMatrix:
    values: np.ndarray
    datasets: list
    statistics: list

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.datasets = list(self.datasets)
        self.statistics = list(self.statistics)
        if self.values.shape != (len(self.datasets), len(self.statistics)):
            raise StatisticsError(
                f"matrix shape {self.values.shape} does not match "
                f"{len(self.datasets)} datasets x {len(self.statistics)} statistics"
            )
        if not np.isfinite(self.values).all():
            bad = [(self.datasets[i], self.statistics[j])
                   for i, j in zip(*np.nonzero(~np.isfinite(self.values)))]
            raise StatisticsError(f"missing or undefined cells: {bad}")

    @property
    def N(self):
        return len(self.datasets)

    @property
    def S(self):
        return len(self.statistics)

    def select(self, statistics=None, datasets=None):
        """Sub-matrix restricted to the named statistics and/or datasets."""
        ci = range(self.S) if statistics is None else [self._col(s) for s in statistics]
        ri = range(self.N) if datasets is None else [self._row(d) for d in datasets]
        ci, ri = list(ci), list(ri)
        return StatMatrix(self.values[np.ix_(ri, ci)],
                          [self.datasets[i] for i in ri], [self.statistics[j] for j in ci])

    def _col(self, name):
        try:
            return self.statistics.index(name)
        except ValueError:
            raise StatisticsError(f"unknown statistic {name!r}") from None

    def _row(self, name):
        try:
            return self.datasets.index(name)
        except ValueError:
            raise StatisticsError(f"unknown dataset {name!r}") from None

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["dataset", *self.statistics])
        for name, row in zip(self.datasets, self.values):
            w.writerow([name, *(f"{v:.6g}" for v in row)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text):
        rows = [r for r in csv.reader(io.StringIO(text)) if r]
        header, body = rows[0], rows[1:]
        try:
            values = [[float(v) for v in r[1:]] for r in body]
        except ValueError as exc:
            raise StatisticsError(f"non-numeric cell in statistic matrix: {exc}") from None
        return cls(np.array(values).reshape(len(body), len(header) - 1),
                   [r[0] for r in body], header[1:])


# --------------------------------------------------------------------------
#  Residuals


@dataclass
class ResidualMatrix:
    residuals: np.ndarray
    pvalues: np.ndarray
    loo_mean: np.ndarray
    loo_sd: np.ndarray
    datasets: list
    statistics: list
    constant: np.ndarray = field(default=None)

    @property
    def N(self):
        return len(self.datasets)

    def significant(self, alpha=0.05):
        """``(dataset, statistic, residual, p)`` for every cell with ``p < alpha``."""
        out = []
        for i, j in zip(*np.nonzero(self.pvalues < alpha)):
            out.append((self.datasets[i], self.statistics[j],
                        float(self.residuals[i, j]), float(self.pvalues[i, j])))
        return sorted(out, key=lambda c: c[3])


def studentized_residuals(x):
    """
    Externally studentized residual of every cell.

    ``(x_ij - mu_ij) / (sd_ij * sqrt(1 - 1/N))`` where ``mu_ij`` and
    ``sd_ij`` (``N - 2`` denominator) are taken over the other ``N - 1``
    datasets.  A cell equal to the leave-one-out mean gets 0 even when
    ``sd_ij`` vanishes; a cell differing from a constant remainder gets
    ``+-inf`` and ``p = 0``.
    """
    X = x.values
    N = x.N
    if N < 4:
        raise StatisticsError(f"studentized residuals need at least 4 datasets, got {N}")
    mu = np.empty_like(X)
    ss = np.empty_like(X)
    # exactly rounded sums: equal cells see the same remainder, hence equal residuals
    for i in range(N):
        others = np.delete(X, i, axis=0)
        for j in range(X.shape[1]):
            m = math.fsum(others[:, j]) / (N - 1)
            mu[i, j] = m
            ss[i, j] = math.fsum((others[:, j] - m) ** 2)
    sd = np.sqrt(ss / (N - 2))
    scale = np.maximum(np.abs(X).max(axis=0), 1.0)[None, :]
    num = X - mu
    num = np.where(np.abs(num) <= _EPS * scale, 0.0, num)
    zero_sd = sd <= _EPS * scale
    with np.errstate(divide="ignore", invalid="ignore"):
        res = num / (sd * math.sqrt(1.0 - 1.0 / N))
        res = np.where(zero_sd, np.where(num == 0, 0.0, np.sign(num) * np.inf), res)
    p = 2.0 * stats.t.sf(np.abs(res), N - 2)
    constant = np.ptp(X, axis=0) <= _EPS * scale[0]
    return ResidualMatrix(res, p, mu, sd, list(x.datasets), list(x.statistics), constant)


# --------------------------------------------------------------------------
#  Ranks and independence


@dataclass
class RankMatrix:
    ranks: np.ndarray
    datasets: list
    statistics: list

    @property
    def mean_ranks(self):
        return self.ranks.mean(axis=1)

    @property
    def N(self):
        return self.ranks.shape[0]

    @property
    def S(self):
        return self.ranks.shape[1]


def rank_datasets(res, statistics=None):
    """
    Rank datasets per statistic by ascending ``|residual|``; ties share the
    average of their rank positions.

    :raises StatisticsError: if a selected statistic has an undefined cell.
    """
    cols = range(len(res.statistics)) if statistics is None else [
        res.statistics.index(s) for s in statistics]
    cols = list(cols)
    R = np.abs(res.residuals[:, cols])
    if np.isnan(R).any():
        bad = sorted({res.statistics[cols[j]] for j in np.nonzero(np.isnan(R))[1]})
        raise StatisticsError(f"undefined residuals in statistics {bad}; drop them first")
    ranks = np.column_stack([stats.rankdata(R[:, j], method="average") for j in range(len(cols))])
    return RankMatrix(ranks, list(res.datasets), [res.statistics[j] for j in cols])


def spearman(ranks, stat_a, stat_b):
    """Pearson correlation of two rank columns; ``nan`` if either is constant."""
    a = ranks.ranks[:, ranks.statistics.index(stat_a)]
    b = ranks.ranks[:, ranks.statistics.index(stat_b)]
    if np.ptp(a) == 0 or np.ptp(b) == 0:
        return math.nan
    return float(np.clip(np.corrcoef(a, b)[0, 1], -1.0, 1.0))


@dataclass(frozen=True)
class FisherTest:
    z: float
    p: float
    saturated: bool = False


def fisher_independence_test(rho, N):
    """
    Two-tailed z-test of ``rho = 0`` using
    ``z = sqrt(N - 3) / 2 * ln((1 + rho) / (1 - rho))``.

    ``|rho| = 1`` yields ``z = +-inf``, ``p = 0`` and ``saturated=True``.
    """
    if N < 4:
        raise StatisticsError("Fisher transformation needs N >= 4")
    if math.isnan(rho):
        return FisherTest(math.nan, math.nan)
    if abs(rho) >= 1.0:
        return FisherTest(math.copysign(math.inf, rho), 0.0, saturated=True)
    z = math.sqrt(N - 3) / 2.0 * math.log((1.0 + rho) / (1.0 - rho))
    return FisherTest(z, float(2.0 * stats.norm.sf(abs(z))))


def independence_matrix(ranks):
    """Pairwise Spearman ``rho`` and Fisher p-value matrices over all statistics."""
    S = ranks.S
    rho = np.eye(S)
    p = np.zeros((S, S))
    for a, b in itertools.combinations(range(S), 2):
        r = spearman(ranks, ranks.statistics[a], ranks.statistics[b])
        t = fisher_independence_test(r, ranks.N)
        rho[a, b] = rho[b, a] = r
        p[a, b] = p[b, a] = t.p
    return rho, p


# --------------------------------------------------------------------------
#  Friedman / Nemenyi


def friedman_statistic(mean_ranks, S):
    """``12S / (N(N+1)) * (sum R_i^2 - N(N+1)^2 / 4)`` and its chi^2 (N-1) p-value."""
    R = np.asarray(mean_ranks, dtype=float)
    N = len(R)
    if N < 2 or S < 1:
        raise StatisticsError("Friedman test needs N >= 2 datasets and S >= 1 statistics")
    chi2 = 12.0 * S / (N * (N + 1)) * (float((R**2).sum()) - N * (N + 1) ** 2 / 4.0)
    chi2 = max(chi2, 0.0)
    return chi2, float(stats.chi2.sf(chi2, N - 1))


def friedman_test(ranks):
    if ranks.S < 2:
        raise StatisticsError("Friedman test needs at least 2 statistics")
    return friedman_statistic(ranks.mean_ranks, ranks.S)


def nemenyi_q(N, alpha=0.05):
    try:
        return NEMENYI_Q[round(alpha, 2)][N]
    except KeyError:
        raise StatisticsError(
            f"no Nemenyi critical value for N={N}, alpha={alpha} "
            "(supported: N in 2..20, alpha in {0.05, 0.10})") from None


def nemenyi_cd(N, S, alpha=0.05):
    """Critical difference ``q_alpha * sqrt(N(N+1) / (6S))`` in mean-rank units."""
    if S < 1:
        raise StatisticsError("S must be >= 1")
    return nemenyi_q(N, alpha) * math.sqrt(N * (N + 1) / (6.0 * S))


def cd_groups(mean_ranks, cd):
    """
    Maximal runs of rank-sorted datasets whose mean ranks span less than
    ``cd``.  Returns index lists, each sorted by mean rank; a dataset that
    fits in no run with another forms a singleton group.
    """
    r = np.asarray(mean_ranks, dtype=float)
    order = np.lexsort((np.arange(len(r)), r))
    runs = []
    for a in range(len(order)):
        b = a
        while b + 1 < len(order) and r[order[b + 1]] - r[order[a]] < cd:
            b += 1
        if not runs or b > runs[-1][1]:
            runs.append((a, b))
    return [[int(i) for i in order[a:b + 1]] for a, b in runs]


def significant_pairs(mean_ranks, cd):
    """Index pairs ``(i, j)``, ``i < j``, whose mean ranks differ by more than ``cd``."""
    r = np.asarray(mean_ranks, dtype=float)
    return [(i, j) for i, j in itertools.combinations(range(len(r)), 2) if abs(r[i] - r[j]) > cd]


# --------------------------------------------------------------------------
#  Full pipeline


@dataclass
class ComparisonReport:
    matrix: StatMatrix
    residuals: ResidualMatrix
    ranks: RankMatrix
    rho: np.ndarray
    independence_p: np.ndarray
    friedman: float
    friedman_p: float
    alpha: float
    cd: float
    groups: list
    pairs: list

    @property
    def datasets(self):
        return self.ranks.datasets

    @property
    def rejected(self):
        return self.friedman_p < self.alpha

    @property
    def mean_ranks(self):
        return dict(zip(self.ranks.datasets, self.ranks.mean_ranks.tolist()))

    def group_names(self):
        return [[self.datasets[i] for i in g] for g in self.groups]

    def pair_names(self):
        return [(self.datasets[i], self.datasets[j]) for i, j in self.pairs]

    def to_dict(self):
        def num(v):
            v = float(v)
            if math.isnan(v):
                return None
            if math.isinf(v):
                return "inf" if v > 0 else "-inf"
            return float(f"{v:.6g}")

        ds, st = self.residuals.datasets, self.residuals.statistics
        sel = self.ranks.statistics
        return {
            "schema_version": 1,
            "datasets": ds,
            "statistics": st,
            "selected_statistics": sel,
            "alpha": self.alpha,
            "residuals": {d: {s: num(self.residuals.residuals[i, j]) for j, s in enumerate(st)}
                          for i, d in enumerate(ds)},
            "pvalues": {d: {s: num(self.residuals.pvalues[i, j]) for j, s in enumerate(st)}
                        for i, d in enumerate(ds)},
            "ranks": {d: {s: num(self.ranks.ranks[i, j]) for j, s in enumerate(sel)}
                      for i, d in enumerate(self.ranks.datasets)},
            "mean_ranks": {d: num(v) for d, v in self.mean_ranks.items()},
            "independence": {
                "spearman": [[num(v) for v in row] for row in self.rho],
                "fisher_p": [[num(v) for v in row] for row in self.independence_p],
            },
            "friedman": {"statistic": num(self.friedman), "p": num(self.friedman_p),
                         "df": len(ds) - 1, "rejected": bool(self.rejected)},
            "nemenyi": {"cd": num(self.cd), "q": nemenyi_q(len(ds), self.alpha),
                        "groups": self.group_names(),
                        "significant_pairs": [list(p) for p in self.pair_names()]},
        }

    def residual_csv(self):
        """Long-format table: dataset, statistic, residual, p, rank."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["dataset", "statistic", "residual", "p", "rank"])
        sel = self.ranks.statistics
        for i, d in enumerate(self.residuals.datasets):
            for j, s in enumerate(self.residuals.statistics):
                rank = f"{self.ranks.ranks[i, sel.index(s)]:.6g}" if s in sel else ""
                w.writerow([d, s, f"{self.residuals.residuals[i, j]:.6g}",
                            f"{self.residuals.pvalues[i, j]:.6g}", rank])
        return buf.getvalue()


def compare(matrix, statistics=None, alpha=0.05):
    """
    Run the whole comparison on ``matrix``.  Residuals are reported for all
    statistics; ranking, independence and the rank tests use ``statistics``
    (default: all).
    """
    if matrix.N < 4:
        raise StatisticsError(f"comparison needs at least 4 datasets, got {matrix.N}")
    if statistics is not None:
        missing = [s for s in statistics if s not in matrix.statistics]
        if missing:
            raise StatisticsError(f"statistics not available in all profiles: {missing}")
    res = studentized_residuals(matrix)
    ranks = rank_datasets(res, statistics)
    rho, p = independence_matrix(ranks)
    chi2, fp = friedman_test(ranks)
    cd = nemenyi_cd(ranks.N, ranks.S, alpha)
    mr = ranks.mean_ranks
    return ComparisonReport(matrix, res, ranks, rho, p, chi2, fp, alpha, cd,
                            cd_groups(mr, cd), significant_pairs(mr, cd))
