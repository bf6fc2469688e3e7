"""Shared regression and testing machinery, plus the estimator benchmark.

Everything here is estimator-agnostic: log-log regression with optional
weights, a one-sample mean test, one-way ANOVA, and a seeded Monte Carlo
harness that races the DFA and wavelet estimators over synthetic FGN paths.
"""

from __future__ import annotations

import concurrent.futures
import io
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import DegenerateDataError, ParameterError


@dataclass(frozen=True)
class RegressionFit:
    """Least-squares line fit in log-log coordinates."""

    slope: float
    intercept: float
    stderr_slope: float
    residuals: np.ndarray
    rss: float
    weights: np.ndarray | None = None

    def fitted(self, log_x: np.ndarray) -> np.ndarray:
        return self.intercept + self.slope * np.asarray(log_x)


@dataclass(frozen=True)
class GofResult:
    """Chi-squared goodness-of-fit outcome for a fitted scale spectrum."""

    statistic: float
    dof: int
    p_value: float
    level: float

    @property
    def accepted(self) -> bool:
        return self.p_value >= self.level


@dataclass(frozen=True)
class FractalEstimate:
    """Estimated fractality exponent with its regression diagnostics.

    ``slope`` is the raw log-log slope; ``h_hat`` is the exponent after the
    method's slope-to-H mapping.  ``stderr`` and ``ci_halfwidth`` (95%) are
    quoted on the H scale.
    """

    h_hat: float
    slope: float
    intercept: float
    stderr: float
    ci_halfwidth: float
    method: str
    gof: GofResult | None = None


def loglog_fit(x, y, weights=None) -> RegressionFit:
    """Least-squares fit of log y on log x, optionally weighted.

    Weights are interpreted as inverse-variance weights up to a common
    factor; only their ratios matter.  Requires at least 3 points and
    strictly positive data.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.size != y.size or x.size < 3:
        raise ParameterError("need at least 3 (x, y) pairs of equal length")
    if np.any(x <= 0) or np.any(y <= 0):
        raise ParameterError("log-log regression requires strictly positive data")
    lx = np.log(x)
    ly = np.log(y)
    if weights is None:
        w = np.ones_like(lx)
    else:
        w = np.asarray(weights, dtype=np.float64)
        if w.size != lx.size or np.any(w <= 0):
            raise ParameterError("weights must be positive and match the data length")

    wsum = w.sum()
    xbar = (w * lx).sum() / wsum
    ybar = (w * ly).sum() / wsum
    sxx = (w * (lx - xbar) ** 2).sum()
    if sxx <= 0:
        raise ParameterError("x values are all equal; slope is undefined")
    slope = (w * (lx - xbar) * (ly - ybar)).sum() / sxx
    intercept = ybar - slope * xbar
    residuals = ly - (intercept + slope * lx)
    rss = float((w * residuals**2).sum())
    dof = lx.size - 2
    sigma2 = rss / dof if dof > 0 else 0.0
    stderr = float(np.sqrt(sigma2 / sxx))
    return RegressionFit(
        slope=float(slope), intercept=float(intercept), stderr_slope=stderr,
        residuals=residuals, rss=rss,
        weights=None if weights is None else w,
    )


def mean_test(sample, mu0: float) -> float:
    """Two-sided one-sample t-test p-value for H0: mean == mu0.

    A zero-variance sample is degenerate: p = 1 when it sits exactly at mu0,
    else p = 0.
    """
    x = np.asarray(sample, dtype=np.float64)
    if x.size < 2:
        raise ParameterError("need at least 2 observations")
    s = x.std(ddof=1)
    m = x.mean()
    if s == 0.0:
        return 1.0 if m == mu0 else 0.0
    t = (m - mu0) / (s / np.sqrt(x.size))
    return float(2.0 * stats.t.sf(abs(t), x.size - 1))


@dataclass(frozen=True)
class SampleComparison:
    """One-way ANOVA outcome across labelled groups."""

    labels: tuple
    f_stat: float
    p_value: float
    group_sizes: tuple


def anova_f(groups, labels=None) -> SampleComparison:
    """One-way ANOVA F statistic and p-value across 2+ groups.

    Degenerate within-group variance is handled by an exact-equality
    shortcut: equal group means give F = 0 / p = 1, unequal give
    F = inf / p = 0.
    """
    arrays = [np.asarray(g, dtype=np.float64) for g in groups]
    if len(arrays) < 2 or any(a.size < 2 for a in arrays):
        raise ParameterError("need at least 2 groups with at least 2 values each")
    if labels is None:
        labels = tuple(f"group{i + 1}" for i in range(len(arrays)))
    sizes = tuple(a.size for a in arrays)
    n = sum(sizes)
    grand = np.concatenate(arrays).mean()
    ssb = sum(a.size * (a.mean() - grand) ** 2 for a in arrays)
    ssw = sum(((a - a.mean()) ** 2).sum() for a in arrays)
    dfb = len(arrays) - 1
    dfw = n - len(arrays)
    if ssw == 0.0:
        if ssb == 0.0:
            return SampleComparison(tuple(labels), 0.0, 1.0, sizes)
        return SampleComparison(tuple(labels), float("inf"), 0.0, sizes)
    f = (ssb / dfb) / (ssw / dfw)
    p = float(stats.f.sf(f, dfb, dfw))
    return SampleComparison(tuple(labels), float(f), p, sizes)


# ---------------------------------------------------------------------------
# Monte Carlo benchmark of the two H estimators on synthetic FGN
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BenchmarkRow:
    h_true: float
    bias_dfa: float
    bias_wav: float
    pval_dfa: float
    pval_wav: float
    rmse_dfa: float
    rmse_wav: float
    failed_dfa: int = 0
    failed_wav: int = 0


@dataclass(frozen=True)
class MonteCarloReport:
    """Per-H bias / p-value / root-MSE table for both estimators."""

    rows: tuple
    n: int
    reps: int
    seed: int

    def to_text(self) -> str:
        out = io.StringIO()
        out.write(f"# FGN estimator benchmark: {self.reps} replications, N={self.n}, seed={self.seed}\n")
        out.write(f"{'H':>5} {'|bias|_dfa':>11} {'|bias|_wav':>11} "
                  f"{'p-val_dfa':>10} {'p-val_wav':>10} {'rmse_dfa':>9} {'rmse_wav':>9} {'failed':>7}\n")
        for r in self.rows:
            out.write(
                f"{r.h_true:>5.2f} {abs(r.bias_dfa):>11.4f} {abs(r.bias_wav):>11.4f} "
                f"{r.pval_dfa:>10.4f} {r.pval_wav:>10.4f} "
                f"{r.rmse_dfa:>9.4f} {r.rmse_wav:>9.4f} {r.failed_dfa + r.failed_wav:>7d}\n"
            )
        return out.getvalue()

    def to_csv(self) -> str:
        lines = ["h_true,abs_bias_dfa,abs_bias_wav,pval_dfa,pval_wav,rmse_dfa,rmse_wav,failed_dfa,failed_wav"]
        for r in self.rows:
            lines.append(
                f"{r.h_true:.9g},{abs(r.bias_dfa):.9g},{abs(r.bias_wav):.9g},"
                f"{r.pval_dfa:.9g},{r.pval_wav:.9g},{r.rmse_dfa:.9g},{r.rmse_wav:.9g},"
                f"{r.failed_dfa},{r.failed_wav}"
            )
        return "\n".join(lines) + "\n"


def _benchmark_replicate(task):
    """One replicate: generate FGN, run both estimators.  Top-level so it pickles."""
    h, n, child_seed, regression = task
    from .dfa import dfa_profile, estimate_h_dfa
    from .synthesis import FgnParams, generate_fgn
    from .wavelet import default_scales, estimate_h_wavelet, scale_spectrum

    series = generate_fgn(FgnParams(hurst=h, sigma2=1.0, length=n, seed=child_seed))
    try:
        h_dfa = estimate_h_dfa(dfa_profile(series)).h_hat
    except Exception:
        h_dfa = np.nan
    try:
        spectrum = scale_spectrum(series, scales=default_scales(series, mode="lrd"), mode="lrd")
        h_wav = estimate_h_wavelet(spectrum, regression=regression).h_hat
    except Exception:
        h_wav = np.nan
    return h_dfa, h_wav


def benchmark_estimators(h_values, n: int = 10000, reps: int = 100, seed: int = 0,
                         regression: str = "gls", n_jobs: int = 1) -> MonteCarloReport:
    """Race DFA against the wavelet estimator over ``reps`` FGN paths per H.

    Replicate seeds are spawned deterministically from the master seed, so
    serial and parallel execution produce identical reports.  Replicates on
    which an estimator fails are dropped from its statistics and counted.
    """
    h_values = [float(h) for h in np.atleast_1d(h_values)]
    if reps < 10:
        raise ParameterError("need at least 10 replications for stable statistics")
    children = np.random.SeedSequence(seed).spawn(len(h_values) * reps)
    child_seeds = [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]

    tasks = [
        (h, n, child_seeds[i * reps + j], regression)
        for i, h in enumerate(h_values)
        for j in range(reps)
    ]
    if n_jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(_benchmark_replicate, tasks, chunksize=8))
    else:
        results = [_benchmark_replicate(t) for t in tasks]

    rows = []
    for i, h in enumerate(h_values):
        block = np.array(results[i * reps:(i + 1) * reps])
        dfa_est = block[:, 0][np.isfinite(block[:, 0])]
        wav_est = block[:, 1][np.isfinite(block[:, 1])]
        if dfa_est.size < 2 or wav_est.size < 2:
            raise DegenerateDataError(f"too few successful replicates at H={h}")
        rows.append(BenchmarkRow(
            h_true=h,
            bias_dfa=float(dfa_est.mean() - h),
            bias_wav=float(wav_est.mean() - h),
            pval_dfa=mean_test(dfa_est, h),
            pval_wav=mean_test(wav_est, h),
            rmse_dfa=float(np.sqrt(np.mean((dfa_est - h) ** 2))),
            rmse_wav=float(np.sqrt(np.mean((wav_est - h) ** 2))),
            failed_dfa=reps - dfa_est.size,
            failed_wav=reps - wav_est.size,
        ))
    return MonteCarloReport(rows=tuple(rows), n=n, reps=reps, seed=seed)
