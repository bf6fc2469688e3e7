import numpy as np
import pytest

from lrdkit import (
    ParameterError,
    anova_f,
    benchmark_estimators,
    loglog_fit,
    mean_test,
)


def test_loglog_exact_quadratic():
    x = np.array([1.0, 2.0, 4.0, 8.0])
    fit = loglog_fit(x, x**2)
    assert fit.slope == pytest.approx(2.0, abs=1e-12)
    assert fit.rss == pytest.approx(0.0, abs=1e-20)
    assert fit.stderr_slope == pytest.approx(0.0, abs=1e-10)


def test_loglog_constant_y():
    x = np.array([1.0, 2.0, 4.0, 8.0])
    fit = loglog_fit(x, np.full(4, 5.0))
    assert fit.slope == pytest.approx(0.0, abs=1e-12)
    assert fit.intercept == pytest.approx(np.log(5.0))


def test_loglog_rejects_bad_input():
    with pytest.raises(ParameterError):
        loglog_fit([1.0, 2.0], [1.0, 2.0])
    with pytest.raises(ParameterError):
        loglog_fit([1.0, -2.0, 3.0], [1.0, 2.0, 3.0])
    with pytest.raises(ParameterError):
        loglog_fit([1.0, 2.0, 3.0], [1.0, 2.0, 3.0], weights=[1.0, 0.0, 1.0])


def test_weighted_fit_beats_unweighted_on_heteroscedastic_data():
    rng = np.random.default_rng(0)
    x = np.geomspace(1, 100, 20)
    counts = np.geomspace(400, 10, 20)
    wins = 0
    for _ in range(50):
        noise = rng.standard_normal(20) * np.sqrt(2.0 / counts)
        y = np.exp(1.0 + 1.5 * np.log(x) + noise)
        fw = loglog_fit(x, y, weights=counts)
        fu = loglog_fit(x, y)
        wins += fw.stderr_slope <= fu.stderr_slope
    assert wins >= 45


def test_loglog_scale_equivariance():
    rng = np.random.default_rng(1)
    x = np.geomspace(1, 50, 12)
    y = np.exp(0.3 + 0.9 * np.log(x) + 0.05 * rng.standard_normal(12))
    f0 = loglog_fit(x, y)
    f1 = loglog_fit(x, 10.0 * y)
    assert f1.slope == pytest.approx(f0.slope, abs=1e-12)
    assert f1.intercept == pytest.approx(f0.intercept + np.log(10.0), abs=1e-12)


def test_mean_test_exact_and_degenerate():
    assert mean_test(np.full(10, 3.3), 3.3) == 1.0
    assert mean_test(np.full(10, 3.3), 0.0) == 0.0
    with pytest.raises(ParameterError):
        mean_test([1.0], 0.0)


def test_mean_test_calibration():
    rejections = 0
    trials = 500
    rng = np.random.default_rng(7)
    for _ in range(trials):
        sample = rng.normal(2.0, 1.0, 100)
        rejections += mean_test(sample, 2.0) < 0.05
    assert 0.03 <= rejections / trials <= 0.08


def test_anova_identical_groups():
    g = np.array([1.0, 2.0, 3.0])
    cmp = anova_f([g, g, g])
    assert cmp.f_stat == pytest.approx(0.0)
    assert cmp.p_value == pytest.approx(1.0)


def test_anova_degenerate_groups():
    same = anova_f([[2.0, 2.0], [2.0, 2.0]])
    assert same.f_stat == 0.0 and same.p_value == 1.0
    split = anova_f([[1.0, 1.0], [2.0, 2.0]])
    assert np.isinf(split.f_stat) and split.p_value == 0.0


def test_anova_detects_separated_groups():
    rng = np.random.default_rng(3)
    a = rng.normal(0, 1, 9)
    b = rng.normal(3, 1, 9)
    assert anova_f([a, b]).p_value < 0.01


def test_anova_three_close_groups_frequently_significant():
    rng = np.random.default_rng(4)
    hits = 0
    trials = 40
    for _ in range(trials):
        groups = [rng.normal(m, 0.15, 9) for m in (1.1, 1.2, 1.3)]
        hits += anova_f(groups).p_value < 0.05
    assert hits > trials / 2


def test_anova_shift_scale_invariance():
    rng = np.random.default_rng(5)
    groups = [rng.normal(m, 1.0, 8) for m in (0.0, 1.0)]
    f0 = anova_f(groups).f_stat
    f1 = anova_f([g + 7.0 for g in groups]).f_stat
    f2 = anova_f([g * 3.0 for g in groups]).f_stat
    assert f1 == pytest.approx(f0, rel=1e-12)
    assert f2 == pytest.approx(f0, rel=1e-12)


def test_anova_validation():
    with pytest.raises(ParameterError):
        anova_f([[1.0, 2.0]])
    with pytest.raises(ParameterError):
        anova_f([[1.0], [2.0, 3.0]])


def test_benchmark_deterministic_and_consistent():
    a = benchmark_estimators([0.6], n=2000, reps=10, seed=5)
    b = benchmark_estimators([0.6], n=2000, reps=10, seed=5)
    assert a == b
    row = a.rows[0]
    assert row.rmse_dfa**2 >= row.bias_dfa**2 - 1e-15
    assert row.rmse_wav**2 >= row.bias_wav**2 - 1e-15
    assert 0.0 <= row.pval_dfa <= 1.0
    assert row.failed_dfa == 0 and row.failed_wav == 0
    text = a.to_text()
    assert "0.60" in text
    csv = a.to_csv()
    assert csv.splitlines()[0].startswith("h_true,")


def test_benchmark_serial_matches_parallel():
    serial = benchmark_estimators([0.7], n=2000, reps=10, seed=9, n_jobs=1)
    parallel = benchmark_estimators([0.7], n=2000, reps=10, seed=9, n_jobs=2)
    assert serial == parallel


def test_benchmark_rejects_tiny_reps():
    with pytest.raises(ParameterError):
        benchmark_estimators([0.5], n=1000, reps=5, seed=0)
