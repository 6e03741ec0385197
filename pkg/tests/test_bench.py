"""Forecast benchmark: regression baseline oracles and a tiny end-to-end run."""

import numpy as np
import pytest

from hisort.bench import (FAMILIES, ForecastConfig, design_matrix, fit_mlr,
                          predict_class_mlr, predict_mlr, run_forecast,
                          score_correctness)
from hisort.errors import SingularDesign
from hisort.smaa import CAIMatrix


def test_design_matrix_columns(eu_raw):
    x, names = design_matrix(eu_raw, ("Austria", "Belgium"))
    assert names[0] == "intercept"
    assert names[1] == "GDPc"
    assert len(names) == 12
    assert x.shape == (2, 12)
    r = eu_raw.row("Austria")
    assert x[0, 0] == 1.0
    assert x[0, 1] == r["GDPc"]
    assert x[0, names.index("D/GDP/GDPc")] == pytest.approx(r["D/GDP"] / r["GDPc"])


def test_design_matrix_requires_base_column(bonds):
    _, raw, _, _, _ = bonds
    with pytest.raises(SingularDesign):
        design_matrix(raw, ("a",))


def test_mlr_recovers_exact_linear_data():
    """On noiseless linear data the fit is exact: R^2 adjusted = 1, p-value 0."""
    rng = np.random.default_rng(61)
    x = np.column_stack([np.ones(30), rng.uniform(-1, 1, (30, 3))])
    beta = np.array([0.5, 2.0, -1.0, 0.25])
    y = x @ beta
    fit = fit_mlr(x, y)
    assert np.allclose(fit.coefficients, beta, atol=1e-8)
    assert fit.adjusted_r2 == pytest.approx(1.0)
    assert fit.f_pvalue == pytest.approx(0.0, abs=1e-12)
    assert fit.dropped == ()
    assert predict_mlr(fit, x[0]) == pytest.approx(y[0])


def test_mlr_matches_reference_statistics():
    """Against statsmodels-style closed forms computed by hand on a small sample."""
    x = np.array([[1, 0.0], [1, 1.0], [1, 2.0], [1, 3.0]])
    y = np.array([0.1, 0.9, 2.1, 2.9])
    fit = fit_mlr(x, y)
    # hand OLS: slope = cov/var = 0.96, intercept = mean_y - slope * mean_x
    assert fit.coefficients[1] == pytest.approx(0.96)
    assert fit.coefficients[0] == pytest.approx(1.5 - 0.96 * 1.5)
    r2 = 1 - np.sum((y - x @ fit.coefficients) ** 2) / np.sum((y - y.mean()) ** 2)
    assert fit.adjusted_r2 == pytest.approx(1 - (1 - r2) * 3 / 2)
    # F = (r2/1) / ((1-r2)/2); survival function of F(1, 2) equals t-test two-sided
    from scipy import stats

    f_stat = (r2 / 1) / ((1 - r2) / 2)
    assert fit.f_pvalue == pytest.approx(stats.f.sf(f_stat, 1, 2), rel=1e-9)


def test_mlr_drops_collinear_columns():
    rng = np.random.default_rng(62)
    base = rng.uniform(0, 1, (20, 2))
    x = np.column_stack([np.ones(20), base, base[:, 0] + base[:, 1]])
    y = rng.uniform(0, 1, 20)
    fit = fit_mlr(x, y, names=("intercept", "u", "v", "u_plus_v"))
    assert len(fit.dropped) == 1
    # predictions must still be least-squares optimal
    beta_full, *_ = np.linalg.lstsq(x, y, rcond=None)
    assert np.allclose(x @ fit.coefficients, x @ beta_full, atol=1e-8)


def test_mlr_degenerate_inputs():
    x = np.ones((3, 1))
    fit = fit_mlr(x, np.array([1.0, 1.0, 1.0]))
    assert fit.adjusted_r2 is None and fit.f_pvalue is None


def test_predict_class_rounding():
    fit = fit_mlr(np.array([[1.0], [1.0]]), np.array([2.0, 2.0]))
    assert predict_class_mlr(fit, np.array([1.0]), 4) == 2
    fit2 = fit_mlr(np.array([[1.0], [1.0]]), np.array([9.0, 9.0]))
    assert predict_class_mlr(fit2, np.array([1.0]), 4) == 4  # clipped to the top
    fit3 = fit_mlr(np.array([[1.0], [1.0]]), np.array([-3.0, -3.0]))
    assert predict_class_mlr(fit3, np.array([1.0]), 4) == 1


def test_score_correctness_thresholds():
    cai = CAIMatrix.from_block(["x", "y"], "root",
                               np.array([[0.8, 0.2], [0.4, 0.6]]))
    truth = {"x": 1, "y": 2}
    assert score_correctness(cai, "root", truth, ("x", "y"), 50) == 100.0
    assert score_correctness(cai, "root", truth, ("x", "y"), 75) == 50.0
    assert score_correctness(cai, "root", truth, ("x", "y"), 100) == 0.0
    assert score_correctness(cai, "root", truth, (), 50) == 100.0


def test_runs_for_caps_at_subset_count():
    config = ForecastConfig(runs=50)
    assert config.runs_for(27, 28) == 28
    assert config.runs_for(14, 28) == 50


def test_tiny_forecast_run(eu_raw, eu_hierarchy, eu_classification):
    truth = {a: int(v) for a, v in eu_classification.items()}
    config = ForecastConfig(k_values=(26, 27), runs=2, samples=300, seed=4)
    report = run_forecast(config, eu_raw, eu_hierarchy, truth)
    doc = report.to_dict()
    assert set(doc["per_k"]) == {"26", "27"}
    for k in (26, 27):
        families = report.per_k[k]
        assert set(families) == set(FAMILIES)
        total = report.runs_done[k]
        assert families["CH"].feasible + report.failures[k] == total
        assert families["WS"].feasible + families["MSCH"].feasible + report.failures[k] == total
        assert families["MLR"].feasible + report.failures[k] == total
        for fam in FAMILIES:
            for p, values in families[fam].correct.items():
                assert all(0.0 <= v <= 100.0 for v in values)
    assert isinstance(report.to_json(), str)


def test_forecast_rejects_bad_inputs(eu_raw, eu_hierarchy, eu_classification):
    truth = {a: int(v) for a, v in eu_classification.items()}
    with pytest.raises(ValueError):
        run_forecast(ForecastConfig(k_values=(28,), runs=1, samples=10),
                     eu_raw, eu_hierarchy, truth)
    partial = dict(list(truth.items())[:5])
    with pytest.raises(ValueError):
        run_forecast(ForecastConfig(k_values=(3,), runs=1, samples=10),
                     eu_raw, eu_hierarchy, partial)
