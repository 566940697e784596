import json
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from pfc.errors import ConfigError, InvalidParam, UnknownSuite
from pfc.experiments import (
    CHECK_SUITES,
    CSV_HEADER,
    FIG1_PANELS,
    FIG2_PANELS,
    ExperimentGrid,
    SeriesRow,
    SeriesTable,
    bound_report,
    grid_from_config,
    read_series_csv,
    run_checks,
    run_figure1,
    run_figure2,
)
from pfc.model import ModelSpec


def _tiny_grid(**over):
    base = ModelSpec.univariate(p=6, n=30)
    kw = dict(base_spec=base, sweep_param="n", sweep_values=(30.0, 60.0),
              reps=40, direct_reps=150, seed=0)
    kw.update(over)
    return ExperimentGrid(**kw)


def test_series_row_validation():
    with pytest.raises(InvalidParam):
        SeriesRow(1.0, "mean", math.nan, 10)
    with pytest.raises(InvalidParam):
        SeriesRow(math.inf, "mean", 1.0, 10)
    with pytest.raises(InvalidParam):
        SeriesRow(1.0, "mean", 1.0, 0)


def test_series_table_round_trips_through_csv():
    rows = (SeriesRow(40.0, "pfc_mean", 21.5, 100),
            SeriesRow(80.0, "pfc_mean", 15.25, 100),
            SeriesRow(40.0, "eq12", 30.0, 100))
    table = SeriesTable("n", rows, seed=7)
    text = table.to_csv_text()
    assert text.splitlines()[0] == CSV_HEADER
    back = read_series_csv(text)
    assert back.sweep_name == "n"
    assert back.seed == 7
    assert back.series_names() == ("pfc_mean", "eq12")
    values, angles = back.series("pfc_mean")
    assert_allclose(values, [40.0, 80.0])
    assert_allclose(angles, [21.5, 15.25])
    # serialization is stable byte for byte
    assert back.to_csv_text() == text


def test_csv_preserves_full_float_precision():
    angle = 21.123456789012345678
    table = SeriesTable("sigma", (SeriesRow(1.0, "mean", angle, 5),), seed=0)
    back = read_series_csv(table.to_csv_text())
    assert back.rows[0].angle_deg == angle


def test_read_series_csv_rejects_malformed_input():
    with pytest.raises(ConfigError):
        read_series_csv("nope\n")
    with pytest.raises(ConfigError):
        read_series_csv(CSV_HEADER + "\n")  # no data rows
    with pytest.raises(ConfigError):
        read_series_csv(CSV_HEADER + "\nn,1,mean,2\n")
    mixed = (CSV_HEADER + "\nn,1,mean,2,10,0\nsigma,1,mean,2,10,0\n")
    with pytest.raises(ConfigError):
        read_series_csv(mixed)
    reseeded = (CSV_HEADER + "\nn,1,mean,2,10,0\nn,2,mean,2,10,1\n")
    with pytest.raises(ConfigError):
        read_series_csv(reseeded)


def test_series_table_requires_rows_and_known_series():
    with pytest.raises(InvalidParam):
        SeriesTable("n", (), seed=0)
    table = SeriesTable("n", (SeriesRow(1.0, "mean", 2.0, 5),), seed=0)
    with pytest.raises(InvalidParam):
        table.series("missing")


def test_grid_validation():
    with pytest.raises(ConfigError):
        _tiny_grid(sweep_param="p")
    with pytest.raises(ConfigError):
        _tiny_grid(sweep_values=())
    with pytest.raises(ConfigError):
        _tiny_grid(sweep_values=(30.0, 30.0))
    with pytest.raises(ConfigError):
        _tiny_grid(sweep_values=(30.5, 60.0))  # n must stay integral
    with pytest.raises(ConfigError):
        _tiny_grid(sweep_values=(-1.0, 2.0))
    with pytest.raises(ConfigError):
        _tiny_grid(reps=0)
    with pytest.raises(ConfigError):
        _tiny_grid(estimators=("magic",))
    with pytest.raises(ConfigError):
        _tiny_grid(estimators=())
    grid = _tiny_grid()
    assert grid.spec_at(60.0).n == 60


def test_grid_from_config_panel_defaults():
    grid = grid_from_config("b", 3, None, FIG1_PANELS)
    assert grid.sweep_param == "sigma_y"
    assert grid.sweep_values == (0.5, 1.0, 1.5, 2.0, 2.5, 3.0)
    assert grid.base_spec.n == 40
    assert grid.base_spec.sigma == 1.0
    assert grid.base_spec.p == 10
    assert grid.seed == 3
    assert grid.series == ("mean", "q05", "q95")


def test_grid_from_config_overrides_and_validation():
    doc = {"p": 6, "reps": 11, "sweep_values": [1.0, 2.0],
           "series": ["mean"], "estimators": ["pfc"]}
    grid = grid_from_config("c", 0, doc, FIG1_PANELS)
    assert grid.base_spec.p == 6
    assert grid.reps == 11
    assert grid.sweep_values == (1.0, 2.0)
    assert grid.series == ("mean",)
    assert grid.estimators == ("pfc",)
    with pytest.raises(ConfigError):
        grid_from_config("z", 0, None, FIG1_PANELS)
    with pytest.raises(ConfigError):
        grid_from_config("a", 0, {"mystery": 1}, FIG1_PANELS)
    with pytest.raises(ConfigError):
        grid_from_config("a", 0, {"d": 5}, FIG1_PANELS)  # d > r is invalid


def test_figure2_panel_d_fixes_larger_response_scale():
    param, values, fixed = FIG2_PANELS["d"]
    assert param == "n"
    assert fixed["sigma_y"] == pytest.approx(math.sqrt(2.0))
    assert values == (250.0, 500.0, 750.0, 1000.0)


def test_run_figure1_emits_all_series():
    grid = _tiny_grid(estimators=("thm24_direct", "pfc", "pc"))
    table = run_figure1(grid, "a")
    names = set(table.series_names())
    assert names == {f"{est}_{stat}"
                     for est in ("thm24_direct", "pfc", "pc")
                     for stat in ("mean", "q05", "q95")}
    # quantile ordering within each estimator at each sweep value
    for est in ("thm24_direct", "pfc", "pc"):
        _, lo = table.series(f"{est}_q05")
        _, hi = table.series(f"{est}_q95")
        assert np.all(lo <= hi)
    # replication counts follow the sampling route
    for row in table.rows:
        assert row.reps == (150 if row.series.startswith("thm24_direct") else 40)


def test_run_figure1_is_deterministic():
    grid = _tiny_grid(estimators=("pfc",), series=("mean",))
    a = run_figure1(grid, "a").to_csv_text()
    b = run_figure1(grid, "a").to_csv_text()
    assert a == b
    reseeded = _tiny_grid(estimators=("pfc",), series=("mean",), seed=1)
    c = run_figure1(reseeded, "a").to_csv_text()
    assert a != c


def test_run_figure1_panel_grid_mismatch():
    grid = _tiny_grid()  # sweeps n
    with pytest.raises(ConfigError):
        run_figure1(grid, "b")
    with pytest.raises(ConfigError):
        run_figure1(grid, "z")
    bad_series = _tiny_grid(series=("mean", "eq12"))
    with pytest.raises(ConfigError):
        run_figure1(bad_series, "a")


def test_run_figure1_direct_sampler_needs_rank_one():
    base = ModelSpec(p=6, d=2, r=2, n=30, beta=np.diag([1.5, 1.0]))
    grid = ExperimentGrid(base, "n", (30.0, 60.0), reps=20, direct_reps=50,
                          estimators=("thm24_direct",))
    with pytest.raises(ConfigError):
        run_figure1(grid, "a")
    # the pipeline estimators handle the multivariate case
    pipe = ExperimentGrid(base, "n", (30.0, 60.0), reps=20,
                          estimators=("pfc", "pc"), series=("mean",))
    table = run_figure1(pipe, "a")
    assert set(table.series_names()) == {"pfc_mean", "pc_mean"}


def test_run_figure2_series_and_bound_gating():
    base = ModelSpec.univariate(p=6, n=40)
    grid = ExperimentGrid(base, "sigma_y", (0.5, 2.0), reps=30,
                          direct_reps=200, series=("mean", "eq11", "eq12"))
    table = run_figure2(grid, "b")
    names = set(table.series_names())
    assert names == {"pfc_mean", "pc_mean", "eq11", "eq12"}
    # the penalty bound only exists where sigma_y^2 exceeds sigma^2
    v11, _ = table.series("eq11")
    assert_allclose(v11, [2.0])
    v12, a12 = table.series("eq12")
    assert_allclose(v12, [0.5, 2.0])
    assert np.all(a12 <= 90.0)
    for row in table.rows:
        assert row.reps == (30 if row.series == "pc_mean" else 200)


def test_run_figure2_rejects_unknown_series():
    grid = _tiny_grid(series=("mean", "volume"))
    with pytest.raises(ConfigError):
        run_figure2(grid, "a")


def test_run_checks_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_checks("nope", 0)
    with pytest.raises(InvalidParam):
        run_checks("weyl", -1)
    assert "weyl" in CHECK_SUITES
    assert len(CHECK_SUITES) == 11


def test_run_checks_fast_suites_pass_and_serialize():
    for suite in ("weyl", "sandwich", "lemma51_identity"):
        res = run_checks(suite, 0)
        assert res.passed, f"{suite}: {res.message}"
        doc = res.to_json_dict()
        json.dumps(doc)  # must be plain JSON types throughout
        assert doc["suite"] == suite


def test_bound_report_populates_fields():
    spec = ModelSpec.univariate(p=10, n=10000)
    rep = bound_report(spec, 0.1)
    assert rep.lambda_expected == pytest.approx(10000.0)
    assert rep.k1_default == pytest.approx(0.9)
    assert rep.k2_default == pytest.approx(1.1)
    assert rep.theta_plus_deg is not None and 0 < rep.theta_plus_deg < 90
    assert rep.theta_minus_deg is None  # vacuous at alpha = 0.1
    assert rep.m_asymptotic == pytest.approx(10000.0)
    assert rep.consistency is not None
    assert rep.pc_penalty_bound_deg is None  # sigma_y = sigma here
    assert rep.pc_penalty_approx_deg > 0
    json.dumps(rep.to_json_dict())
    with pytest.raises(InvalidParam):
        bound_report(spec.replace(sigma=0.0), 0.1)
