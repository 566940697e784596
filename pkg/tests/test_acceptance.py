"""Acceptance gate: ten pinned criteria, one test and one verdict line each.

Every test prints ``[ k/10] name: PASS|FAIL`` with the measured numbers, then
asserts. Parameters and tolerances are pinned here on purpose; loosening them
is a contract change, not a test fix.
"""
import math

import numpy as np

from conftest import VERDICTS

from pfc.experiments import (
    FIG1_PANELS,
    FIG2_PANELS,
    grid_from_config,
    run_checks,
    run_figure1,
    run_figure2,
)


def _verdict(k, name, passed, detail=""):
    tag = "PASS" if passed else "FAIL"
    line = f"[{k:2d}/10] {name}: {tag}"
    if detail:
        line += f" ({detail})"
    print(line, flush=True)
    VERDICTS.append(line)
    return passed


def test_01_angle_law_distributional_equivalence():
    # pipeline angles vs the closed-form sampler, 1e4 vs 1e4, KS at the 1%
    # level, three seeds
    pvals = []
    ok = True
    for seed in (0, 1, 2):
        res = run_checks("thm24_ks", seed)
        assert res.stats["reps"] == 10000
        pvals.append(res.stats["p_value"])
        ok = ok and res.passed and res.stats["p_value"] >= 0.01
    passed = _verdict(1, "angle law matches the pipeline",
                      ok, "p=" + ", ".join(f"{p:.3f}" for p in pvals))
    assert passed


def test_02_whitened_span_identity():
    res = run_checks("lemma22_span", 0)
    assert res.stats["datasets"] == 200
    assert res.stats["tol_rad"] == 1e-7
    passed = _verdict(2, "whitened span identity", res.passed,
                      f"max angle {res.stats['max_angle_rad']:.2e} rad")
    assert passed


def test_03_covariance_additivity():
    res = run_checks("lemma51_identity", 0)
    assert res.stats["datasets"] == 200
    ok = (res.passed
          and res.stats["max_additivity_rel"] < 1e-9
          and res.stats["max_cross_rel"] < 1e-9)
    passed = _verdict(
        3, "covariance split additivity", ok,
        f"additivity {res.stats['max_additivity_rel']:.2e}, "
        f"cross term {res.stats['max_cross_rel']:.2e}")
    assert passed


def test_04_split_moment_predictions():
    res = run_checks("lemma31_moments", 0)
    assert res.stats["reps"] == 20000
    parts = []
    for kind in ("gaussian", "m4_9"):
        for half in ("signal", "residual"):
            cell = res.stats[kind][half]
            parts.append(f"{kind}/{half} mean {cell['mean']:.2f} "
                         f"(pred {cell['mean_pred']:.2f})")
    passed = _verdict(4, "split moments within tolerance", res.passed,
                      "; ".join(parts[:2]) + "; ...")
    assert passed


def test_05_largest_eigenvalue_tail_bound():
    res = run_checks("eq8_tail", 0)
    assert res.stats["u"] == 20 and res.stats["v"] == 20
    assert res.stats["draws"] == 10000
    assert set(res.stats["levels"]) == {"t=0.5", "t=1", "t=2", "t=3"}
    worst = max(lvl["empirical"] - lvl["bound"]
                for lvl in res.stats["levels"].values())
    passed = _verdict(5, "largest-eigenvalue tail bound", res.passed,
                      f"worst excess {worst:.4f}")
    assert passed


def test_06_almost_sure_eigenvalue_limit():
    res = run_checks("geman", 0)
    assert res.stats["u"] == 1000 and res.stats["v"] == 2000
    assert len(res.stats["ratios"]) == 10
    spread = (min(res.stats["ratios"]), max(res.stats["ratios"]))
    passed = _verdict(
        6, "scaled top eigenvalue at its limit", res.passed,
        f"ratios in [{spread[0]:.4f}, {spread[1]:.4f}], "
        f"target {res.stats['target']:.4f}")
    assert passed


def test_07_confidence_limit_coverage():
    res = run_checks("thm33_coverage", 0)
    assert res.stats["alpha"] == 0.1
    assert res.stats["reps"] == 5000
    passed = _verdict(
        7, "confidence limit coverage and scaling", res.passed,
        f"upper viol {res.stats['upper_violation_rate']:.4f}, "
        f"lower viol {res.stats['lower_violation_rate']:.4f}, "
        f"sqrt-n spread {res.stats['scaled_spread']:.2%}")
    assert passed


def test_08_root_n_decay_of_mean_angle():
    # sweep n over the first panel grid with the direct sampler; the scaled
    # mean angle mean(n) * sqrt(n) must stay constant within 15%
    doc = {"direct_reps": 50000, "estimators": ["thm24_direct"],
           "series": ["mean"]}
    grid = grid_from_config("a", 0, doc, FIG1_PANELS)
    table = run_figure1(grid, "a")
    values, means = table.series("thm24_direct_mean")
    scaled = means * np.sqrt(values)
    spread = (scaled.max() - scaled.min()) / scaled.min()
    ok = bool(spread < 0.15)
    passed = _verdict(8, "root-n decay of the mean angle", ok,
                      f"scaled means {np.round(scaled, 2)}, "
                      f"spread {spread:.2%}")
    assert passed


def test_09_supervised_beats_unsupervised_with_predicted_gap():
    # clause 1: the unsupervised mean angle is never below the supervised
    # one on any panel grid; clause 2: the closed-form approximation tracks
    # the unsupervised mean within 5 degrees wherever sigma_y^2 >= 2 sigma^2
    doc = {"reps": 2500, "direct_reps": 50000,
           "series": ["mean", "eq12"]}
    order_ok = True
    gap_fails = []
    details = []
    for panel in ("a", "b", "c", "d"):
        grid = grid_from_config(panel, 0, doc, FIG2_PANELS,
                                default_series=("mean", "eq12"))
        table = run_figure2(grid, panel)
        _, pfc_means = table.series("pfc_mean")
        values, pc_means = table.series("pc_mean")
        _, eq12 = table.series("eq12")
        if not np.all(pc_means >= pfc_means):
            order_ok = False
            details.append(f"panel {panel}: ordering violated")
        for v, pcm, approx in zip(values, pc_means, eq12):
            spec = grid.spec_at(v)
            if spec.sigma_y**2 < 2.0 * spec.sigma**2:
                continue
            gap = approx - pcm
            if abs(gap) > 5.0:
                gap_fails.append(
                    f"panel {panel} {grid.sweep_param}={v:g}: "
                    f"approx {approx:.2f} vs pc {pcm:.2f} "
                    f"(gap {gap:+.2f} deg)")
    ok = order_ok and not gap_fails
    detail = "ordering holds on all panels" if order_ok else "; ".join(details)
    if gap_fails:
        detail += "; approximation off: " + "; ".join(gap_fails)
    passed = _verdict(9, "supervised beats unsupervised", ok, detail)
    assert passed


def test_10_perturbation_suite():
    weyl = run_checks("weyl", 0)
    assert weyl.stats["pairs"] == 1000
    sandwich = run_checks("sandwich", 0)
    assert sandwich.stats["datasets"] == 200
    trace = run_checks("lemmaA2", 0)
    assert len(trace.stats["cases"]) == 20
    ok = weyl.passed and sandwich.passed and trace.passed
    passed = _verdict(
        10, "perturbation suite", ok,
        f"weyl violations {weyl.stats['violations']}, "
        f"sandwich worst {sandwich.stats['max_violation']:.2e}, "
        f"trace checks {sum(c['ok'] for c in trace.stats['cases'])}/20")
    assert passed
