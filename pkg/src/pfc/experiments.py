"""Monte Carlo harness: figure sweeps, check suites, bound reports.

Three entry layers live here:

* sweep tables (``run_figure1`` / ``run_figure2``) producing ``SeriesTable``
  objects with a stable CSV schema,
* the named empirical check suites behind ``run_checks``,
* ``bound_report`` collecting every closed-form limit for one model spec.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sp_stats

from .bounds import (
    confidence_report,
    consistency_constants,
    crossing_tail_bound,
    min_level_spacing,
    pc_angle_approx,
    pc_angle_bound,
    signal_cov_limit,
    signal_noise_moments,
)
from .errors import (
    BoundUndefined,
    ConfigError,
    DegenerateSpectrum,
    InvalidParam,
    UnknownSuite,
)
from .estimators import Basis, orthonormalize, pc, pfc
from .matkit import inv_sqrt_spd, projector, sqrt_spd, sym_eig, symmetrize, weyl_bounds
from .metrics import principal_angles, theta
from .model import (
    ModelSpec,
    build_fy,
    center,
    fit_predictors,
    simulate,
    simulate_given_responses,
    v_matrix,
)
from .perturb import projected_trace_check, split_covariance
from .randsrc import (
    RngStream,
    sample_pfc_angles,
    sample_wishart_lambda1,
    wishart_lambda1_tail_bound,
    wishart_lambda1_tail_level,
)

CSV_HEADER = "sweep_name,sweep_value,series,angle_deg,reps,seed"

_DIRECT_STREAM_BASE = 10**9

FIG1_PANELS = {
    "a": ("n", (250.0, 500.0, 750.0, 1000.0), {"sigma": 1.0, "sigma_y": 1.0}),
    "b": ("sigma_y", (0.5, 1.0, 1.5, 2.0, 2.5, 3.0), {"n": 40, "sigma": 1.0}),
    "c": ("sigma", (0.5, 1.0, 1.5, 2.0, 2.5, 3.0), {"n": 40, "sigma_y": 1.0}),
}

FIG2_PANELS = {
    **FIG1_PANELS,
    "d": ("n", (250.0, 500.0, 750.0, 1000.0),
          {"sigma": 1.0, "sigma_y": math.sqrt(2.0)}),
}

_SWEEPABLE = ("n", "sigma", "sigma_y")
_ESTIMATORS = ("thm24_direct", "pfc", "pc")
_STATS = ("mean", "q05", "q95")


@dataclass(frozen=True)
class SeriesRow:
    """One (sweep point, series) cell of a figure table, angle in degrees."""

    sweep_value: float
    series: str
    angle_deg: float
    reps: int

    def __post_init__(self):
        if not math.isfinite(self.sweep_value):
            raise InvalidParam("sweep_value must be finite")
        if not math.isfinite(self.angle_deg):
            raise InvalidParam("angle_deg must be finite")
        if self.reps < 1:
            raise InvalidParam("reps must be positive")


@dataclass(frozen=True)
class SeriesTable:
    sweep_name: str
    rows: tuple
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        if not self.rows:
            raise InvalidParam("a series table needs at least one row")

    def series_names(self):
        names = []
        for row in self.rows:
            if row.series not in names:
                names.append(row.series)
        return tuple(names)

    def series(self, name):
        """Return (sweep_values, angles_deg) arrays for one series."""
        rows = sorted((r for r in self.rows if r.series == name),
                      key=lambda r: r.sweep_value)
        if not rows:
            raise InvalidParam(f"no series named {name!r}")
        return (np.array([r.sweep_value for r in rows]),
                np.array([r.angle_deg for r in rows]))

    def to_csv_text(self) -> str:
        lines = [CSV_HEADER]
        for r in self.rows:
            lines.append(
                f"{self.sweep_name},{r.sweep_value:.17g},{r.series},"
                f"{r.angle_deg:.17g},{r.reps},{self.seed}"
            )
        return "\n".join(lines) + "\n"


def read_series_csv(text: str) -> SeriesTable:
    """Parse the CSV emitted by ``SeriesTable.to_csv_text``."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != CSV_HEADER:
        raise ConfigError("unrecognized series CSV header")
    rows = []
    sweep_name = None
    seed = None
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 6:
            raise ConfigError(f"malformed CSV row: {ln!r}")
        name, value, series, angle, reps, row_seed = parts
        if sweep_name is None:
            sweep_name = name
            seed = int(row_seed)
        elif name != sweep_name or int(row_seed) != seed:
            raise ConfigError("inconsistent sweep name or seed across rows")
        rows.append(SeriesRow(float(value), series, float(angle), int(reps)))
    if sweep_name is None:
        raise ConfigError("series CSV has no data rows")
    return SeriesTable(sweep_name, tuple(rows), seed)


@dataclass(frozen=True)
class ExperimentGrid:
    """A sweep definition: base model, swept parameter, and MC sizes."""

    base_spec: ModelSpec
    sweep_param: str
    sweep_values: tuple
    reps: int = 2500
    direct_reps: int = 50000
    seed: int = 0
    estimators: tuple = ("thm24_direct",)
    series: tuple = ("mean", "q05", "q95")

    def __post_init__(self):
        object.__setattr__(self, "sweep_values",
                           tuple(float(v) for v in self.sweep_values))
        object.__setattr__(self, "estimators", tuple(self.estimators))
        object.__setattr__(self, "series", tuple(self.series))
        if self.sweep_param not in _SWEEPABLE:
            raise ConfigError(
                f"sweep_param must be one of {_SWEEPABLE}, got {self.sweep_param!r}"
            )
        if not self.sweep_values:
            raise ConfigError("sweep_values must be nonempty")
        if len(set(self.sweep_values)) != len(self.sweep_values):
            raise ConfigError("sweep_values must be distinct")
        for v in self.sweep_values:
            if not math.isfinite(v) or v <= 0:
                raise ConfigError("sweep values must be positive and finite")
            if self.sweep_param == "n" and v != int(v):
                raise ConfigError("sample-size sweep values must be integers")
        if self.reps < 1 or self.direct_reps < 1:
            raise ConfigError("reps and direct_reps must be positive")
        if not (0 <= self.seed < 2**64):
            raise ConfigError("seed out of range")
        for est in self.estimators:
            if est not in _ESTIMATORS:
                raise ConfigError(
                    f"unknown estimator {est!r}; choose from {_ESTIMATORS}"
                )
        if not self.estimators:
            raise ConfigError("estimators must be nonempty")

    def spec_at(self, value: float) -> ModelSpec:
        if self.sweep_param == "n":
            return self.base_spec.replace(n=int(value))
        return self.base_spec.replace(**{self.sweep_param: float(value)})


def _grid_model_overrides(doc: dict) -> dict:
    keys = ("p", "d", "r", "n", "sigma", "sigma_y", "fy_kind")
    return {k: doc[k] for k in keys if k in doc}


def grid_from_config(panel: str, seed: int, doc: dict | None, panels: dict,
                     default_series: tuple = ("mean", "q05", "q95"),
                     ) -> ExperimentGrid:
    """Build a sweep grid for one figure panel, applying config overrides."""
    if panel not in panels:
        raise ConfigError(
            f"unknown panel {panel!r}; choose from {sorted(panels)}"
        )
    param, values, fixed = panels[panel]
    doc = dict(doc or {})
    known = {"p", "d", "r", "n", "sigma", "sigma_y", "fy_kind",
             "sweep_values", "reps", "direct_reps", "estimators", "series"}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    model_kwargs = {"p": 10, "d": 1, "r": 1, "n": 40,
                    "sigma": 1.0, "sigma_y": 1.0}
    model_kwargs.update(fixed)
    model_kwargs.update(_grid_model_overrides(doc))
    try:
        base = ModelSpec(**model_kwargs)
    except InvalidParam as exc:
        raise ConfigError(f"invalid model parameters: {exc}") from exc
    grid_kwargs = {}
    if "sweep_values" in doc:
        grid_kwargs["sweep_values"] = tuple(doc["sweep_values"])
    else:
        grid_kwargs["sweep_values"] = values
    for k in ("reps", "direct_reps"):
        if k in doc:
            grid_kwargs[k] = int(doc[k])
    if "estimators" in doc:
        grid_kwargs["estimators"] = tuple(doc["estimators"])
    grid_kwargs["series"] = (tuple(doc["series"]) if "series" in doc
                             else tuple(default_series))
    return ExperimentGrid(base, param, seed=seed, **grid_kwargs)


def _angles_direct_deg(spec: ModelSpec, seed: int, stream_id: int,
                       reps: int) -> np.ndarray:
    if (spec.d, spec.r) != (1, 1):
        raise ConfigError(
            "the direct angle sampler covers the rank-one model only; "
            "use the pipeline estimators for d > 1 or r > 1"
        )
    beta_scalar = float(spec.beta[0, 0])
    rad = sample_pfc_angles(
        spec.p, spec.d, spec.r, spec.sigma, spec.sigma_y, spec.n,
        RngStream(seed, stream_id), reps, beta_scalar=beta_scalar,
    )
    return np.degrees(rad)


def _angles_pipeline_deg(spec: ModelSpec, seed: int, stream_base: int,
                         reps: int, estimator: str) -> np.ndarray:
    truth = Basis(spec.gamma, kind="true")
    out = np.empty(reps)
    for rep in range(reps):
        ds = simulate(spec, RngStream(seed, stream_base + rep))
        basis = pfc(ds, spec.d) if estimator == "pfc" else pc(ds, spec.d)
        out[rep] = theta(basis, truth).theta_deg
    return out


def _stat_rows(value, angles_deg, prefix, stats_wanted, reps):
    rows = []
    for stat in _STATS:
        if stat not in stats_wanted:
            continue
        if stat == "mean":
            a = float(np.mean(angles_deg))
        elif stat == "q05":
            a = float(np.quantile(angles_deg, 0.05))
        else:
            a = float(np.quantile(angles_deg, 0.95))
        rows.append(SeriesRow(value, f"{prefix}_{stat}", a, reps))
    return rows


def run_figure1(grid: ExperimentGrid, panel: str) -> SeriesTable:
    """Sweep the panel parameter and tabulate angle statistics per estimator."""
    if panel not in FIG1_PANELS:
        raise ConfigError(f"unknown panel {panel!r}")
    if grid.sweep_param != FIG1_PANELS[panel][0]:
        raise ConfigError(
            f"panel {panel!r} sweeps {FIG1_PANELS[panel][0]!r}, "
            f"grid sweeps {grid.sweep_param!r}"
        )
    for s in grid.series:
        if s not in _STATS:
            raise ConfigError(f"unknown series statistic {s!r}")
    rows = []
    n_est = len(grid.estimators)
    for iv, value in enumerate(grid.sweep_values):
        spec = grid.spec_at(value)
        for ie, est in enumerate(grid.estimators):
            if est == "thm24_direct":
                angles = _angles_direct_deg(
                    spec, grid.seed, _DIRECT_STREAM_BASE + iv * n_est + ie,
                    grid.direct_reps,
                )
                reps = grid.direct_reps
            else:
                stream_base = (iv * n_est + ie) * grid.reps
                angles = _angles_pipeline_deg(
                    spec, grid.seed, stream_base, grid.reps, est,
                )
                reps = grid.reps
            rows.extend(_stat_rows(value, angles, est, grid.series, reps))
    return SeriesTable(grid.sweep_param, tuple(rows), grid.seed)


def run_figure2(grid: ExperimentGrid, panel: str) -> SeriesTable:
    """Compare tuned and unsupervised reductions with the closed-form penalty.

    Emits ``pfc_mean`` from the direct angle law, ``pc_mean`` from the full
    pipeline, the ``eq11`` penalty bound where defined, and the ``eq12``
    approximation everywhere.
    """
    if panel not in FIG2_PANELS:
        raise ConfigError(f"unknown panel {panel!r}")
    if grid.sweep_param != FIG2_PANELS[panel][0]:
        raise ConfigError(
            f"panel {panel!r} sweeps {FIG2_PANELS[panel][0]!r}, "
            f"grid sweeps {grid.sweep_param!r}"
        )
    wanted = set(grid.series) or {"mean", "eq11", "eq12"}
    allowed = {"mean", "q05", "q95", "eq11", "eq12"}
    unknown = wanted - allowed
    if unknown:
        raise ConfigError(f"unknown series for this figure: {sorted(unknown)}")
    rows = []
    for iv, value in enumerate(grid.sweep_values):
        spec = grid.spec_at(value)
        direct = _angles_direct_deg(
            spec, grid.seed, _DIRECT_STREAM_BASE + iv, grid.direct_reps,
        )
        stream_base = iv * grid.reps
        pipeline = _angles_pipeline_deg(
            spec, grid.seed, stream_base, grid.reps, "pc",
        )
        stat_names = wanted & set(_STATS)
        rows.extend(_stat_rows(value, direct, "pfc", stat_names,
                               grid.direct_reps))
        rows.extend(_stat_rows(value, pipeline, "pc", stat_names, grid.reps))
        mean_pfc_rad = math.radians(float(np.mean(direct)))
        if "eq11" in wanted:
            try:
                bound = pc_angle_bound(mean_pfc_rad, spec.sigma, spec.sigma_y,
                                       spec.n, spec.p)
                rows.append(SeriesRow(value, "eq11", math.degrees(bound),
                                      grid.direct_reps))
            except BoundUndefined:
                pass
        if "eq12" in wanted:
            approx = pc_angle_approx(mean_pfc_rad, spec.sigma, spec.sigma_y,
                                     spec.n, spec.p)
            rows.append(SeriesRow(value, "eq12", math.degrees(approx),
                                  grid.direct_reps))
    return SeriesTable(grid.sweep_param, tuple(rows), grid.seed)


# ---------------------------------------------------------------------------
# check suites
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    """Outcome of one named empirical check suite."""

    suite: str
    passed: bool
    stats: dict = field(default_factory=dict)
    message: str = ""

    def to_json_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": bool(self.passed),
            "stats": _jsonable(self.stats),
            "message": self.message,
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    return obj


def _mixed_specs(n: int = 50):
    combos = ((10, 1, 1), (6, 1, 1), (10, 2, 2), (6, 2, 2))
    out = []
    for p, d, r in combos:
        beta = np.eye(d, r) * 1.5
        out.append(ModelSpec(p=p, d=d, r=r, n=n, sigma=1.0, sigma_y=1.0,
                             beta=beta))
    return out


def _check_lemma22_span(seed: int) -> CheckResult:
    reps_per = 50
    worst = 0.0
    stream = 0
    for spec in _mixed_specs(n=100):
        for _ in range(reps_per):
            ds = simulate(spec, RngStream(seed, stream))
            stream += 1
            vm = v_matrix(ds)
            span_v = orthonormalize(vm.V, kind="true")
            fitted = symmetrize(ds.X_fitted.T @ ds.X_fitted)
            eig = sym_eig(fitted)
            top = Basis(eig.vectors[:, :spec.r], kind="true")
            ang = principal_angles(span_v, top, assume_orthonormal=True)
            worst = max(worst, float(ang[-1]))
    passed = worst < 1e-7
    return CheckResult(
        "lemma22_span", passed,
        {"max_angle_rad": worst, "datasets": 200, "tol_rad": 1e-7},
        "span of whitened coordinates matches the top fitted eigenspace"
        if passed else "whitened span deviates from the fitted eigenspace",
    )


def _fixed_responses(spec: ModelSpec, seed: int) -> np.ndarray:
    gen = RngStream(seed, 0).generator()
    return gen.normal(0.0, spec.sigma_y, spec.n)


def _check_lemma23_moments(seed: int) -> CheckResult:
    spec = ModelSpec.univariate(p=10, n=40)
    y = _fixed_responses(spec, seed)
    reps = 4000
    f = None
    vs = np.empty((reps, spec.p, spec.r))
    for rep in range(reps):
        ds = simulate_given_responses(spec, y, RngStream(seed, rep + 1))
        if f is None:
            f = ds.F
        vs[rep] = v_matrix(ds).V
    expected = spec.gamma @ spec.beta @ sqrt_spd(symmetrize(f.T @ f))
    mean_err = float(np.max(np.abs(vs.mean(axis=0) - expected)))
    se_mean = spec.sigma / math.sqrt(reps)
    var_err = float(np.max(np.abs(vs.var(axis=0, ddof=1) - spec.sigma**2)))
    se_var = spec.sigma**2 * math.sqrt(2.0 / (reps - 1))
    flat = vs.reshape(reps, -1) - vs.reshape(reps, -1).mean(axis=0)
    cov = flat.T @ flat / (reps - 1)
    off = cov - np.diag(np.diag(cov))
    cov_err = float(np.max(np.abs(off)))
    se_cov = spec.sigma**2 / math.sqrt(reps)
    passed = (mean_err <= 4 * se_mean and var_err <= 4 * se_var
              and cov_err <= 4 * se_cov)
    return CheckResult(
        "lemma23_moments", passed,
        {"reps": reps, "mean_err": mean_err, "mean_tol": 4 * se_mean,
         "var_err": var_err, "var_tol": 4 * se_var,
         "cov_err": cov_err, "cov_tol": 4 * se_cov},
        "whitened coordinates have the predicted mean and white covariance"
        if passed else "whitened-coordinate moments deviate beyond 4 se",
    )


def _batch_v_split(spec: ModelSpec, y: np.ndarray, seed: int,
                   reps: int):
    """Per-rep signal/residual split of the whitened Gram, batched algebra.

    Error draws come one replication stream at a time so each slice matches
    the sequential pipeline exactly; the first few slices are verified
    against ``v_matrix`` below.
    """
    f = build_fy(y, spec.fy_kind, spec.r)
    ftf = symmetrize(f.T @ f)
    whiten = inv_sqrt_spd(ftf)
    base = (spec.mu[None, :] + f @ spec.beta.T @ spec.gamma.T)
    from .model import _draw_errors

    eps = np.empty((reps, spec.n, spec.p))
    for rep in range(reps):
        gen = RngStream(seed, rep + 1).generator()
        eps[rep] = _draw_errors(spec, gen, (spec.n, spec.p))
    x_raw = base[None, :, :] + spec.sigma * eps
    x_c = x_raw - x_raw.mean(axis=1, keepdims=True)
    vt = np.einsum("rq,nq,bnp->brp", whiten, f, x_c)
    v = vt.transpose(0, 2, 1)
    for rep in range(min(5, reps)):
        ds = simulate_given_responses(spec, y, RngStream(seed, rep + 1))
        ref = v_matrix(ds).V
        if not np.allclose(v[rep], ref, rtol=1e-9, atol=1e-9):
            raise InvalidParam("batched whitening disagrees with the pipeline")
    proj = np.einsum("pd,bpr->bdr", spec.gamma, v)
    n_stat = np.sum(proj**2, axis=(1, 2))
    total = np.sum(v**2, axis=(1, 2))
    d_stat = total - n_stat
    return n_stat, d_stat, ftf


def _moment_clause(spec: ModelSpec, seed: int, reps: int) -> dict:
    y = _fixed_responses(spec, seed)
    n_stat, d_stat, ftf = _batch_v_split(spec, y, seed, reps)
    rep_moments = signal_noise_moments(spec, ftf)

    def _summary(x, mean_pred, var_bound):
        m = float(np.mean(x))
        v = float(np.var(x, ddof=1))
        se_m = float(np.std(x, ddof=1) / math.sqrt(len(x)))
        centered = x - m
        m4 = float(np.mean(centered**4))
        se_v = math.sqrt(max(m4 - v**2, 0.0) / len(x))
        return {
            "mean": m, "mean_pred": mean_pred, "mean_se": se_m,
            "mean_ok": abs(m - mean_pred) <= 4 * se_m,
            "var": v, "var_bound": var_bound, "var_se": se_v,
            "var_ok": v <= var_bound + 3 * se_v,
        }

    return {
        "signal": _summary(n_stat, rep_moments.mean_n, rep_moments.var_n_bound),
        "residual": _summary(d_stat, rep_moments.mean_d, rep_moments.var_d_bound),
    }


def _check_lemma31_moments(seed: int) -> CheckResult:
    reps = 20000
    gauss = ModelSpec.univariate(p=10, n=40)
    heavy = gauss.replace(error_kind="symmetric", m4=9.0)
    out = {
        "gaussian": _moment_clause(gauss, seed, reps),
        "m4_9": _moment_clause(heavy, seed + 1, reps),
    }
    flags = []
    for clause in out.values():
        for part in clause.values():
            flags.extend([part["mean_ok"], part["var_ok"]])
    passed = all(flags)
    out["reps"] = reps
    return CheckResult(
        "lemma31_moments", passed, out,
        "signal and residual split moments match predictions"
        if passed else "split moments violate the predicted mean or variance bound",
    )


def _check_lemma51_identity(seed: int) -> CheckResult:
    worst_add = 0.0
    worst_cross = 0.0
    worst_resid = 0.0
    stream = 0
    for spec in _mixed_specs(n=50):
        for _ in range(50):
            ds = simulate(spec, RngStream(seed, stream))
            stream += 1
            fitted, noise = split_covariance(ds)
            total = symmetrize(ds.X_centered.T @ ds.X_centered)
            add = np.linalg.norm(total - fitted - noise) / np.linalg.norm(total)
            worst_add = max(worst_add, float(add))
            resid_mat = ds.X_centered - ds.X_fitted
            cross = np.linalg.norm(ds.X_fitted.T @ resid_mat)
            scale = max(np.linalg.norm(ds.X_fitted)
                        * np.linalg.norm(resid_mat), 1e-300)
            worst_cross = max(worst_cross, float(cross / scale))
            # E_true already carries the sigma factor
            ec = center(ds.E_true)
            pred_resid = ec - fit_predictors(ec, ds.F)
            rel = (np.linalg.norm(resid_mat - pred_resid)
                   / max(np.linalg.norm(resid_mat), 1e-300))
            worst_resid = max(worst_resid, float(rel))
    passed = worst_add < 1e-9 and worst_cross < 1e-9 and worst_resid < 1e-7
    return CheckResult(
        "lemma51_identity", passed,
        {"max_additivity_rel": worst_add, "max_cross_rel": worst_cross,
         "max_residual_factor_rel": worst_resid, "datasets": 200},
        "covariance splits exactly into fitted and residual parts"
        if passed else "covariance split identity violated",
    )


def _check_weyl(seed: int) -> CheckResult:
    gen = RngStream(seed, 0).generator()
    worst = 0.0
    violations = 0
    for _ in range(1000):
        b = symmetrize(gen.standard_normal((6, 6)))
        l_mat = symmetrize(gen.standard_normal((6, 6)))
        wb = weyl_bounds(b, l_mat)
        worst = max(worst, wb.max_violation)
        violations += int(wb.violated)
    passed = violations == 0
    return CheckResult(
        "weyl", passed,
        {"pairs": 1000, "violations": violations, "max_violation": worst},
        "eigenvalue shift bounds hold on all random pairs"
        if passed else "eigenvalue shift bound violated",
    )


def _check_eq8_tail(seed: int) -> CheckResult:
    u = v = 20
    draws = 10000
    lam = sample_wishart_lambda1(u, v, RngStream(seed, 0), draws)
    results = {}
    ok = True
    for t in (0.5, 1.0, 2.0, 3.0):
        level = wishart_lambda1_tail_level(u, v, t)
        emp = float(np.mean(lam >= level))
        bound = wishart_lambda1_tail_bound(u, v, t)
        se = math.sqrt(max(emp * (1 - emp), 1e-12) / draws)
        good = emp <= bound + 2 * se
        ok = ok and good
        results[f"t={t:g}"] = {"empirical": emp, "bound": bound,
                               "se": se, "ok": good}
    return CheckResult(
        "eq8_tail", ok,
        {"u": u, "v": v, "draws": draws, "levels": results},
        "largest-eigenvalue tail stays under the Gaussian bound"
        if ok else "empirical tail exceeds the bound",
    )


def _check_geman(seed: int) -> CheckResult:
    u, v = 1000, 2000
    target = (1.0 + math.sqrt(u / v)) ** 2
    ratios = []
    ok = True
    for k in range(10):
        lam = float(sample_wishart_lambda1(u, v, RngStream(seed, k)))
        ratio = lam / v
        ratios.append(ratio)
        ok = ok and abs(ratio - target) / target < 0.05
    return CheckResult(
        "geman", ok,
        {"u": u, "v": v, "target": target, "ratios": ratios,
         "rel_tol": 0.05},
        "scaled largest eigenvalue sits at the almost-sure limit"
        if ok else "largest eigenvalue strays from the limit",
    )


def _check_thm24_ks(seed: int) -> CheckResult:
    spec = ModelSpec.univariate(p=10, n=40)
    reps = 10000
    truth = Basis(spec.gamma, kind="true")
    pipeline = np.empty(reps)
    for rep in range(reps):
        ds = simulate(spec, RngStream(seed, rep))
        pipeline[rep] = theta(pfc(ds, spec.d), truth).theta_rad
    direct = sample_pfc_angles(
        spec.p, spec.d, spec.r, spec.sigma, spec.sigma_y, spec.n,
        RngStream(seed, _DIRECT_STREAM_BASE), reps,
    )
    ks = sp_stats.ks_2samp(pipeline, direct)
    passed = ks.pvalue >= 0.01
    return CheckResult(
        "thm24_ks", passed,
        {"reps": reps, "ks_stat": float(ks.statistic),
         "p_value": float(ks.pvalue)},
        "pipeline angles match the closed-form law"
        if passed else "pipeline angle distribution rejected against the law",
    )


def _check_thm33_coverage(seed: int) -> CheckResult:
    spec = ModelSpec.univariate(p=10, n=10000)
    alpha = 0.1
    reps = 5000
    k1 = 0.9 * spec.sigma_y**2
    k2 = 1.1 * spec.sigma_y**2
    report = confidence_report(alpha, spec.n, k1, k2, spec)
    truth = Basis(spec.gamma, kind="true")
    upper_viol = 0
    lower_viol = 0
    for rep in range(reps):
        ds = simulate(spec, RngStream(seed, rep))
        ang = theta(pfc(ds, spec.d), truth).theta_rad
        if report.theta_plus_rad is not None and ang > report.theta_plus_rad:
            upper_viol += 1
        if report.theta_minus_rad is not None and ang < report.theta_minus_rad:
            lower_viol += 1
    se = math.sqrt(alpha * (1 - alpha) / reps)
    limit = alpha + 3 * se
    rate_up = upper_viol / reps
    rate_lo = lower_viol / reps
    scaled = []
    for m in (10000, 40000, 160000):
        rep_m = confidence_report(alpha, m, k1, k2, spec.replace(n=m))
        scaled.append(math.degrees(rep_m.theta_plus_rad) * math.sqrt(m))
    spread = (max(scaled) - min(scaled)) / min(scaled)
    passed = rate_up <= limit and rate_lo <= limit and spread < 0.10
    return CheckResult(
        "thm33_coverage", passed,
        {"reps": reps, "alpha": alpha,
         "upper_violation_rate": rate_up, "lower_violation_rate": rate_lo,
         "rate_limit": limit,
         "lower_limit_defined": report.theta_minus_rad is not None,
         "scaled_upper_deg": scaled, "scaled_spread": spread},
        "confidence limits cover at the nominal rate and scale like 1/sqrt(n)"
        if passed else "coverage or scaling of the confidence limits failed",
    )


def _check_lemmaA2(seed: int) -> CheckResult:
    gen = RngStream(seed, 0).generator()
    triples = []
    ok = True
    for k in range(20):
        n = int(gen.integers(8, 17))
        m = int(gen.integers(6, 10))
        k1 = int(gen.integers(1, 4))
        k2 = int(gen.integers(1, 4))
        g = int(gen.integers(1, n))
        w = gen.standard_normal((m, k1))
        raw = gen.standard_normal((m, k2))
        coef, *_ = np.linalg.lstsq(w, raw, rcond=None)
        v = raw - w @ coef
        p_mat = projector(gen.standard_normal((n, g)))
        res = projected_trace_check(p_mat, w, v, RngStream(seed, k + 1),
                                    reps=10000)
        dev = abs(res.sample_mean - res.predicted)
        good = dev <= 4 * res.std_error
        ok = ok and good
        triples.append({"n": n, "m": m, "k1": k1, "k2": k2, "rank": g,
                        "mean": res.sample_mean, "predicted": res.predicted,
                        "se": res.std_error, "ok": good})
    return CheckResult(
        "lemmaA2", ok,
        {"cases": triples},
        "projected trace statistic matches its expectation"
        if ok else "projected trace expectation violated",
    )


def _check_sandwich(seed: int) -> CheckResult:
    tol = 1e-8
    worst = 0.0
    stream = 0
    for spec in _mixed_specs(n=50):
        for _ in range(50):
            ds = simulate(spec, RngStream(seed, stream))
            stream += 1
            fitted, noise = split_covariance(ds)
            wb = weyl_bounds(fitted, noise)
            worst = max(worst, wb.max_violation)
            lower_gap = float(np.max(wb.lower - wb.observed))
            worst = max(worst, lower_gap)
    passed = worst <= tol
    return CheckResult(
        "sandwich", passed,
        {"datasets": 200, "max_violation": worst, "tol": tol},
        "total-covariance eigenvalues stay inside the fitted-plus-noise sandwich"
        if passed else "eigenvalue sandwich violated",
    )


_SUITES = {
    "lemma22_span": _check_lemma22_span,
    "lemma23_moments": _check_lemma23_moments,
    "lemma31_moments": _check_lemma31_moments,
    "lemma51_identity": _check_lemma51_identity,
    "weyl": _check_weyl,
    "eq8_tail": _check_eq8_tail,
    "geman": _check_geman,
    "thm24_ks": _check_thm24_ks,
    "thm33_coverage": _check_thm33_coverage,
    "lemmaA2": _check_lemmaA2,
    "sandwich": _check_sandwich,
}

CHECK_SUITES = tuple(sorted(_SUITES))


def run_checks(suite: str, seed: int) -> CheckResult:
    """Run one named check suite with a fixed seed."""
    if suite not in _SUITES:
        raise UnknownSuite(
            f"unknown suite {suite!r}; available: {', '.join(CHECK_SUITES)}"
        )
    if not (0 <= int(seed) < 2**64):
        raise InvalidParam("seed out of range")
    return _SUITES[suite](int(seed))


# ---------------------------------------------------------------------------
# bound report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundReport:
    """All closed-form limits for one model spec at one confidence level."""

    alpha: float
    spec: ModelSpec
    lambda_expected: float
    k1_default: float
    k2_default: float
    theta_plus_deg: float | None
    theta_minus_deg: float | None
    consistency: dict | None
    m_asymptotic: float | None
    crossing_tail: float | None
    pc_penalty_bound_deg: float | None
    pc_penalty_approx_deg: float

    def to_json_dict(self) -> dict:
        doc = {
            "alpha": self.alpha,
            "model": self.spec.to_json_dict(),
            "lambda_expected": self.lambda_expected,
            "k1_default": self.k1_default,
            "k2_default": self.k2_default,
            "theta_plus_deg": self.theta_plus_deg,
            "theta_minus_deg": self.theta_minus_deg,
            "consistency": self.consistency,
            "m_asymptotic": self.m_asymptotic,
            "crossing_tail": self.crossing_tail,
            "pc_penalty_bound_deg": self.pc_penalty_bound_deg,
            "pc_penalty_approx_deg": self.pc_penalty_approx_deg,
        }
        return _jsonable(doc)


def bound_report(spec: ModelSpec, alpha: float) -> BoundReport:
    """Evaluate every closed-form bound for ``spec``; undefined ones are None."""
    if spec.sigma <= 0:
        raise InvalidParam("bound reports need a positive noise scale")
    phi = signal_cov_limit(spec)
    tr_phi = float(np.trace(phi))
    lam = spec.n * tr_phi / spec.sigma**2
    k1 = 0.9 * tr_phi
    k2 = 1.1 * tr_phi
    ci = confidence_report(alpha, spec.n, k1, k2, spec)
    theta_plus = (math.degrees(ci.theta_plus_rad)
                  if ci.theta_plus_rad is not None else None)
    theta_minus = (math.degrees(ci.theta_minus_rad)
                   if ci.theta_minus_rad is not None else None)
    phi_eigs = np.sort(np.linalg.eigvalsh(phi))[::-1]
    try:
        cc = consistency_constants(phi_eigs, spec.sigma, spec.r, spec.p, alpha)
        consistency = {
            "delta": cc.delta, "a": cc.a, "k1": cc.k1, "k2": cc.k2,
            "big_k": cc.big_k,
            "theta_star_deg": math.degrees(cc.theta_star(spec.n)),
        }
    except DegenerateSpectrum:
        consistency = None
    if spec.d == spec.r:
        m_asym = min_level_spacing(spec.n * phi_eigs, spec.r)
        tail = crossing_tail_bound(m_asym, spec.sigma, spec.n, spec.p) \
            if m_asym > 0 else 1.0
    else:
        m_asym = None
        tail = None
    theta_pfc = math.radians(theta_plus) if theta_plus is not None else 0.0
    try:
        pen = pc_angle_bound(theta_pfc, spec.sigma, spec.sigma_y,
                             spec.n, spec.p)
        pen_deg = math.degrees(pen - theta_pfc)
    except BoundUndefined:
        pen_deg = None
    approx = pc_angle_approx(theta_pfc, spec.sigma, spec.sigma_y,
                             spec.n, spec.p)
    return BoundReport(
        alpha=float(alpha), spec=spec, lambda_expected=lam,
        k1_default=k1, k2_default=k2,
        theta_plus_deg=theta_plus, theta_minus_deg=theta_minus,
        consistency=consistency, m_asymptotic=m_asym, crossing_tail=tail,
        pc_penalty_bound_deg=pen_deg,
        pc_penalty_approx_deg=math.degrees(approx - theta_pfc),
    )
