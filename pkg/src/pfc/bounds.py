"""Closed-form accuracy guarantees for the fitted-component estimator.

The quantities here are exact transcriptions of the moment bounds,
finite-sample confidence limits, consistency constants, and comparison
bounds for the two estimators. Several limits are only defined inside a
validity region; outside it they raise BoundUndefined, which callers
treat as "no bound available" rather than as a failure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BoundUndefined,
    DegenerateSpectrum,
    DimensionMismatch,
    InvalidParam,
    UnsupportedFyKind,
)
from .matkit import as_matrix, require_finite, sym_eig, symmetrize
from .model import FY_POLYNOMIAL, Dataset, ModelSpec, build_fy

HALF_PI = math.pi / 2.0


@dataclass(frozen=True)
class MomentReport:
    """Exact means and variance bounds for the split ‖P·V‖², ‖(I−P)·V‖².

    ``mean_n``/``var_n_bound`` describe the signal part N = ‖P_Γ V‖²_F,
    ``mean_d``/``var_d_bound`` the noise part D = ‖(I−P_Γ) V‖²_F;
    ``t_const`` is the shared fourth-moment constant sigma⁴·r·(m4 − 1).
    The variance bounds hold with equality for Gaussian errors.
    """

    mean_n: float
    var_n_bound: float
    mean_d: float
    var_d_bound: float
    t_const: float
    signal_trace: float


@dataclass(frozen=True)
class CiReport:
    """Two-sided confidence limits for the subspace angle.

    ``theta_minus_rad`` or ``theta_plus_rad`` is None when the printed
    formula is outside its validity region at these parameters.
    """

    alpha: float
    n: int
    k1: float
    k2: float
    theta_plus_rad: float | None
    theta_minus_rad: float | None
    x_plus: float
    x_minus: float
    n_plus_star: float
    n_minus_star: float


@dataclass(frozen=True)
class ConvergenceReport:
    """Deviation of scaled signal-Gram eigenvalues from their limits."""

    phi_eigs: np.ndarray
    deviations: np.ndarray

    @property
    def max_abs_deviation(self) -> float:
        return float(np.max(self.deviations)) if self.deviations.size else 0.0


@dataclass(frozen=True)
class CrossingReport:
    """Level-crossing diagnostics for one dataset.

    ``l1_occurred``: the perturbation spread reached the smallest signal
    eigenvalue. ``l2_occurred``: the residual Gram's top eigenvalue reached
    the minimal fitted-spectrum spacing M; ``l2_tail`` bounds that event.
    """

    min_spacing_m: float
    noise_lambda1: float
    l1_occurred: bool
    l2_occurred: bool
    l2_tail: float


@dataclass(frozen=True)
class ConsistencyConstants:
    """Constants of the general d <= r consistency guarantee.

    ``theta_star(n)`` = arcsin(min(1, big_k/√n)) is the high-probability
    angle envelope at confidence 1 − alpha.
    """

    alpha: float
    delta: float
    a: float
    k1: float
    k2: float
    big_k: float

    def theta_star(self, n: int) -> float:
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise InvalidParam("n must be a positive integer")
        return math.asin(min(1.0, self.big_k / math.sqrt(n)))


def _check_alpha(alpha: float) -> float:
    if not (0.0 < alpha < 1.0):
        raise InvalidParam("alpha must lie in (0, 1)")
    return float(alpha)


def signal_noise_moments(spec: ModelSpec, ftf) -> MomentReport:
    """Moment report for the whitened-coordinate split at a fixed feature Gram."""
    gram = symmetrize(as_matrix(ftf, "feature Gram"))
    require_finite(gram, "feature Gram")
    if gram.shape != (spec.r, spec.r):
        raise DimensionMismatch(f"feature Gram must be {spec.r}x{spec.r}")
    if np.linalg.eigvalsh(gram)[0] < -1e-10 * max(1.0, float(np.max(np.abs(gram)))):
        raise InvalidParam("feature Gram must be positive semidefinite")
    sigma2 = spec.sigma**2
    signal = float(np.trace(spec.beta @ gram @ spec.beta.T))
    t_const = sigma2**2 * spec.r * (spec.error_m4 - 1.0)
    return MomentReport(
        mean_n=signal + spec.r * spec.d * sigma2,
        var_n_bound=spec.d * t_const + 4.0 * sigma2 * signal,
        mean_d=spec.r * (spec.p - spec.d) * sigma2,
        var_d_bound=(spec.p - spec.d) * t_const,
        t_const=t_const,
        signal_trace=signal,
    )


def _deviation_root(alpha: float, n: int, k2: float, t_const: float, d: int) -> float:
    return math.sqrt(3.0 * (t_const * d + 4.0 * k2 * n) / alpha)


def angle_upper_limit(alpha: float, n: int, k1: float, k2: float,
                      moment: MomentReport, spec: ModelSpec) -> float:
    """Upper confidence limit: the angle exceeds it with probability <= alpha.

    Requires the guaranteed signal level k1·n to dominate the deviation
    allowance; otherwise the limit does not exist at these parameters.
    """
    alpha = _check_alpha(alpha)
    if k1 <= 0 or k2 <= 0:
        raise InvalidParam("k1 and k2 must be positive")
    sigma2 = spec.sigma**2
    x_plus = 3.0 * spec.r * (spec.p - spec.d) * sigma2 / alpha
    n_plus_star = k1 * n - _deviation_root(alpha, n, k2, moment.t_const, spec.d)
    if n_plus_star <= 0.0:
        raise BoundUndefined(
            f"signal floor k1*n = {k1 * n:.6g} does not exceed the deviation "
            f"allowance at alpha = {alpha:g}"
        )
    return math.atan(math.sqrt(x_plus / n_plus_star))


def angle_lower_limit(alpha: float, n: int, k1: float, k2: float,
                      moment: MomentReport, spec: ModelSpec) -> float:
    """Lower confidence limit: the angle falls below it with probability <= alpha."""
    alpha = _check_alpha(alpha)
    if k1 <= 0 or k2 <= 0:
        raise InvalidParam("k1 and k2 must be positive")
    sigma2 = spec.sigma**2
    x_minus = sigma2 * spec.r * (spec.p - spec.d) - math.sqrt(
        3.0 * moment.t_const * (spec.p - spec.d) / alpha
    )
    if x_minus <= 0.0:
        raise BoundUndefined(
            f"residual floor is nonpositive at alpha = {alpha:g}; the lower "
            "limit has no value here"
        )
    n_minus_star = (k2 * n + spec.r * spec.d * sigma2
                    + _deviation_root(alpha, n, k2, moment.t_const, spec.d))
    return math.atan(math.sqrt(x_minus / n_minus_star))


def confidence_report(alpha: float, n: int, k1: float, k2: float,
                      spec: ModelSpec) -> CiReport:
    """Both confidence limits plus their building blocks; None where undefined."""
    alpha = _check_alpha(alpha)
    sigma2 = spec.sigma**2
    t_const = sigma2**2 * spec.r * (spec.error_m4 - 1.0)
    moment = MomentReport(mean_n=math.nan, var_n_bound=math.nan, mean_d=math.nan,
                          var_d_bound=math.nan, t_const=t_const, signal_trace=math.nan)
    root = _deviation_root(alpha, n, k2, t_const, spec.d)
    x_plus = 3.0 * spec.r * (spec.p - spec.d) * sigma2 / alpha
    x_minus = sigma2 * spec.r * (spec.p - spec.d) - math.sqrt(
        3.0 * t_const * (spec.p - spec.d) / alpha
    )
    try:
        theta_plus = angle_upper_limit(alpha, n, k1, k2, moment, spec)
    except BoundUndefined:
        theta_plus = None
    try:
        theta_minus = angle_lower_limit(alpha, n, k1, k2, moment, spec)
    except BoundUndefined:
        theta_minus = None
    return CiReport(
        alpha=alpha, n=int(n), k1=float(k1), k2=float(k2),
        theta_plus_rad=theta_plus, theta_minus_rad=theta_minus,
        x_plus=x_plus, x_minus=x_minus,
        n_plus_star=k1 * n - root,
        n_minus_star=k2 * n + spec.r * spec.d * sigma2 + root,
    )


def _gaussian_moment(k: int, sigma_y: float) -> float:
    """E[Y^k] for Y ~ normal(0, sigma_y²)."""
    if k % 2 == 1:
        return 0.0
    return float(math.prod(range(k - 1, 0, -2))) * sigma_y**k


def signal_cov_limit(spec: ModelSpec) -> np.ndarray:
    """Limit of beta·(FᵀF/n)·betaᵀ for polynomial features of Gaussian responses.

    The entries of the feature covariance are Cov(Y^u, Y^v) evaluated from
    the closed-form Gaussian moments. Slice features have no closed form
    here; use signal_cov_limit_mc for those.
    """
    if spec.fy_kind != FY_POLYNOMIAL:
        raise UnsupportedFyKind(
            f"no closed-form feature covariance for {spec.fy_kind!r}; "
            "estimate it with signal_cov_limit_mc"
        )
    r = spec.r
    cov = np.empty((r, r))
    for u in range(1, r + 1):
        for v in range(1, r + 1):
            cov[u - 1, v - 1] = (_gaussian_moment(u + v, spec.sigma_y)
                                 - _gaussian_moment(u, spec.sigma_y)
                                 * _gaussian_moment(v, spec.sigma_y))
    return symmetrize(spec.beta @ cov @ spec.beta.T)


def signal_cov_limit_mc(spec: ModelSpec, rng, n_samples: int = 10**6) -> np.ndarray:
    """Monte Carlo estimate of the signal covariance limit for any feature kind."""
    from .randsrc import as_generator

    if n_samples < 2:
        raise InvalidParam("need at least two samples")
    gen = as_generator(rng)
    y = gen.normal(0.0, spec.sigma_y, int(n_samples))
    f = build_fy(y, spec.fy_kind, spec.r)
    return symmetrize(spec.beta @ ((f.T @ f) / n_samples) @ spec.beta.T)


def eig_convergence_report(spec: ModelSpec, datasets) -> ConvergenceReport:
    """Per-dataset deviation of scaled signal-Gram eigenvalues from their limits."""
    phi = np.sort(np.linalg.eigvalsh(signal_cov_limit(spec)))[::-1]
    deviations = []
    for ds in datasets:
        gram = symmetrize(spec.beta @ (ds.F.T @ ds.F) @ spec.beta.T)
        lam = np.sort(np.linalg.eigvalsh(gram))[::-1] / ds.n
        deviations.append(float(np.max(np.abs(lam - phi))))
    return ConvergenceReport(phi_eigs=phi, deviations=np.asarray(deviations))


def min_level_spacing(values, r: int) -> float:
    """Minimal spacing among the top r levels, with a structural zero appended.

    ``values`` are descending eigenvalues; the (r+1)-th level is defined to
    be exactly zero regardless of any supplied trailing values.
    """
    lam = np.asarray(values, dtype=float).ravel()
    if not isinstance(r, (int, np.integer)) or r < 1:
        raise InvalidParam("r must be a positive integer")
    if lam.size < r:
        raise InvalidParam(f"need at least {r} eigenvalues, got {lam.size}")
    require_finite(lam, "eigenvalues")
    padded = np.concatenate([lam[:r], [0.0]])
    return float(np.min(padded[:-1] - padded[1:]))


def first_level_crossing(spec: ModelSpec, ftf, l_matrix) -> bool:
    """Whether the perturbation spread reaches the smallest signal eigenvalue."""
    gram = symmetrize(as_matrix(ftf, "feature Gram"))
    if gram.shape != (spec.r, spec.r):
        raise DimensionMismatch(f"feature Gram must be {spec.r}x{spec.r}")
    pert = symmetrize(as_matrix(l_matrix, "perturbation"))
    if pert.shape != (spec.p, spec.p):
        raise DimensionMismatch(f"perturbation must be {spec.p}x{spec.p}")
    signal_eigs = np.linalg.eigvalsh(symmetrize(spec.beta @ gram @ spec.beta.T))
    pert_eigs = np.linalg.eigvalsh(pert)
    spread = float(pert_eigs[-1] - pert_eigs[0])
    return spread >= float(signal_eigs[0])


def crossing_tail_bound(m: float, sigma: float, n: int, p: int) -> float:
    """Tail bound for the residual Gram's top eigenvalue reaching level m.

    Returns exp(−(√m/sigma − √n − √p)²/2) when √m/sigma > √n + √p and the
    vacuous value 1 otherwise.
    """
    if not (m > 0 and math.isfinite(m)):
        raise InvalidParam("m must be positive and finite")
    if not (sigma > 0 and math.isfinite(sigma)):
        raise InvalidParam("sigma must be positive and finite")
    if n < 1 or p < 1:
        raise InvalidParam("n and p must be positive")
    slack = math.sqrt(m) / sigma - math.sqrt(n) - math.sqrt(p)
    if slack <= 0.0:
        return 1.0
    return math.exp(-0.5 * slack * slack)


def pc_shift_bound(m: float, noise_norm: float, sigma: float, n: int, p: int) -> float:
    """Expected-angle bound between the two estimators given no level crossing.

    Returns π/2 when the spacing m does not dominate the residual norm, in
    which case nothing nontrivial can be said.
    """
    if not (m > 0 and math.isfinite(m)):
        raise InvalidParam("m must be positive and finite")
    if noise_norm < 0 or sigma < 0:
        raise InvalidParam("noise_norm and sigma must be nonnegative")
    if n < 1 or p < 1:
        raise InvalidParam("n and p must be positive")
    if m <= noise_norm:
        return HALF_PI
    return math.atan(sigma**2 * math.sqrt(n * p) / (m - noise_norm))


def pc_angle_bound(theta_pfc_rad: float, sigma: float, sigma_y: float,
                   n: int, p: int) -> float:
    """Expected-angle bound for the unsupervised estimator against the truth.

    Only valid when the signal variance sigma_y² strictly exceeds the error
    variance sigma²; outside that region the bound does not exist.
    """
    if not (0.0 <= theta_pfc_rad <= HALF_PI):
        raise InvalidParam("theta_pfc_rad must lie in [0, pi/2]")
    if sigma < 0 or sigma_y <= 0 or n < 1 or p < 1:
        raise InvalidParam("invalid bound parameters")
    gap = sigma_y**2 - sigma**2
    if gap <= 0.0:
        raise BoundUndefined("requires sigma_y^2 > sigma^2")
    shift = math.atan(sigma**2 * math.sqrt(p) / (math.sqrt(n) * gap))
    return min(max(theta_pfc_rad + shift, 0.0), HALF_PI)


def pc_angle_approx(theta_pfc_rad: float, sigma: float, sigma_y: float,
                    n: int, p: int) -> float:
    """Simplified expected-angle approximation for the unsupervised estimator."""
    if not (0.0 <= theta_pfc_rad <= HALF_PI):
        raise InvalidParam("theta_pfc_rad must lie in [0, pi/2]")
    if sigma < 0 or sigma_y <= 0 or n < 1 or p < 1:
        raise InvalidParam("invalid bound parameters")
    shift = math.atan(sigma**2 * math.sqrt(p) / (math.sqrt(n) * sigma_y**2))
    return min(max(theta_pfc_rad + shift, 0.0), HALF_PI)


def consistency_constants(phi_eigs, sigma: float, r: int, p: int,
                          alpha: float) -> ConsistencyConstants:
    """Constants of the root-n consistency guarantee for d <= r.

    ``phi_eigs`` are the descending eigenvalues of the signal covariance
    limit; their spacings (with a trailing zero appended) must be strictly
    positive. delta is one tenth of the minimal spacing, which guarantees
    the separation constant ``a`` is positive.
    """
    alpha = _check_alpha(alpha)
    if not (sigma > 0 and math.isfinite(sigma)):
        raise InvalidParam("sigma must be positive and finite")
    if r < 1 or p < 2:
        raise InvalidParam("need r >= 1 and p >= 2")
    phi = np.asarray(phi_eigs, dtype=float).ravel()
    if phi.size < 1:
        raise InvalidParam("phi_eigs must be nonempty")
    require_finite(phi, "phi_eigs")
    padded = np.concatenate([phi, [0.0]])
    spacings = padded[:-1] - padded[1:]
    if np.min(spacings) <= 0.0:
        raise DegenerateSpectrum("spectrum spacings must be strictly positive")
    delta = float(np.min(spacings)) / 10.0
    phi1 = float(phi[0])
    phid = float(phi[-1])
    a = (math.sqrt(4.0 * phi1 + phid - 5.0 * delta)
         - 2.0 * math.sqrt(phi1 + delta)) / sigma
    t = math.sqrt(2.0 * math.log(3.0 / alpha))
    k1 = (math.sqrt(p) + math.sqrt(r) + t) ** 2
    k2 = phi1 + delta
    big_k = 10.0 * (4.0 * sigma * math.sqrt(k1 * k2) + sigma**2 * k1) / delta
    return ConsistencyConstants(alpha=alpha, delta=delta, a=a, k1=k1, k2=k2,
                                big_k=big_k)


def crossing_report(spec: ModelSpec, dataset: Dataset) -> CrossingReport:
    """Level-crossing diagnostics for one simulated dataset."""
    fitted = symmetrize(dataset.X_fitted.T @ dataset.X_fitted)
    residual = dataset.X_centered - dataset.X_fitted
    noise = symmetrize(residual.T @ residual)
    fitted_eigs = sym_eig(fitted).values
    m = min_level_spacing(fitted_eigs, dataset.r)
    noise_lambda1 = float(np.linalg.eigvalsh(noise)[-1])
    ftf = dataset.F.T @ dataset.F
    signal = symmetrize(spec.gamma @ spec.beta @ ftf @ spec.beta.T @ spec.gamma.T)
    l1 = first_level_crossing(spec, ftf, fitted - signal)
    if spec.sigma == 0.0:
        tail = 0.0
    elif m > 0:
        tail = crossing_tail_bound(m, spec.sigma, dataset.n, dataset.p)
    else:
        tail = 1.0
    return CrossingReport(
        min_spacing_m=m,
        noise_lambda1=noise_lambda1,
        l1_occurred=l1,
        l2_occurred=noise_lambda1 >= m,
        l2_tail=tail,
    )
