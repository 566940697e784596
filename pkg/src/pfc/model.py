"""Inverse-regression data model: specification, simulation, and fitting.

The generative model is X = mu + Gamma·beta·f(y) + sigma·eps, with Gamma a
column-orthonormal p×d matrix, beta a full-rank d×r coefficient matrix,
f(y) an r-vector of centered response features, and eps unit-variance
errors. Simulation, centering, and regression onto the feature matrix F
produce the fitted predictor matrix whose Gram matrix drives estimation.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    DegenerateResponses,
    DimensionMismatch,
    InvalidParam,
    NonFinite,
    RankDeficient,
)
from .matkit import as_matrix, inv_sqrt_spd, require_finite, symmetrize
from .randsrc import as_generator

FY_POLYNOMIAL = "polynomial"
FY_SLICES = "slices"
ERROR_GAUSSIAN = "gaussian"
ERROR_SYMMETRIC = "symmetric"

_GAUSSIAN_M4 = 3.0


def _canonical_basis(p: int, d: int) -> np.ndarray:
    return np.eye(p, d)


@dataclass(frozen=True)
class ModelSpec:
    """Complete description of one simulated regression problem.

    ``beta`` defaults to ones on the diagonal positions (scalar 1 in the
    univariate case) and ``gamma`` to the first d canonical basis vectors;
    ``error_kind`` is either ``"gaussian"`` or ``"symmetric"`` with a
    selectable fourth moment ``m4`` >= 1.
    """

    p: int
    d: int
    r: int
    n: int
    sigma: float = 1.0
    sigma_y: float = 1.0
    beta: np.ndarray | None = None
    gamma: np.ndarray | None = None
    mu: np.ndarray | None = None
    fy_kind: str = FY_POLYNOMIAL
    error_kind: str = ERROR_GAUSSIAN
    m4: float | None = None

    def __post_init__(self):
        for name in ("p", "d", "r", "n"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value < 1:
                raise InvalidParam(f"{name} must be a positive integer")
            object.__setattr__(self, name, int(value))
        if self.d >= self.p:
            raise InvalidParam("need d < p")
        if self.d > self.r:
            raise InvalidParam("need d <= r")
        if not (self.sigma >= 0 and math.isfinite(self.sigma)):
            raise InvalidParam("sigma must be nonnegative and finite")
        if not (self.sigma_y > 0 and math.isfinite(self.sigma_y)):
            raise InvalidParam("sigma_y must be positive and finite")
        if self.fy_kind not in (FY_POLYNOMIAL, FY_SLICES):
            raise InvalidParam(f"unknown fy_kind {self.fy_kind!r}")

        beta = np.eye(self.d, self.r) if self.beta is None else as_matrix(self.beta, "beta")
        if beta.shape != (self.d, self.r):
            raise DimensionMismatch(f"beta must be {self.d}x{self.r}, got {beta.shape}")
        require_finite(beta, "beta")
        sv = np.linalg.svd(beta, compute_uv=False)
        if sv[-1] <= 1e-10 * sv[0]:
            raise RankDeficient("beta must have full row rank")
        object.__setattr__(self, "beta", beta)

        gamma = _canonical_basis(self.p, self.d) if self.gamma is None else as_matrix(self.gamma, "gamma")
        if gamma.shape != (self.p, self.d):
            raise DimensionMismatch(f"gamma must be {self.p}x{self.d}, got {gamma.shape}")
        require_finite(gamma, "gamma")
        if np.max(np.abs(gamma.T @ gamma - np.eye(self.d))) > 1e-10:
            raise InvalidParam("gamma columns must be orthonormal")
        object.__setattr__(self, "gamma", gamma)

        mu = np.zeros(self.p) if self.mu is None else np.asarray(self.mu, dtype=float)
        if mu.shape != (self.p,):
            raise DimensionMismatch(f"mu must have shape ({self.p},)")
        require_finite(mu, "mu")
        object.__setattr__(self, "mu", mu)

        if self.error_kind == ERROR_GAUSSIAN:
            if self.m4 is not None:
                raise InvalidParam("m4 is only meaningful for symmetric errors")
        elif self.error_kind == ERROR_SYMMETRIC:
            if self.m4 is None or not (self.m4 >= 1 and math.isfinite(self.m4)):
                raise InvalidParam("symmetric errors need a finite m4 >= 1")
        else:
            raise InvalidParam(f"unknown error_kind {self.error_kind!r}")

    @property
    def error_m4(self) -> float:
        """Fourth moment of one error coordinate."""
        return _GAUSSIAN_M4 if self.error_kind == ERROR_GAUSSIAN else float(self.m4)

    def replace(self, **overrides) -> "ModelSpec":
        return dataclasses.replace(self, **overrides)

    @classmethod
    def univariate(cls, p: int = 10, n: int = 40, sigma: float = 1.0,
                   sigma_y: float = 1.0, **extra) -> "ModelSpec":
        """Scalar-signal default: d = r = 1, beta = 1, gamma = e1."""
        return cls(p=p, d=1, r=1, n=n, sigma=sigma, sigma_y=sigma_y, **extra)

    def to_json_dict(self) -> dict:
        doc = {
            "p": self.p,
            "d": self.d,
            "r": self.r,
            "n": self.n,
            "sigma": self.sigma,
            "sigma_y": self.sigma_y,
            "beta": [float(x) for x in self.beta.ravel(order="C")],
            "gamma": [float(x) for x in self.gamma.ravel(order="C")],
            "fy_kind": self.fy_kind,
            "error_kind": ("gaussian" if self.error_kind == ERROR_GAUSSIAN
                           else {"m4": float(self.m4)}),
        }
        return doc

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ModelSpec":
        if not isinstance(doc, dict):
            raise InvalidParam("model spec document must be a JSON object")
        required = ("p", "d", "r", "n", "sigma", "sigma_y", "beta")
        missing = [key for key in required if key not in doc]
        if missing:
            raise InvalidParam(f"model spec is missing keys: {missing}")
        known = set(required) | {"gamma", "fy_kind", "error_kind"}
        unknown = sorted(set(doc) - known)
        if unknown:
            raise InvalidParam(f"model spec has unknown keys: {unknown}")
        p, d, r, n = (doc[key] for key in ("p", "d", "r", "n"))
        for key, value in (("p", p), ("d", d), ("r", r), ("n", n)):
            if not isinstance(value, int):
                raise InvalidParam(f"{key} must be an integer")
        beta = _matrix_from_json(doc["beta"], d, r, "beta")
        gamma = None
        if "gamma" in doc and doc["gamma"] is not None:
            gamma = _matrix_from_json(doc["gamma"], p, d, "gamma")
        error_kind, m4 = _error_kind_from_json(doc.get("error_kind", "gaussian"))
        return cls(
            p=p, d=d, r=r, n=n,
            sigma=float(doc["sigma"]), sigma_y=float(doc["sigma_y"]),
            beta=beta, gamma=gamma,
            fy_kind=doc.get("fy_kind", FY_POLYNOMIAL),
            error_kind=error_kind, m4=m4,
        )


def _matrix_from_json(value, rows: int, cols: int, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 1:
        if arr.size != rows * cols:
            raise InvalidParam(f"{name} must have {rows * cols} entries (row-major)")
        arr = arr.reshape(rows, cols)
    elif arr.shape != (rows, cols):
        raise InvalidParam(f"{name} must be {rows}x{cols}")
    return arr


def _error_kind_from_json(value) -> tuple[str, float | None]:
    if value == "gaussian":
        return ERROR_GAUSSIAN, None
    if isinstance(value, dict) and set(value) == {"m4"}:
        return ERROR_SYMMETRIC, float(value["m4"])
    raise InvalidParam('error_kind must be "gaussian" or {"m4": value}')


@dataclass(frozen=True)
class Dataset:
    """One simulated sample plus the derived matrices estimation needs.

    ``E_true`` retains the realized error matrix so tests can check
    identities exactly; estimators never look at it.
    """

    y: np.ndarray
    F: np.ndarray
    X_raw: np.ndarray
    X_centered: np.ndarray
    X_fitted: np.ndarray
    E_true: np.ndarray

    @property
    def n(self) -> int:
        return self.X_raw.shape[0]

    @property
    def p(self) -> int:
        return self.X_raw.shape[1]

    @property
    def r(self) -> int:
        return self.F.shape[1]


@dataclass(frozen=True)
class VMatrix:
    """Whitened regression coordinates V with V·Vᵀ equal to the fitted Gram."""

    V: np.ndarray

    @property
    def p(self) -> int:
        return self.V.shape[0]

    @property
    def r(self) -> int:
        return self.V.shape[1]


def build_fy(y, kind: str, r: int) -> np.ndarray:
    """Centered response-feature matrix with r columns.

    ``polynomial``: column u is y**u minus its sample mean. ``slices``:
    responses are split into r+1 equal-count bins by sorted order and the
    centered indicators of the upper r bins (ascending) are kept, so the
    columns sum to zero.
    """
    yv = np.asarray(y, dtype=float).ravel()
    if not np.all(np.isfinite(yv)):
        raise NonFinite("responses contain non-finite values")
    n = yv.size
    if not isinstance(r, (int, np.integer)) or r < 1:
        raise InvalidParam("r must be a positive integer")
    if n <= r:
        raise InvalidParam(f"need n > r, got n={n}, r={r}")
    if kind == FY_POLYNOMIAL:
        powers = np.column_stack([yv**u for u in range(1, r + 1)])
        f = powers - powers.mean(axis=0)
    elif kind == FY_SLICES:
        if n < 2 * (r + 1):
            raise InvalidParam(f"slices need n >= 2(r+1), got n={n}, r={r}")
        order = np.argsort(yv, kind="stable")
        chunks = np.array_split(order, r + 1)
        f = np.zeros((n, r))
        for j, chunk in enumerate(chunks[1:]):
            f[chunk, j] = 1.0
        f = f - f.mean(axis=0)
    else:
        raise InvalidParam(f"unknown feature kind {kind!r}")
    sv = np.linalg.svd(f, compute_uv=False)
    if sv[0] == 0.0 or sv[min(n, r) - 1] <= 1e-10 * sv[0]:
        raise DegenerateResponses("responses do not span the feature space")
    return f


def center(x) -> np.ndarray:
    """Column-centered copy of a data matrix."""
    m = as_matrix(x, "data matrix")
    require_finite(m, "data matrix")
    return m - m.mean(axis=0)


def fit_predictors(x_centered, f) -> np.ndarray:
    """Projection of the centered predictors onto the feature column space.

    Computed as F·solve(FᵀF, Fᵀ·X) so no n×n projector is materialized;
    identical to applying the orthogonal projector onto span(F).
    """
    xc = as_matrix(x_centered, "centered predictors")
    fm = as_matrix(f, "feature matrix")
    if xc.shape[0] != fm.shape[0]:
        raise DimensionMismatch(
            f"row counts differ: X has {xc.shape[0]}, F has {fm.shape[0]}"
        )
    gram = symmetrize(fm.T @ fm)
    eigs = np.linalg.eigvalsh(gram)
    if eigs[0] <= 1e-10 * max(eigs[-1], 0.0) or eigs[-1] <= 0.0:
        raise RankDeficient("feature matrix does not have full column rank")
    return fm @ np.linalg.solve(gram, fm.T @ xc)


@lru_cache(maxsize=32)
def _mixture_params(m4: float) -> tuple[float, float, float]:
    """(rademacher prob, rademacher scale, gaussian scale) hitting m4 exactly."""
    if m4 <= 3.0:
        return (3.0 - m4) / 2.0, 1.0, 1.0
    b = 2.0 * m4 - 5.5
    q = (-b + math.sqrt(b * b - 4.0 * (6.0 - 2.0 * m4))) / 2.0
    tau = math.sqrt((1.0 - q / 2.0) / (1.0 - q))
    return q, math.sqrt(0.5), tau


def _draw_errors(spec: ModelSpec, gen: np.random.Generator, shape) -> np.ndarray:
    if spec.error_kind == ERROR_GAUSSIAN:
        return gen.standard_normal(shape)
    q, rad_scale, gauss_scale = _mixture_params(spec.error_m4)
    pick = gen.random(shape) < q
    signs = np.where(gen.random(shape) < 0.5, -1.0, 1.0)
    gauss = gen.standard_normal(shape)
    return np.where(pick, rad_scale * signs, gauss_scale * gauss)


def simulate(spec: ModelSpec, rng, *, response_sampler=None) -> Dataset:
    """Draw one dataset from the model.

    ``rng`` may be an integer seed, an RngStream, or a Generator. The
    response law defaults to normal(0, sigma_y²); ``response_sampler``
    (a callable of (generator, n)) substitutes any other law.
    """
    gen = as_generator(rng)
    if response_sampler is None:
        y = gen.normal(0.0, spec.sigma_y, spec.n)
    else:
        y = np.asarray(response_sampler(gen, spec.n), dtype=float)
        if y.shape != (spec.n,):
            raise InvalidParam("response sampler must return n values")
    return simulate_given_responses(spec, y, gen)


def simulate_given_responses(spec: ModelSpec, y, rng) -> Dataset:
    """Draw the error part of a dataset with the responses held fixed."""
    gen = as_generator(rng)
    yv = np.asarray(y, dtype=float).ravel()
    if yv.size != spec.n:
        raise DimensionMismatch(f"expected {spec.n} responses, got {yv.size}")
    f = build_fy(yv, spec.fy_kind, spec.r)
    errors = spec.sigma * _draw_errors(spec, gen, (spec.n, spec.p))
    x_raw = spec.mu + f @ spec.beta.T @ spec.gamma.T + errors
    x_centered = center(x_raw)
    x_fitted = fit_predictors(x_centered, f)
    return Dataset(y=yv, F=f, X_raw=x_raw, X_centered=x_centered,
                   X_fitted=x_fitted, E_true=errors)


def v_matrix(dataset: Dataset) -> VMatrix:
    """Whitened coordinates V = (X̂ᵀF)·(FᵀF)^(−1/2).

    The same matrix computed from the centered predictors must agree with
    the fitted-predictor route to within 1e-9 relative; both are checked
    here, as is V·Vᵀ against the fitted Gram matrix.
    """
    f = dataset.F
    gram = symmetrize(f.T @ f)
    whitener = inv_sqrt_spd(gram)
    v_fitted = (whitener @ (f.T @ dataset.X_fitted)).T
    v_centered = (whitener @ (f.T @ dataset.X_centered)).T
    scale = max(1.0, float(np.max(np.abs(v_fitted))))
    if float(np.max(np.abs(v_fitted - v_centered))) > 1e-9 * scale:
        raise InvalidParam("whitened coordinate routes disagree; dataset is inconsistent")
    fitted_gram = symmetrize(dataset.X_fitted.T @ dataset.X_fitted)
    vvt = v_fitted @ v_fitted.T
    gram_scale = max(1.0, float(np.max(np.abs(fitted_gram))))
    if float(np.max(np.abs(vvt - fitted_gram))) > 1e-8 * gram_scale:
        raise InvalidParam("V·Vᵀ does not reproduce the fitted Gram matrix")
    return VMatrix(V=v_fitted)
