"""Reproducible random streams and the direct angle-law samplers.

Replications are keyed by (seed, stream_id): identical keys reproduce
identical draws, distinct stream ids give statistically independent
streams, so replication work can be sharded across workers and reduced in
stream-id order without changing any result.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParam
from .metrics import AngleSample, angle_from_split

_MAX_KEY = 2**64


class RngStream:
    """A named, reproducible random stream.

    The underlying generator is created lazily and exactly once per
    instance; a stream object is single-owner and should not be shared
    between concurrent consumers.
    """

    __slots__ = ("seed", "stream_id", "_generator")

    def __init__(self, seed: int, stream_id: int = 0):
        for name, value in (("seed", seed), ("stream_id", stream_id)):
            if not isinstance(value, (int, np.integer)):
                raise InvalidParam(f"{name} must be an integer")
            if not 0 <= int(value) < _MAX_KEY:
                raise InvalidParam(f"{name} must fit in 64 unsigned bits")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        self._generator = None

    def generator(self) -> np.random.Generator:
        if self._generator is None:
            seq = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
            self._generator = np.random.default_rng(seq)
        return self._generator

    def child(self, stream_id: int) -> "RngStream":
        return RngStream(self.seed, stream_id)

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"


def as_generator(rng) -> np.random.Generator:
    """Accept an RngStream, a Generator, or a plain integer seed."""
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, (int, np.integer)):
        return RngStream(int(rng)).generator()
    raise InvalidParam(f"cannot interpret {type(rng).__name__} as a random source")


@dataclass(frozen=True)
class AngleLawParams:
    """Parameters of the exact angle law for the fitted-component estimator.

    Conditional on the feature Gram matrix, (p−d)·C/d follows a noncentral
    F distribution with (r·d, r·(p−d)) degrees of freedom and noncentrality
    ``lambda_nc``; the law requires d = r.
    """

    p: int
    d: int
    r: int
    sigma: float
    lambda_nc: float

    def __post_init__(self):
        if self.d != self.r:
            raise InvalidParam("the exact angle law requires d = r")
        if not 1 <= self.d < self.p:
            raise InvalidParam("need 1 <= d < p")
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise InvalidParam("sigma must be positive and finite")
        if not (self.lambda_nc >= 0 and math.isfinite(self.lambda_nc)):
            raise InvalidParam("lambda_nc must be nonnegative and finite")

    @property
    def dof_num(self) -> int:
        return self.r * self.d

    @property
    def dof_den(self) -> int:
        return self.r * (self.p - self.d)


def sample_noncentral_chi2(k: int, lam, rng, size=None):
    """Noncentral chi-square draws: one shifted squared normal plus k−1 central."""
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise InvalidParam("degrees of freedom k must be a positive integer")
    lam = np.asarray(lam, dtype=float)
    if np.any(lam < 0) or not np.all(np.isfinite(lam)):
        raise InvalidParam("noncentrality must be nonnegative and finite")
    gen = as_generator(rng)
    shifted = gen.normal(loc=np.sqrt(lam), scale=1.0, size=size) ** 2
    if k > 1:
        shifted = shifted + gen.chisquare(k - 1, size=size)
    if size is None and np.ndim(shifted) == 0:
        return float(shifted)
    return shifted


def sample_noncentral_f(d1: int, d2: int, lam, rng, size=None):
    """Noncentral F draws: scaled noncentral over central chi-square ratio."""
    if not isinstance(d2, (int, np.integer)) or d2 < 1:
        raise InvalidParam("denominator degrees of freedom must be positive")
    gen = as_generator(rng)
    num = sample_noncentral_chi2(d1, lam, gen, size=size)
    den = gen.chisquare(d2, size=size)
    out = (np.asarray(num) / d1) / (np.asarray(den) / d2)
    if size is None and np.ndim(out) == 0:
        return float(out)
    return out


def sample_angle_fixed_lambda(params: AngleLawParams, rng, size=None):
    """Angle draws from the exact law at a fixed noncentrality, in radians."""
    f = sample_noncentral_f(params.dof_num, params.dof_den, params.lambda_nc, rng, size=size)
    c = np.asarray(f, dtype=float) * (params.d / (params.p - params.d))
    out = np.arctan2(1.0, np.sqrt(c))
    if size is None and out.ndim == 0:
        return float(out)
    return out


def _pipeline_lambda(p, d, r, sigma, sigma_y, n, gen, beta_scalar, ftf, size):
    if d != r or r != 1:
        raise InvalidParam("the hierarchical sampler covers the scalar case d = r = 1")
    if not 1 <= d < p:
        raise InvalidParam("need 1 <= d < p")
    if sigma <= 0 or sigma_y <= 0:
        raise InvalidParam("sigma and sigma_y must be positive")
    if n < 2:
        raise InvalidParam("need n >= 2")
    if ftf is None:
        s = sigma_y**2 * gen.chisquare(n - 1, size=size)
    else:
        s = np.asarray(ftf, dtype=float)
        if np.any(s < 0):
            raise InvalidParam("supplied feature Gram trace must be nonnegative")
    return beta_scalar**2 * s / sigma**2


def sample_pfc_angle(
    p: int, d: int, r: int, sigma: float, sigma_y: float, n: int, rng,
    *, beta_scalar: float = 1.0, ftf=None,
) -> AngleSample:
    """One unconditional draw of the fitted-component angle.

    The feature Gram trace is drawn as sigma_y²·χ²(n−1) (the exact law for
    a degree-one polynomial feature of Gaussian responses) unless ``ftf``
    supplies a realized value, then the angle is drawn conditionally.
    """
    gen = as_generator(rng)
    lam = _pipeline_lambda(p, d, r, sigma, sigma_y, n, gen, beta_scalar, ftf, None)
    params = AngleLawParams(p=p, d=d, r=r, sigma=sigma, lambda_nc=float(lam))
    f = sample_noncentral_f(params.dof_num, params.dof_den, params.lambda_nc, gen)
    c = f * d / (p - d)
    return angle_from_split(signal_sq=c, residual_sq=1.0)


def sample_pfc_angles(
    p: int, d: int, r: int, sigma: float, sigma_y: float, n: int, rng, size: int,
    *, beta_scalar: float = 1.0, ftf=None,
) -> np.ndarray:
    """Vector of unconditional angle draws in radians; see sample_pfc_angle."""
    if not isinstance(size, (int, np.integer)) or size < 1:
        raise InvalidParam("size must be a positive integer")
    gen = as_generator(rng)
    lam = _pipeline_lambda(p, d, r, sigma, sigma_y, n, gen, beta_scalar, ftf, size)
    if np.ndim(lam) == 0:
        lam = np.full(size, float(lam))
    f = sample_noncentral_f(d * r, r * (p - d), lam, gen, size=size)
    c = np.asarray(f) * (d / (p - d))
    return np.arctan2(1.0, np.sqrt(c))


def sample_wishart_lambda1(u: int, v: int, rng, size=None):
    """Largest eigenvalue of X·Xᵀ for an u×v standard Gaussian matrix."""
    if not (isinstance(u, (int, np.integer)) and isinstance(v, (int, np.integer))):
        raise InvalidParam("u and v must be integers")
    if u < 1 or v < 1:
        raise InvalidParam("u and v must be positive")
    gen = as_generator(rng)

    def one() -> float:
        x = gen.standard_normal((u, v))
        gram = x @ x.T if u <= v else x.T @ x
        return float(np.linalg.eigvalsh(gram)[-1])

    if size is None:
        return one()
    return np.array([one() for _ in range(int(size))])


def johnstone_center_scale(u: int, v: int) -> tuple[float, float]:
    """Centering and scale constants for the largest Wishart eigenvalue."""
    if u < 1 or v < 2:
        raise InvalidParam("need u >= 1 and v >= 2")
    root = math.sqrt(v - 1) + math.sqrt(u)
    center = root**2
    scale = root * (1.0 / math.sqrt(v - 1) + 1.0 / math.sqrt(u)) ** (1.0 / 3.0)
    return center, scale


def wishart_lambda1_tail_level(u: int, v: int, t: float) -> float:
    """Threshold (√u + √v + t)² for the Gaussian largest-eigenvalue tail."""
    if u < 1 or v < 1:
        raise InvalidParam("u and v must be positive")
    if not (t > 0 and math.isfinite(t)):
        raise InvalidParam("t must be positive and finite")
    return (math.sqrt(u) + math.sqrt(v) + t) ** 2


def wishart_lambda1_tail_bound(u: int, v: int, t: float) -> float:
    """Tail bound exp(−t²/2) for λ₁(XXᵀ) exceeding the matching level."""
    wishart_lambda1_tail_level(u, v, t)
    return math.exp(-0.5 * t * t)
