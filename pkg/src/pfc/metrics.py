"""Subspace accuracy metrics.

All metrics compare the span of an estimated basis against the span of a
reference basis. Inputs must be column-orthonormal (a ``Basis`` or a plain
orthonormal array); the squared-cotangent ratio is scale-sensitive for
raw matrices with more than one column, so orthonormality is enforced
rather than assumed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidParam
from .matkit import as_matrix, frob_norm_sq, op_norm, require_finite

DEN_ZERO_RTOL = 1e-14


@dataclass(frozen=True)
class AngleSample:
    """One realization of the subspace discrepancy metrics.

    ``c_value`` is the squared-cotangent ratio and may be ``inf`` when the
    estimate lies inside the reference span; ``theta_rad``/``theta_deg``
    is the corresponding angle, with c = cot²(theta).
    """

    c_value: float
    theta_rad: float
    theta_deg: float


def angle_from_split(signal_sq: float, residual_sq: float) -> AngleSample:
    """Build an AngleSample from squared norms of the projected/residual parts."""
    if signal_sq < 0 or residual_sq < 0:
        raise InvalidParam("squared norms must be nonnegative")
    if residual_sq < DEN_ZERO_RTOL * max(signal_sq, 1.0):
        return AngleSample(c_value=math.inf, theta_rad=0.0, theta_deg=0.0)
    c = signal_sq / residual_sq
    theta = math.atan2(math.sqrt(residual_sq), math.sqrt(signal_sq))
    return AngleSample(c_value=c, theta_rad=theta, theta_deg=math.degrees(theta))


def _basis_matrix(b, name: str) -> np.ndarray:
    m = as_matrix(getattr(b, "B", b), name)
    require_finite(m, name)
    gram = m.T @ m
    if np.max(np.abs(gram - np.eye(m.shape[1]))) > 1e-10:
        raise InvalidParam(f"{name} must be column-orthonormal")
    return m


def _split(est, truth) -> tuple[float, float]:
    e = _basis_matrix(est, "estimate")
    t = _basis_matrix(truth, "reference")
    if e.shape[0] != t.shape[0]:
        raise DimensionMismatch(
            f"ambient dimensions differ: {e.shape[0]} vs {t.shape[0]}"
        )
    if t.shape[1] >= t.shape[0]:
        raise InvalidParam("reference span must be a proper subspace")
    proj = t @ (t.T @ e)
    signal_sq = frob_norm_sq(proj)
    residual_sq = frob_norm_sq(e - proj)
    return signal_sq, residual_sq


def c_ratio(est, truth) -> float:
    """Squared-cotangent ratio ‖P·E‖²_F / ‖(I−P)·E‖²_F, +inf for a perfect fit."""
    signal_sq, residual_sq = _split(est, truth)
    if residual_sq < DEN_ZERO_RTOL * max(signal_sq, 1.0):
        return math.inf
    return signal_sq / residual_sq


def theta(est, truth) -> AngleSample:
    """Subspace angle with cot²(theta) equal to the squared-cotangent ratio."""
    signal_sq, residual_sq = _split(est, truth)
    return angle_from_split(signal_sq, residual_sq)


def m_metric(est, truth) -> float:
    """Frobenius norm of the component of the estimate outside the reference."""
    _, residual_sq = _split(est, truth)
    return math.sqrt(residual_sq)


def projector_distance(est, truth) -> float:
    """Operator-norm distance between the two orthogonal projectors."""
    e = _basis_matrix(est, "estimate")
    t = _basis_matrix(truth, "reference")
    if e.shape[0] != t.shape[0]:
        raise DimensionMismatch(
            f"ambient dimensions differ: {e.shape[0]} vs {t.shape[0]}"
        )
    return op_norm(t @ t.T - e @ e.T)


def principal_angles(a, b, *, assume_orthonormal: bool = False) -> np.ndarray:
    """Principal angles between two column spans, ascending, in radians."""
    ma = as_matrix(getattr(a, "B", a), "first span")
    mb = as_matrix(getattr(b, "B", b), "second span")
    if ma.shape[0] != mb.shape[0]:
        raise DimensionMismatch(
            f"ambient dimensions differ: {ma.shape[0]} vs {mb.shape[0]}"
        )
    if not assume_orthonormal:
        ma = np.linalg.qr(ma)[0]
        mb = np.linalg.qr(mb)[0]
    sv = np.linalg.svd(ma.T @ mb, compute_uv=False)
    return np.arccos(np.clip(sv, 0.0, 1.0))
