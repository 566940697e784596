"""Dense symmetric linear algebra kernels.

Everything in this module works on 64-bit dense arrays and is deterministic
for identical input: eigenvectors follow a fixed sign convention (the entry
of largest magnitude is made positive, ties broken by lowest index), so
downstream estimates are reproducible bit-for-bit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    NonFinite,
    NotPositiveDefinite,
    NotSymmetric,
    RankDeficient,
)

SYM_ATOL = 1e-10
RANK_RTOL = 1e-10
WEYL_TOL = 1e-8


@dataclass(frozen=True)
class SymEigen:
    """Eigendecomposition of a symmetric matrix, eigenvalues descending."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.T


@dataclass(frozen=True)
class Projector:
    """Orthogonal projection matrix onto a column space of known rank."""

    matrix: np.ndarray
    rank: int


@dataclass(frozen=True)
class Basis:
    """Column-orthonormal matrix whose span is the object of interest.

    ``kind`` records how the basis was produced: ``"pfc"``, ``"pc"``, or
    ``"true"`` for a basis fixed by the data-generating process.
    """

    B: np.ndarray
    kind: str = "true"

    def __post_init__(self):
        b = np.asarray(self.B, dtype=float)
        if b.ndim != 2:
            raise DimensionMismatch("basis must be a 2-d array")
        require_finite(b, "basis")
        if self.kind not in ("pfc", "pc", "true"):
            raise ValueError(f"unknown basis kind {self.kind!r}")
        gram = b.T @ b
        if np.max(np.abs(gram - np.eye(b.shape[1]))) > 1e-10:
            raise RankDeficient("basis columns are not orthonormal")
        object.__setattr__(self, "B", b)

    @property
    def p(self) -> int:
        return self.B.shape[0]

    @property
    def d(self) -> int:
        return self.B.shape[1]


@dataclass(frozen=True)
class WeylBounds:
    """Index-wise eigenvalue bounds for a symmetric sum B + L."""

    lower: np.ndarray
    observed: np.ndarray
    upper: np.ndarray
    violated: bool
    max_violation: float


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    m = np.asarray(a, dtype=float)
    if m.ndim != 2:
        raise DimensionMismatch(f"{name} must be a 2-d array, got ndim={m.ndim}")
    return m


def require_finite(a: np.ndarray, name: str = "matrix") -> None:
    if not np.all(np.isfinite(a)):
        raise NonFinite(f"{name} contains non-finite entries")


def require_symmetric(m: np.ndarray, name: str = "matrix", atol: float = SYM_ATOL) -> None:
    if m.shape[0] != m.shape[1]:
        raise NotSymmetric(f"{name} is not square: shape {m.shape}")
    asym = float(np.max(np.abs(m - m.T))) if m.size else 0.0
    if asym > atol:
        raise NotSymmetric(f"{name} asymmetry {asym:.3e} exceeds {atol:.1e}")


def symmetrize(a) -> np.ndarray:
    """Exactly symmetric part (A + Aᵀ)/2 of a square array."""
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"cannot symmetrize shape {m.shape}")
    return 0.5 * (m + m.T)


def sym_eig(s) -> SymEigen:
    """Eigendecomposition of a symmetric matrix, descending order.

    Input must be symmetric within ``SYM_ATOL`` absolute tolerance; the
    computation itself runs on the symmetrized matrix so that roundoff in
    the caller's Gram products cannot leak into the result.
    """
    m = as_matrix(s)
    require_finite(m)
    require_symmetric(m)
    w, v = np.linalg.eigh(0.5 * (m + m.T))
    w = w[::-1].copy()
    v = v[:, ::-1]
    return SymEigen(values=w, vectors=_fix_signs(v))


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    v = np.array(vectors, copy=True)
    lead = np.argmax(np.abs(v), axis=0)
    signs = np.sign(v[lead, np.arange(v.shape[1])])
    signs[signs == 0] = 1.0
    return v * signs


def projector(g) -> Projector:
    """Orthogonal projector onto the column space of a full-rank matrix."""
    m = as_matrix(g, "projector argument")
    require_finite(m, "projector argument")
    rows, cols = m.shape
    if cols == 0 or cols > rows:
        raise RankDeficient(f"cannot project onto {cols} columns in {rows} rows")
    sv = np.linalg.svd(m, compute_uv=False)
    if sv[-1] <= RANK_RTOL * sv[0]:
        raise RankDeficient("matrix does not have full column rank")
    q, _ = np.linalg.qr(m)
    return Projector(matrix=symmetrize(q @ q.T), rank=cols)


def frob_norm_sq(a) -> float:
    m = np.asarray(a, dtype=float)
    require_finite(m, "array")
    return float(np.sum(m * m))


def op_norm(a) -> float:
    """Operator (spectral) norm: the largest singular value."""
    m = as_matrix(a)
    require_finite(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.svd(m, compute_uv=False)[0])


def _spd_eig(s, name: str) -> SymEigen:
    eig = sym_eig(s)
    lam_max = eig.values[0] if eig.values.size else 0.0
    if lam_max <= 0.0 or eig.values[-1] <= 1e-12 * lam_max:
        raise NotPositiveDefinite(f"{name} requires a positive definite matrix")
    return eig


def sqrt_spd(s) -> np.ndarray:
    """Symmetric square root of a symmetric positive definite matrix."""
    eig = _spd_eig(s, "sqrt_spd")
    return symmetrize((eig.vectors * np.sqrt(eig.values)) @ eig.vectors.T)


def inv_sqrt_spd(s) -> np.ndarray:
    """Symmetric inverse square root of a symmetric positive definite matrix."""
    eig = _spd_eig(s, "inv_sqrt_spd")
    return symmetrize((eig.vectors / np.sqrt(eig.values)) @ eig.vectors.T)


def shifted_pinv(s, shift: float) -> np.ndarray:
    """Spectral pseudo-inverse of (S - shift·I).

    Eigendirections whose shifted eigenvalue is within the zero threshold
    (1e-9 · max(1, |λ₁|)) are annihilated instead of inverted, so the result
    is well defined when ``shift`` equals an eigenvalue of S.
    """
    if not np.isfinite(shift):
        raise NonFinite("shift must be finite")
    eig = sym_eig(s)
    eps_zero = 1e-9 * max(1.0, abs(eig.values[0]))
    shifted = eig.values - shift
    inv = np.zeros_like(shifted)
    keep = np.abs(shifted) > eps_zero
    inv[keep] = 1.0 / shifted[keep]
    return symmetrize((eig.vectors * inv) @ eig.vectors.T)


def weyl_bounds(b, l) -> WeylBounds:
    """Index-wise eigenvalue bounds λ_i(B)+λ_p(L) ≤ λ_i(B+L) ≤ λ_i(B)+λ₁(L).

    ``violated`` flags any bound broken by more than ``WEYL_TOL``, which for
    exact symmetric inputs indicates a numerical failure rather than a
    property of the matrices.
    """
    mb = as_matrix(b, "B")
    ml = as_matrix(l, "L")
    if mb.shape != ml.shape:
        raise DimensionMismatch(f"shape mismatch: {mb.shape} vs {ml.shape}")
    eb = sym_eig(mb).values
    el = sym_eig(ml).values
    observed = sym_eig(mb + ml).values
    lower = eb + el[-1]
    upper = eb + el[0]
    max_violation = float(max(np.max(lower - observed), np.max(observed - upper), 0.0))
    return WeylBounds(
        lower=lower,
        observed=observed,
        upper=upper,
        violated=max_violation > WEYL_TOL,
        max_violation=max_violation,
    )
