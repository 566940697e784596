"""Eigenvector perturbation analysis for the covariance split.

The centered Gram matrix decomposes exactly into the fitted Gram plus the
residual Gram with a vanishing cross term; the correction solver quantifies
how the residual part moves individual eigenvectors of the fitted part.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    IllConditioned,
    InvalidParam,
    LevelCrossing,
    NotOrthogonal,
)
from .matkit import Projector, as_matrix, require_finite, shifted_pinv, sym_eig, symmetrize
from .model import Dataset

_COND_LIMIT = 1e12


@dataclass(frozen=True)
class PerturbSolution:
    """Eigenvector correction for one index.

    ``base_vec + correction`` spans the matched eigenvector of the
    perturbed matrix, ``mu_shift`` its eigenvalue shift; ``residual`` is
    the absolute 2-norm of the eigen-equation residual at the solution.
    """

    base_vec: np.ndarray
    correction: np.ndarray
    mu_shift: float
    iterations: int
    residual: float


@dataclass(frozen=True)
class TraceCheck:
    """Monte Carlo versus predicted value of the projected trace statistic."""

    sample_mean: float
    predicted: float
    std_error: float
    reps: int


def split_covariance(dataset: Dataset) -> tuple[np.ndarray, np.ndarray]:
    """Exact additive split of the centered Gram into fitted plus residual."""
    fitted = symmetrize(dataset.X_fitted.T @ dataset.X_fitted)
    residual = dataset.X_centered - dataset.X_fitted
    return fitted, symmetrize(residual.T @ residual)


def eigvec_correction(base, pert, index: int) -> PerturbSolution:
    """Correction moving one eigenvector of ``base`` to one of ``base + pert``.

    The perturbed partner is matched by maximal overlap with the base
    eigenvector; the correction solves a single dense linear system built
    from the spectral pseudo-inverse at the base eigenvalue and is exactly
    orthogonal to the base eigenvector.
    """
    b = symmetrize(as_matrix(base, "base"))
    l = symmetrize(as_matrix(pert, "perturbation"))
    require_finite(b, "base")
    require_finite(l, "perturbation")
    if b.shape != l.shape:
        raise DimensionMismatch(f"shape mismatch: {b.shape} vs {l.shape}")
    p = b.shape[0]
    if not isinstance(index, (int, np.integer)) or not 0 <= index < p:
        raise InvalidParam(f"index must lie in [0, {p})")

    base_eig = sym_eig(b)
    lam = float(base_eig.values[index])
    u = base_eig.vectors[:, index]
    others = np.delete(base_eig.values, index)
    scale = max(1.0, abs(float(base_eig.values[0])))
    if others.size and float(np.min(np.abs(others - lam))) <= 1e-8 * scale:
        raise InvalidParam(f"eigenvalue at index {index} is not simple")

    pert_eig = sym_eig(b + l)
    overlaps = np.abs(pert_eig.vectors.T @ u)
    match = int(np.argmax(overlaps))
    if overlaps[match] < 1.0 / math.sqrt(2.0):
        raise LevelCrossing(
            f"no perturbed eigenvector overlaps index {index} by more than 1/sqrt(2)"
        )
    mu = float(pert_eig.values[match]) - lam

    pinv = shifted_pinv(b, lam)
    system = np.eye(p) + pinv @ (l - mu * np.eye(p))
    if np.linalg.cond(system) > _COND_LIMIT:
        raise IllConditioned("correction system is numerically singular")
    v = np.linalg.solve(system, -pinv @ (l @ u))
    v = v - (u @ v) * u
    combined = u + v
    residual = float(np.linalg.norm((b + l) @ combined - (lam + mu) * combined))
    return PerturbSolution(base_vec=u, correction=v, mu_shift=mu,
                           iterations=1, residual=residual)


def projected_trace_check(proj, w, v, rng, reps: int = 10**4,
                          chunk: int = 2048) -> TraceCheck:
    """Monte Carlo check of the projected trace identity.

    For X an n×m standard Gaussian matrix, R = X·W and S = X·V with
    orthogonal coefficient blocks (WᵀV = 0), the expectation of
    tr(R·Rᵀ·P·S·Sᵀ·P) over X equals tr(WᵀW)·tr(VᵀV)·rank(P).
    """
    from .randsrc import as_generator

    if isinstance(proj, Projector):
        pmat, rank = proj.matrix, proj.rank
    else:
        pmat = symmetrize(as_matrix(proj, "projector"))
        rank = int(round(float(np.trace(pmat))))
    wm = as_matrix(w, "W")
    vm = as_matrix(v, "V")
    if wm.shape[0] != vm.shape[0]:
        raise DimensionMismatch("W and V must have the same number of rows")
    cross = wm.T @ vm
    cross_scale = max(np.linalg.norm(wm), 1.0) * max(np.linalg.norm(vm), 1.0)
    if float(np.max(np.abs(cross))) > 1e-10 * cross_scale:
        raise NotOrthogonal("W and V must have orthogonal column spaces")
    if not isinstance(reps, (int, np.integer)) or reps < 2:
        raise InvalidParam("reps must be an integer >= 2")

    n = pmat.shape[0]
    m = wm.shape[0]
    gen = as_generator(rng)
    values = np.empty(reps)
    done = 0
    while done < reps:
        b = min(chunk, reps - done)
        x = gen.standard_normal((b, n, m))
        r = x @ wm
        s = x @ vm
        inner = np.einsum("ij,bjk->bik", pmat, r)
        stat = np.einsum("bji,bjk->bik", s, inner)
        values[done:done + b] = np.sum(stat * stat, axis=(1, 2))
        done += b
    predicted = float(np.trace(wm.T @ wm) * np.trace(vm.T @ vm) * rank)
    mean = float(np.mean(values))
    std_error = float(np.std(values, ddof=1) / math.sqrt(reps))
    return TraceCheck(sample_mean=mean, predicted=predicted,
                      std_error=std_error, reps=int(reps))
