"""Dimension-reduction estimators.

Two surfaces are provided: dataset-level functions (``pfc``, ``pc``)
returning a ``Basis``, and scikit-learn style transformer classes
(``PFC``, ``PC``) for use in pipelines. Only the span of the returned
basis is identified; individual columns follow the deterministic sign
convention of the eigensolver.
"""
from __future__ import annotations

import warnings

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .errors import InvalidParam, RankDeficient, SmallSampleWarning, SpacingDegenerateWarning
from .matkit import Basis, as_matrix, require_finite, sym_eig, symmetrize
from .model import Dataset, build_fy, fit_predictors

__all__ = ["Basis", "pfc", "pc", "orthonormalize", "PFC", "PC"]

_SPACING_RTOL = 1e-10


def _top_basis(gram: np.ndarray, d: int, kind: str) -> Basis:
    eig = sym_eig(gram)
    lam = eig.values
    spacing = lam[d - 1] - (lam[d] if d < lam.size else 0.0)
    if spacing < _SPACING_RTOL * max(lam[0], 0.0):
        warnings.warn(
            f"trailing eigenvalue spacing {spacing:.3e} is too small to identify "
            f"a {d}-dimensional span",
            SpacingDegenerateWarning,
            stacklevel=3,
        )
    return Basis(B=eig.vectors[:, :d], kind=kind)


def _check_components(d, limit: int, what: str) -> int:
    if not isinstance(d, (int, np.integer)) or d < 1:
        raise InvalidParam("number of components must be a positive integer")
    if d > limit:
        raise InvalidParam(f"cannot extract {d} components from {what}")
    return int(d)


def pfc(dataset: Dataset, d: int) -> Basis:
    """Fitted-component basis: top-d eigenvectors of the fitted Gram matrix."""
    d = _check_components(d, dataset.r, f"{dataset.r} feature columns")
    return _top_basis(symmetrize(dataset.X_fitted.T @ dataset.X_fitted), d, "pfc")


def pc(dataset: Dataset, d: int) -> Basis:
    """Principal-component basis: top-d eigenvectors of the centered Gram matrix."""
    d = _check_components(d, dataset.p - 1, f"p - 1 = {dataset.p - 1} directions")
    if dataset.n <= dataset.p:
        warnings.warn(
            f"n = {dataset.n} does not exceed p = {dataset.p}; principal "
            "components are unreliable in this regime",
            SmallSampleWarning,
            stacklevel=2,
        )
    return _top_basis(symmetrize(dataset.X_centered.T @ dataset.X_centered), d, "pc")


def orthonormalize(m, kind: str = "true") -> Basis:
    """Column-orthonormal basis with the same span as a full-rank matrix."""
    mat = as_matrix(m, "basis candidate")
    require_finite(mat, "basis candidate")
    if mat.shape[1] > mat.shape[0]:
        raise RankDeficient("more columns than rows")
    sv = np.linalg.svd(mat, compute_uv=False)
    if sv[-1] <= 1e-10 * sv[0]:
        raise RankDeficient("matrix does not have full column rank")
    q, rdiag = np.linalg.qr(mat)
    signs = np.sign(np.diag(rdiag))
    signs[signs == 0] = 1.0
    return Basis(B=q * signs, kind=kind)


class PFC(TransformerMixin, BaseEstimator):
    """Principal fitted components transformer.

    Regresses centered predictors on response features, then extracts the
    leading eigenvectors of the fitted Gram matrix.

    Parameters
    ----------
    n_components : int
        Dimension of the reduced space.
    n_terms : int or None
        Number of response-feature columns; defaults to ``n_components``.
    fy_kind : str
        Feature construction, ``"polynomial"`` or ``"slices"``.
    """

    def __init__(self, n_components: int = 1, n_terms: int | None = None,
                 fy_kind: str = "polynomial"):
        self.n_components = n_components
        self.n_terms = n_terms
        self.fy_kind = fy_kind

    def fit(self, X, y):
        X, y = check_X_y(X, y, y_numeric=True)
        r = self.n_components if self.n_terms is None else self.n_terms
        f = build_fy(y, self.fy_kind, r)
        self.mean_ = X.mean(axis=0)
        fitted = fit_predictors(X - self.mean_, f)
        d = _check_components(self.n_components, r, f"{r} feature columns")
        basis = _top_basis(symmetrize(fitted.T @ fitted), d, "pfc")
        self.basis_ = basis
        self.components_ = basis.B.T
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "components_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise InvalidParam(
                f"expected {self.n_features_in_} features, got {X.shape[1]}"
            )
        return (X - self.mean_) @ self.components_.T


class PC(TransformerMixin, BaseEstimator):
    """Principal components transformer on the centered Gram matrix.

    The unsupervised baseline for the same reduction task: eigenvectors of
    the centered predictor Gram matrix, ignoring the response.
    """

    def __init__(self, n_components: int = 1):
        self.n_components = n_components

    def fit(self, X, y=None):
        X = check_array(X)
        d = _check_components(self.n_components, X.shape[1] - 1,
                              f"p - 1 = {X.shape[1] - 1} directions")
        if X.shape[0] <= X.shape[1]:
            warnings.warn(
                f"n = {X.shape[0]} does not exceed p = {X.shape[1]}; principal "
                "components are unreliable in this regime",
                SmallSampleWarning,
                stacklevel=2,
            )
        self.mean_ = X.mean(axis=0)
        centered = X - self.mean_
        basis = _top_basis(symmetrize(centered.T @ centered), d, "pc")
        self.basis_ = basis
        self.components_ = basis.B.T
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "components_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise InvalidParam(
                f"expected {self.n_features_in_} features, got {X.shape[1]}"
            )
        return (X - self.mean_) @ self.components_.T
