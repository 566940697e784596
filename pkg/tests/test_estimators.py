import numpy as np
import pytest
from numpy.testing import assert_allclose
from sklearn.exceptions import NotFittedError

from pfc.errors import InvalidParam, RankDeficient, SmallSampleWarning
from pfc.estimators import PC, PFC, orthonormalize, pc, pfc
from pfc.matkit import Basis
from pfc.metrics import principal_angles, theta
from pfc.model import ModelSpec, simulate
from pfc.randsrc import RngStream


def _noise_free_dataset(p=7, d=2, seed=0):
    spec = ModelSpec(p=p, d=d, r=d, n=40, sigma=0.0, beta=np.diag([2.0, 1.0])[:d, :d])
    return spec, simulate(spec, RngStream(seed))


def test_pfc_recovers_planted_span_without_noise():
    spec, ds = _noise_free_dataset()
    basis = pfc(ds, spec.d)
    assert basis.kind == "pfc"
    ang = principal_angles(basis, Basis(spec.gamma, kind="true"),
                           assume_orthonormal=True)
    assert float(ang[-1]) < 1e-8


def test_pc_recovers_planted_span_without_noise():
    spec, ds = _noise_free_dataset()
    basis = pc(ds, spec.d)
    assert basis.kind == "pc"
    ang = principal_angles(basis, Basis(spec.gamma, kind="true"),
                           assume_orthonormal=True)
    assert float(ang[-1]) < 1e-8


def test_pfc_beats_chance_with_noise():
    spec = ModelSpec.univariate(p=10, n=200)
    ds = simulate(spec, RngStream(1))
    ang = theta(pfc(ds, 1), Basis(spec.gamma, kind="true"))
    assert ang.theta_deg < 45.0


def test_component_count_limits():
    spec, ds = _noise_free_dataset()
    with pytest.raises(InvalidParam):
        pfc(ds, spec.r + 1)  # pfc rank is capped by the feature count
    with pytest.raises(InvalidParam):
        pc(ds, spec.p)  # pc needs d <= p - 1
    with pytest.raises(InvalidParam):
        pfc(ds, 0)


def test_pc_warns_when_n_not_above_p():
    spec = ModelSpec.univariate(p=12, n=12)
    ds = simulate(spec, RngStream(2))
    with pytest.warns(SmallSampleWarning):
        pc(ds, 1)


def test_estimators_are_deterministic():
    spec = ModelSpec.univariate(p=8, n=50)
    ds = simulate(spec, RngStream(3))
    assert_allclose(pfc(ds, 1).B, pfc(ds, 1).B)
    # sign convention: largest-magnitude entry positive
    col = pfc(ds, 1).B[:, 0]
    assert col[np.argmax(np.abs(col))] > 0


def test_orthonormalize_preserves_span():
    rng = np.random.default_rng(4)
    m = rng.standard_normal((9, 3)) @ np.diag([5.0, 1.0, 0.2])
    b = orthonormalize(m)
    assert_allclose(b.B.T @ b.B, np.eye(3), atol=1e-12)
    # arccos loses half the precision near zero angles
    ang = principal_angles(b, m)
    assert float(ang[-1]) < 1e-7
    with pytest.raises(RankDeficient):
        orthonormalize(np.ones((4, 2)))
    with pytest.raises(RankDeficient):
        orthonormalize(np.ones((2, 4)))


def test_transformer_matches_function_api():
    spec = ModelSpec.univariate(p=6, n=60)
    ds = simulate(spec, RngStream(5))
    est = PFC(n_components=1).fit(ds.X_raw, ds.y)
    assert_allclose(est.basis_.B, pfc(ds, 1).B, atol=1e-10)
    est_pc = PC(n_components=1).fit(ds.X_raw)
    assert_allclose(est_pc.basis_.B, pc(ds, 1).B, atol=1e-10)


def test_transformer_transform_shapes_and_centering():
    spec = ModelSpec.univariate(p=6, n=60)
    ds = simulate(spec, RngStream(6))
    est = PFC(n_components=1).fit(ds.X_raw, ds.y)
    assert est.n_features_in_ == 6
    assert_allclose(est.mean_, ds.X_raw.mean(axis=0))
    z = est.transform(ds.X_raw)
    assert z.shape == (60, 1)
    assert_allclose(z, ds.X_centered @ est.basis_.B, atol=1e-10)
    with pytest.raises(InvalidParam):
        est.transform(np.zeros((5, 7)))


def test_transformer_n_terms_allows_wider_feature_bank():
    spec = ModelSpec.univariate(p=6, n=60)
    ds = simulate(spec, RngStream(7))
    est = PFC(n_components=1, n_terms=3).fit(ds.X_raw, ds.y)
    assert est.components_.shape == (1, 6)
    est_slices = PFC(n_components=1, fy_kind="slices").fit(ds.X_raw, ds.y)
    assert est_slices.components_.shape == (1, 6)


def test_transformer_unfitted_raises():
    with pytest.raises(NotFittedError):
        PFC().transform(np.zeros((3, 4)))
    with pytest.raises(NotFittedError):
        PC().transform(np.zeros((3, 4)))


def test_pc_transformer_warns_small_sample():
    x = np.random.default_rng(8).standard_normal((5, 6))
    with pytest.warns(SmallSampleWarning):
        PC(n_components=1).fit(x)
