import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal
from scipy import stats

from pfc.errors import InvalidParam
from pfc.randsrc import (
    AngleLawParams,
    RngStream,
    as_generator,
    johnstone_center_scale,
    sample_angle_fixed_lambda,
    sample_noncentral_chi2,
    sample_noncentral_f,
    sample_pfc_angle,
    sample_pfc_angles,
    sample_wishart_lambda1,
    wishart_lambda1_tail_bound,
    wishart_lambda1_tail_level,
)


def test_stream_reproducibility():
    a = RngStream(42, 7).generator().standard_normal(5)
    b = RngStream(42, 7).generator().standard_normal(5)
    assert_array_equal(a, b)
    c = RngStream(42, 8).generator().standard_normal(5)
    assert not np.allclose(a, c)
    d = RngStream(43, 7).generator().standard_normal(5)
    assert not np.allclose(a, d)


def test_stream_child_and_validation():
    s = RngStream(1, 2)
    assert s.child(5).stream_id == 5
    assert s.child(5).seed == 1
    with pytest.raises(InvalidParam):
        RngStream(-1)
    with pytest.raises(InvalidParam):
        RngStream(0, 2**64)
    with pytest.raises(InvalidParam):
        RngStream("seed")  # type: ignore[arg-type]
    assert "seed=1" in repr(s)


def test_as_generator_paths():
    gen = np.random.default_rng(0)
    assert as_generator(gen) is gen
    a = as_generator(5).standard_normal(3)
    b = as_generator(RngStream(5)).standard_normal(3)
    assert_array_equal(a, b)
    with pytest.raises(InvalidParam):
        as_generator(1.5)


def test_noncentral_chi2_matches_reference_law():
    k, lam, n = 3, 4.0, 20000
    draws = sample_noncentral_chi2(k, lam, RngStream(0), size=n)
    assert draws.shape == (n,)
    ks = stats.kstest(draws, stats.ncx2(df=k, nc=lam).cdf)
    assert ks.pvalue > 1e-3
    # scalar path returns a float
    one = sample_noncentral_chi2(k, lam, RngStream(1))
    assert isinstance(one, float)


def test_noncentral_chi2_zero_noncentrality_is_central():
    draws = sample_noncentral_chi2(5, 0.0, RngStream(2), size=20000)
    ks = stats.kstest(draws, stats.chi2(df=5).cdf)
    assert ks.pvalue > 1e-3


def test_noncentral_chi2_validation():
    with pytest.raises(InvalidParam):
        sample_noncentral_chi2(0, 1.0, RngStream(0))
    with pytest.raises(InvalidParam):
        sample_noncentral_chi2(2, -1.0, RngStream(0))
    with pytest.raises(InvalidParam):
        sample_noncentral_chi2(2, math.inf, RngStream(0))


def test_noncentral_f_matches_reference_law():
    d1, d2, lam, n = 2, 18, 6.0, 20000
    draws = sample_noncentral_f(d1, d2, lam, RngStream(3), size=n)
    ks = stats.kstest(draws, stats.ncf(dfn=d1, dfd=d2, nc=lam).cdf)
    assert ks.pvalue > 1e-3
    with pytest.raises(InvalidParam):
        sample_noncentral_f(2, 0, 1.0, RngStream(0))


def test_angle_law_params_validation():
    p = AngleLawParams(p=10, d=1, r=1, sigma=1.0, lambda_nc=3.0)
    assert p.dof_num == 1
    assert p.dof_den == 9
    with pytest.raises(InvalidParam):
        AngleLawParams(p=10, d=1, r=2, sigma=1.0, lambda_nc=0.0)
    with pytest.raises(InvalidParam):
        AngleLawParams(p=2, d=2, r=2, sigma=1.0, lambda_nc=0.0)
    with pytest.raises(InvalidParam):
        AngleLawParams(p=10, d=1, r=1, sigma=0.0, lambda_nc=0.0)
    with pytest.raises(InvalidParam):
        AngleLawParams(p=10, d=1, r=1, sigma=1.0, lambda_nc=-1.0)


def test_sample_angle_fixed_lambda_range_and_law():
    params = AngleLawParams(p=10, d=1, r=1, sigma=1.0, lambda_nc=40.0)
    draws = sample_angle_fixed_lambda(params, RngStream(4), size=20000)
    assert np.all(draws > 0.0)
    assert np.all(draws < math.pi / 2)
    # transform back: (p-d)/d * cot^2(theta) must follow the noncentral F law
    back = (params.p - params.d) / params.d / np.tan(draws) ** 2
    ks = stats.kstest(back, stats.ncf(dfn=1, dfd=9, nc=40.0).cdf)
    assert ks.pvalue > 1e-3


def test_pfc_angle_sampler_conditional_matches_fixed_lambda():
    # with ftf pinned, the hierarchical sampler must follow the fixed law
    p, n, reps = 10, 40, 20000
    ftf = 52.0
    draws = sample_pfc_angles(p, 1, 1, 1.0, 1.0, n, RngStream(5), reps, ftf=ftf)
    params = AngleLawParams(p=p, d=1, r=1, sigma=1.0, lambda_nc=ftf)
    ref = sample_angle_fixed_lambda(params, RngStream(6), size=reps)
    ks = stats.ks_2samp(draws, ref)
    assert ks.pvalue > 1e-3


def test_pfc_angle_sampler_beta_scale_shifts_angles_down():
    base = sample_pfc_angles(10, 1, 1, 1.0, 1.0, 40, RngStream(7), 4000)
    strong = sample_pfc_angles(10, 1, 1, 1.0, 1.0, 40, RngStream(7), 4000,
                               beta_scalar=3.0)
    assert np.mean(strong) < np.mean(base)


def test_pfc_angle_sampler_guards():
    with pytest.raises(InvalidParam):
        sample_pfc_angles(10, 2, 2, 1.0, 1.0, 40, RngStream(0), 10)
    with pytest.raises(InvalidParam):
        sample_pfc_angles(10, 1, 1, 0.0, 1.0, 40, RngStream(0), 10)
    with pytest.raises(InvalidParam):
        sample_pfc_angles(10, 1, 1, 1.0, 1.0, 1, RngStream(0), 10)
    with pytest.raises(InvalidParam):
        sample_pfc_angles(10, 1, 1, 1.0, 1.0, 40, RngStream(0), 0)
    one = sample_pfc_angle(10, 1, 1, 1.0, 1.0, 40, RngStream(0))
    assert 0.0 < one.theta_rad < math.pi / 2


def test_wishart_lambda1_matches_direct_eigensolve():
    # same stream, same matrix: the sampler is a thin wrapper over eigvalsh
    u, v = 4, 6
    drawn = sample_wishart_lambda1(u, v, RngStream(8))
    x = RngStream(8).generator().standard_normal((u, v))
    assert drawn == pytest.approx(np.linalg.eigvalsh(x @ x.T)[-1])
    arr = sample_wishart_lambda1(u, v, RngStream(9), size=3)
    assert arr.shape == (3,)
    assert np.all(arr > 0)


def test_wishart_lambda1_tall_matrix_path():
    # u > v flips to the smaller Gram; top eigenvalue is unchanged
    lam = sample_wishart_lambda1(50, 3, RngStream(10))
    x = RngStream(10).generator().standard_normal((50, 3))
    assert lam == pytest.approx(np.linalg.eigvalsh(x.T @ x)[-1])


def test_johnstone_center_scale_frozen_values():
    c, s = johnstone_center_scale(20, 20)
    assert c == pytest.approx(77.98717737923585, rel=1e-12)
    assert s == pytest.approx(6.782422947146569, rel=1e-12)
    c, s = johnstone_center_scale(10, 40)
    assert c == pytest.approx(88.49683531626302, rel=1e-12)
    assert s == pytest.approx(7.346960852830018, rel=1e-12)
    with pytest.raises(InvalidParam):
        johnstone_center_scale(10, 1)


def test_wishart_tail_level_and_bound():
    level = wishart_lambda1_tail_level(20, 20, 2.0)
    assert level == pytest.approx((2 * math.sqrt(20) + 2.0) ** 2, rel=1e-12)
    assert wishart_lambda1_tail_bound(20, 20, 2.0) == pytest.approx(
        math.exp(-2.0), rel=1e-12)
    with pytest.raises(InvalidParam):
        wishart_lambda1_tail_level(20, 20, 0.0)
    with pytest.raises(InvalidParam):
        sample_wishart_lambda1(0, 5, RngStream(0))
