import numpy as np
import pytest

from conftest import make_model
from hamiltonian import FieldNorms, field_norms
from spectra import BasisError
from thresholds import (ThresholdCurve, ThresholdError, UCPConstants, csfuc, e0_curve, e0_infinity_lower_bound,
                        e0_lower_bound, gamma1, gamma2, kappa0, n1_threshold, uncertainty_check, ucp_mass)

ZERO = FieldNorms(0.0, 0.0, 0.0, 0.0)


def test_constant_formulas():
    assert gamma1(0.25, 1.0, ZERO) == pytest.approx(0.1767766953)
    assert gamma1(0.5, 1e-12, ZERO) ** 2 == pytest.approx(0.25, rel=1e-6)
    assert gamma2(0.25, 1.0, ZERO, lam=0.0, M=1.0, delta_plus=0.5, dim=1) == pytest.approx(0.03125)
    # lam M (2 + delta_+)^d = 2 adds 2^{2/3} to the exponent
    assert gamma2(0.25, 1.0, ZERO, lam=1.0, M=1.0, delta_plus=0.0, dim=1) == \
        pytest.approx(0.5 * 0.25 ** (2 + 2 ** (2 / 3)))
    assert csfuc(0.5, 0.0, 0.0, 0.0) == pytest.approx(0.5)
    assert csfuc(0.5, 0.0, 3.0, 0.0) == pytest.approx(9.765625e-4)
    assert e0_lower_bound(1.0, 1.0, 0.5, 0.0, 0.0, 0.0) == pytest.approx(0.25)
    assert e0_lower_bound(0.0, 1.0, 0.5, 0.0, 0.0, 0.0) == 0.0


def test_doubling_n1_squares_csfuc():
    one, two = UCPConstants(N1=1), UCPConstants(N1=2)
    assert csfuc(0.3, 1.5, 0.7, 2.0, two) == pytest.approx(csfuc(0.3, 1.5, 0.7, 2.0, one) ** 2)


def test_constant_validation():
    for bad in [0.0, 0.6, -0.1]:
        with pytest.raises(ThresholdError):
            csfuc(bad, 0.0, 0.0, 0.0)
    with pytest.raises(ThresholdError):
        gamma1(0.25, 0.0, ZERO)
    with pytest.raises(ThresholdError):
        UCPConstants(N1=0.5)
    with pytest.raises(ThresholdError):
        UCPConstants(C2=0.0)
    with pytest.raises(ThresholdError):
        e0_lower_bound(-1.0, 1.0, 0.25, 0.0, 0.0, 0.0)


def test_constants_decrease_in_every_norm():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        delta = rng.uniform(0.01, 0.49)
        E0, b, c, v = rng.uniform(0.1, 5, 4)
        lam, M, dp = rng.uniform(0, 5), rng.uniform(0.1, 1), rng.uniform(0, 1)
        dim = int(rng.integers(1, 4))
        norms = FieldNorms(b, c, v, 0.0)
        assert csfuc(delta, v + 0.1, b, c) < csfuc(delta, v, b, c)
        assert csfuc(delta, v, b + 0.1, c) < csfuc(delta, v, b, c)
        assert gamma1(delta, E0 + 0.1, norms) < gamma1(delta, E0, norms)
        assert gamma1(delta, E0, FieldNorms(b, c + 0.1, v, 0.0)) < gamma1(delta, E0, norms)
        assert gamma2(delta, E0, norms, lam + 0.1, M, dp, dim) < gamma2(delta, E0, norms, lam, M, dp, dim)
        assert gamma2(delta, E0, norms, lam, M, dp, dim) <= gamma1(delta, E0, norms) ** 2 * (1 + 1e-12)


def test_e0_infinity_lower_bound_is_the_best_grid_value():
    t_grid = np.logspace(-2, 3, 40)
    bound, t = e0_infinity_lower_bound(1.0, 0.25, ZERO, t_grid=t_grid)
    values = [e0_lower_bound(s, 1.0, 0.25, 0.0, 0.0, 0.0) for s in t_grid]
    assert bound == pytest.approx(max(values))
    assert t in t_grid


def toy_curve(t, e0, estimate=None):
    return ThresholdCurve(t, e0, float(e0[-1]) if estimate is None else estimate)


def test_kappa0_on_closed_form_curves():
    t = np.logspace(-2, 2, 100001)
    assert kappa0(toy_curve(t, t / (1 + t)), 0.5) == pytest.approx(0.0857864, abs=1e-5)
    t = np.linspace(0.1, 1000, 500)
    assert kappa0(toy_curve(t, t), 1.0) == pytest.approx((t[-1] - 1.0) / t[-1])


def test_kappa0_grows_with_the_curve():
    t = np.logspace(-2, 2, 200)
    low, high = t / (1 + t), t / (1 + t) + 0.1
    assert kappa0(toy_curve(t, high), 0.5) > kappa0(toy_curve(t, low), 0.5)


def test_kappa0_errors():
    t = np.logspace(-2, 2, 50)
    curve = toy_curve(t, t / (1 + t))
    with pytest.raises(ThresholdError):
        kappa0(curve, 0.0)
    with pytest.raises(ThresholdError):
        kappa0(curve, 1.0)
    with pytest.raises(ThresholdError):
        kappa0(toy_curve(t, t / (1 + t), estimate=5.0), 2.0)


def test_covering_curve_is_a_shift():
    model = make_model('covering', side=3, n=7)
    t_grid = np.logspace(-2, 6, 30)
    curve = e0_curve(model, t_grid)
    np.testing.assert_allclose(curve.e0_values - curve.e0_zero, t_grid, rtol=1e-9)
    assert curve.covering and curve.threshold == np.inf
    assert n1_threshold(curve, 1.0, 0.25, field_norms(model.background)) == 1.0


def test_covering_holds_when_grid_points_sit_on_cube_faces():
    # h = 1/2 puts every other point on a face between neighbouring unit cells
    model = make_model('covering', side=3, n=5)
    np.testing.assert_array_equal(model.u_envelope, [1, 2, 1, 2, 1])
    t_grid = np.logspace(-2, 6, 30)
    curve = e0_curve(model, t_grid)
    assert curve.covering and curve.threshold == np.inf
    assert np.all(curve.e0_values - curve.e0_zero >= t_grid * (1 - 1e-9))


def test_gap_curve_saturates_below_the_complement():
    model = make_model('gap')
    curve = e0_curve(model, threads=2)
    assert not curve.covering
    assert np.all(np.diff(curve.e0_values) >= -1e-8)
    assert np.all(curve.e0_values <= curve.e0_infinity_cross_check + 1e-8)
    assert curve.discrepancy < 0.01
    assert curve.threshold == curve.e0_infinity_estimate
    ball = e0_curve(model, envelope='ball')
    assert np.all(ball.e0_values <= curve.e0_values + 1e-8)
    with pytest.raises(ThresholdError):
        e0_curve(model, [1.0, 0.5])
    with pytest.raises(ThresholdError):
        e0_curve(model, envelope='cube')


def test_uncertainty_relation_holds():
    model = make_model('gap', n=127)
    curve = e0_curve(model)
    report = uncertainty_check(model, curve, 0.5 * curve.threshold, lam=1.0, n_samples=10, seed_base=3)
    assert report.kappa0 > 0
    assert report.violations == 0
    assert np.all(report.ranks > 0)


def test_ucp_mass_of_background_eigenfunctions():
    model = make_model('gap')
    report = ucp_mass(model, 0.65)
    norms = field_norms(model.background)
    assert report.gamma_squared == pytest.approx(gamma1(0.15, 0.65, norms) ** 2)
    assert len(report.eigenvalues) == 1
    assert report.min_mass > 0
    assert np.all(report.sfuc_left >= report.sfuc_constant)
    with pytest.raises(ThresholdError):
        ucp_mass(model, 0.65, width=1.0)
    with pytest.raises(BasisError):
        ucp_mass(model, 0.65, width=1e-6)
