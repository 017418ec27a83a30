import numpy as np
import pytest

from conftest import make_model
from disorder import (CouplingDistribution, DisorderError, SingleSiteProfile, alloy_basis, check_profile_sandwich,
                      concentration, concentration_sup, corner_configurations, empirical_concentration, keyed_rng,
                      place_centers, sample_omega)
from hamiltonian import build_grid
from spectra import SpectralWindow, count_in_interval


@pytest.mark.parametrize('m', [1.0, 2.5])
def test_concentration_closed_forms(m):
    uniform, tent = CouplingDistribution('uniform', m), CouplingDistribution('tent', m)
    for t in [0.0, 0.1 * m, 0.5 * m, 0.9 * m]:
        assert concentration(uniform, t) == pytest.approx(t / m)
        assert concentration(tent, t) == pytest.approx(1 - (1 - t / m) ** 2)
    assert concentration(uniform, m) == 1.0
    assert concentration(tent, 3 * m) == 1.0
    assert concentration_sup([uniform, tent], 0.2 * m) == pytest.approx(0.36)
    with pytest.raises(DisorderError):
        concentration(uniform, -0.1)


@pytest.mark.parametrize('kind', ['uniform', 'tent'])
def test_empirical_concentration_matches(kind):
    mu = CouplingDistribution(kind, 1.0)
    samples = mu.draw(keyed_rng(7, 0), 20000)
    assert samples.min() >= 0 and samples.max() <= 1
    for t in [0.1, 0.3, 0.5]:
        assert empirical_concentration(samples, t) == pytest.approx(concentration(mu, t), abs=0.02)


def test_distribution_validation():
    with pytest.raises(DisorderError):
        CouplingDistribution('gaussian', 1.0)
    with pytest.raises(DisorderError):
        CouplingDistribution('uniform', 0.0)


def test_keyed_sampling_is_deterministic():
    sites = np.array([[-2], [-1], [0], [1], [2]])
    mu = CouplingDistribution()
    a = sample_omega(mu, sites, 11, 3)
    np.testing.assert_array_equal(a.values, sample_omega(mu, sites, 11, 3).values)
    assert not np.array_equal(a.values, sample_omega(mu, sites, 11, 4).values)
    assert not np.array_equal(a.values, sample_omega(mu, sites, 12, 3).values)
    # a site's coupling does not depend on which other sites are present
    assert sample_omega(mu, sites[2:3], 11, 3).values[0] == a.values[2]
    assert a.as_dict()[(-2,)] == a.values[0]


def test_overrides_use_their_own_support():
    sites = np.array([[0], [1]])
    omega = sample_omega(CouplingDistribution('uniform', 1.0), sites, 0, 0,
                         overrides={(1,): CouplingDistribution('uniform', 0.01)})
    assert 0 <= omega.values[1] <= 0.01


def test_corner_configurations():
    sites = np.array([[0], [1], [2]])
    corners = list(corner_configurations(sites, 2.0))
    assert len(corners) == 8
    assert {tuple(c.values) for c in corners} == {(a, b, c) for a in (0., 2.) for b in (0., 2.) for c in (0., 2.)}
    with pytest.raises(DisorderError):
        list(corner_configurations(np.arange(7)[:, None], 1.0))


def test_profile_validation():
    with pytest.raises(DisorderError):
        SingleSiteProfile('indicator-cube', 0.5, 1.0)
    with pytest.raises(DisorderError):
        SingleSiteProfile('star', 0.25, 1.0)
    with pytest.raises(DisorderError):
        SingleSiteProfile('indicator-cube', 0.25, 1.0, floor=0.0)


@pytest.mark.parametrize('shape', ['indicator-ball', 'indicator-cube', 'tent'])
def test_profiles_are_sandwiched(shape):
    rng = np.random.default_rng(0)
    r = rng.uniform(-0.6, 0.6, (2000, 2))
    profile = SingleSiteProfile(shape, 0.15, 0.8, 0.5)
    check_profile_sandwich(profile, r)
    assert profile(np.zeros(2)) > 0
    assert profile(np.array([0.45, 0.0])) == 0


def test_sandwich_violation_is_reported():
    profile = SingleSiteProfile('indicator-ball', 0.25, 0.4)
    with pytest.raises(DisorderError):
        check_profile_sandwich(profile, np.array([[0.22, 0.0]]))
    with pytest.raises(DisorderError):
        alloy_basis(build_grid(1, 3, 63), place_centers(build_grid(1, 3, 63), 0.25, 0, 'periodic', 0.4), profile)
    cube = SingleSiteProfile('indicator-cube', 0.15, 0.4)
    with pytest.raises(DisorderError):
        check_profile_sandwich(cube, np.zeros((1, 1)), values=np.zeros(1))


@pytest.mark.parametrize('dim,side,delta_plus,expected', [(1, 7, 0.4, 7), (1, 7, 1.0, 7), (2, 3, 1.0, 9),
                                                          (1, 7, 2.0, 9)])
def test_periodic_placement(dim, side, delta_plus, expected):
    grid = build_grid(dim, side, 15)
    centers = place_centers(grid, 0.2, 0, 'periodic', delta_plus)
    assert len(centers) == expected
    np.testing.assert_array_equal(centers.centers, centers.sites)


def test_crooked_placement():
    grid = build_grid(2, 5, 15)
    a = place_centers(grid, 0.2, 4, 'crooked', 0.4)
    b = place_centers(grid, 0.2, 4, 'crooked', 0.4)
    c = place_centers(grid, 0.2, 5, 'crooked', 0.4)
    np.testing.assert_array_equal(a.offsets, b.offsets)
    assert not np.array_equal(a.offsets, c.offsets)
    assert np.abs(a.offsets).max() <= 0.3
    assert np.all(np.abs(a.centers) < 2.5 + 0.2)
    with pytest.raises(DisorderError):
        place_centers(grid, 0.2, 0, 'hexagonal')
    with pytest.raises(DisorderError):
        place_centers(grid, 0.6, 0)


def test_covering_envelope_is_one():
    model = make_model('covering', side=3, n=7)
    np.testing.assert_array_equal(model.u_envelope, np.ones(7))
    np.testing.assert_array_equal(model.w_indicator, [1, 0, 0, 1, 0, 0, 1])
    omega = model.omega(0, 0)
    v = model.potential(omega, 2.0).v_omega
    nearest = np.rint(model.grid.axis_coordinates()).astype(int)
    lookup = omega.as_dict()
    np.testing.assert_allclose(v, [2.0 * lookup[(j,)] for j in nearest])


def test_gap_envelope_has_holes():
    model = make_model('gap')
    assert 0 < model.u_envelope.mean() < 1
    assert set(np.unique(model.u_envelope)) == {0.0, 1.0}
    assert np.all(model.w_indicator <= model.u_envelope)


def test_omega_override_gives_background():
    model = make_model('gap', omega_override=0.0)
    op = model.random_operator(5.0, 0, 0)
    assert abs(op.matrix() - model.hamiltonian().matrix()).max() == 0


@pytest.mark.parametrize('seed', range(5))
def test_eta_operator_dominates(seed):
    model = make_model('gap', side=3, n=31)
    eta = model.eta_operator(3.0)
    sample = model.random_operator(3.0, seed, 0)
    for e in [5.0, 20.0, 80.0]:
        window = SpectralWindow(-np.inf, e)
        assert count_in_interval(eta, window) <= count_in_interval(sample, window)
