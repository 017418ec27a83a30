import numpy as np
import pytest

from hamiltonian import FieldDescription, HermitianOperator, assemble_hamiltonian, build_grid, sample_background
from spectra import (BasisError, FactorizationBreakdown, SpectralWindow, compressed_operator_bottom,
                     count_in_interval, eigen_spectrum, eigenfunction_mass, ground_energy, negative_count,
                     spectral_projection)


def free_operator(dim=1, side=7, n=31):
    grid = build_grid(dim, side, n)
    return assemble_hamiltonian(grid, sample_background(None, grid))


def magnetic_operator():
    grid = build_grid(2, 3, 9)
    background = sample_background(FieldDescription(['-0.75 * x2', '0.75 * x1'], 'cos(x1)'), grid)
    return assemble_hamiltonian(grid, background)


@pytest.mark.parametrize('seed', range(5))
def test_counts_match_dense_eigenvalues(seed):
    op = magnetic_operator()
    values = eigen_spectrum(op).eigenvalues
    rng = np.random.default_rng(seed)
    a, b = np.sort(rng.uniform(values[0] - 1, values[-1] + 1, 2))
    expected = int(((values >= a) & (values <= b)).sum())
    assert count_in_interval(op, SpectralWindow(a, b)) == expected


@pytest.mark.parametrize('operator', [free_operator(), free_operator(2, 3, 9), magnetic_operator()])
def test_sparse_inertia_agrees_with_dense(operator):
    values = eigen_spectrum(operator).eigenvalues
    edges = np.linspace(values[0] - 0.5, values[-1] + 0.5, 7)
    for a, b in zip(edges[:-1], edges[1:]):
        window = SpectralWindow(a, b)
        assert count_in_interval(operator, window, dense_limit=0) == count_in_interval(operator, window)


def test_eigenvalue_on_endpoint_is_counted():
    op = free_operator()
    values = eigen_spectrum(op).eigenvalues
    assert count_in_interval(op, SpectralWindow(values[0] - 1, values[1])) == 2
    assert count_in_interval(op, SpectralWindow(values[1], values[2])) == 2
    assert count_in_interval(op, SpectralWindow(values[1], values[1])) == 1
    assert count_in_interval(op, (values[1], values[2]), dense_limit=0) == 2


def test_unbounded_windows():
    op = free_operator()
    assert count_in_interval(op, SpectralWindow(-np.inf, 1e12)) == op.dimension
    assert count_in_interval(op, SpectralWindow(-np.inf, -1.0)) == 0
    assert count_in_interval(op, SpectralWindow()) == op.dimension
    assert negative_count(op, -np.inf) == 0
    assert negative_count(op, np.inf) == op.dimension


def test_shift_on_eigenvalue_breaks_factorization():
    op = HermitianOperator.from_matrix(np.diag([1.0, 2.0, 3.0]))
    assert negative_count(op, 2.5) == 2
    with pytest.raises(FactorizationBreakdown):
        negative_count(op, 2.0)
    assert count_in_interval(op, SpectralWindow(2.0, 3.0)) == 2


def test_window_validation():
    with pytest.raises(ValueError):
        SpectralWindow(1.0, 0.0)
    window = SpectralWindow.centered(1.0, 0.5)
    assert (window.lower, window.upper, window.width) == (0.75, 1.25, 0.5)


def test_iterative_eigensolver_matches_closed_form():
    op = free_operator(n=63)
    h = op.grid.spacing
    k = np.arange(1, 6)
    expected = (2 - 2 * np.cos(k * np.pi / 64)) / h ** 2
    report = eigen_spectrum(op, 5, dense_limit=10)
    assert report.method == 'iterative'
    np.testing.assert_allclose(report.eigenvalues, expected, rtol=1e-8)
    assert ground_energy(op) == pytest.approx(expected[0], rel=1e-10)


def test_spectral_projection_is_orthonormal():
    op = magnetic_operator()
    values = eigen_spectrum(op).eigenvalues
    window = SpectralWindow(values[2], values[6])
    inside, basis = spectral_projection(op, window)
    np.testing.assert_allclose(inside, values[2:7], atol=1e-9)
    np.testing.assert_allclose(basis.conj().T @ basis, np.eye(5), atol=1e-10)

    empty, nothing = spectral_projection(op, SpectralWindow(values[0] - 2, values[0] - 1))
    assert empty.size == 0 and nothing.shape == (op.dimension, 0)
    assert compressed_operator_bottom(nothing, np.ones(op.dimension)) == np.inf


def test_compressed_operator_bottom():
    op = free_operator()
    _, basis = spectral_projection(op, SpectralWindow(-np.inf, 50.0))
    assert compressed_operator_bottom(basis, np.ones(op.dimension)) == pytest.approx(1.0)
    assert compressed_operator_bottom(basis, np.zeros(op.dimension)) == pytest.approx(0.0)
    left_half = (op.grid.coordinates()[:, 0] < 0).astype(float)
    assert 0.0 <= compressed_operator_bottom(basis, left_half) <= 0.5
    with pytest.raises(BasisError):
        compressed_operator_bottom(2 * basis, np.ones(op.dimension))


def test_eigenfunction_mass():
    vector = np.ones(8)
    region = np.r_[np.ones(4), np.zeros(4)]
    assert eigenfunction_mass(vector, region) == pytest.approx(0.5)
    assert eigenfunction_mass(vector, np.ones(8), cell_volume=0.1) == pytest.approx(1.0)
    with pytest.raises(BasisError):
        eigenfunction_mass(np.zeros(8), region)


def random_hermitian(rng, n):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return HermitianOperator.from_matrix(0.5 * (m + m.conj().T))


@pytest.mark.parametrize('seed', range(200))
def test_inertia_counts_match_eigvalsh(seed):
    rng = np.random.default_rng(seed)
    op = random_hermitian(rng, int(rng.integers(2, 40)))
    values = np.linalg.eigvalsh(op.dense())
    a, b = np.sort(rng.uniform(values[0] - 1, values[-1] + 1, 2))
    expected = int(((values >= a) & (values <= b)).sum())
    assert count_in_interval(op, SpectralWindow(a, b)) == expected


@pytest.mark.parametrize('c', [-3.5, 0.25, 40.0])
def test_spectrum_is_shift_covariant(c):
    op = magnetic_operator()
    values = eigen_spectrum(op).eigenvalues
    shifted = op.shifted(c)
    np.testing.assert_allclose(eigen_spectrum(shifted).eigenvalues, values + c, atol=1e-10)
    np.testing.assert_allclose(shifted.dense(), op.dense() + c * np.eye(op.dimension), atol=1e-14)
    window = SpectralWindow(values[1] - 0.1, values[4] + 0.1)
    moved = SpectralWindow(window.lower + c, window.upper + c)
    assert count_in_interval(shifted, moved) == count_in_interval(op, window)


@pytest.mark.parametrize('seed', range(5))
def test_larger_potential_raises_every_eigenvalue(seed):
    rng = np.random.default_rng(seed)
    grid = build_grid(2, 3, 9)
    background = sample_background(None, grid)
    low = rng.uniform(-2, 2, grid.size)
    high = low + rng.uniform(0, 3, grid.size)
    below = eigen_spectrum(assemble_hamiltonian(grid, background, low)).eigenvalues
    above = eigen_spectrum(assemble_hamiltonian(grid, background, high)).eigenvalues
    assert np.all(above >= below - 1e-10)


@pytest.mark.parametrize('seed', range(5))
def test_removing_points_never_lowers_eigenvalues(seed):
    rng = np.random.default_rng(seed)
    grid = build_grid(2, 3, 9)
    background = sample_background(FieldDescription(['-0.75 * x2', '0.75 * x1']), grid)
    small = rng.random(grid.size) < 0.2
    large = small | (rng.random(grid.size) < 0.2)
    outer = assemble_hamiltonian(grid, background, domain_mask=small)
    inner = assemble_hamiltonian(grid, background, domain_mask=large)
    k = inner.dimension
    assert np.all(eigen_spectrum(inner).eigenvalues >= eigen_spectrum(outer, k).eigenvalues - 1e-10)


@pytest.mark.parametrize('seed', range(5))
def test_compressed_bottom_ignores_basis_rotation(seed):
    rng = np.random.default_rng(seed)
    op = magnetic_operator()
    _, basis = spectral_projection(op, SpectralWindow(-np.inf, eigen_spectrum(op).eigenvalues[5]))
    m = basis.shape[1]
    q, _ = np.linalg.qr(rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m)))
    u = rng.uniform(0, 1, op.dimension)
    assert compressed_operator_bottom(basis @ q, u) == pytest.approx(compressed_operator_bottom(basis, u), abs=1e-10)


def test_projection_rank_equals_count_on_eigenvalue_endpoints():
    op = magnetic_operator()
    values = eigen_spectrum(op).eigenvalues
    for i, j in [(0, 3), (2, 6), (4, 4), (3, 10)]:
        window = SpectralWindow(values[i], values[j])
        inside, basis = spectral_projection(op, window)
        assert basis.shape[1] == len(inside) == count_in_interval(op, window)
        assert inside[0] == pytest.approx(values[i], abs=1e-9)
