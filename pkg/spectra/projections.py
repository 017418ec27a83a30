"""Spectral projections, eigenfunction mass and compressed multiplication operators."""
import numpy as np

from .inertia import _clean_count
from .solvers import DENSE_LIMIT, eigen_spectrum

GRAM_TOL = 1e-8


class BasisError(ValueError):
    pass


def spectral_projection(operator, window, dense_limit=DENSE_LIMIT):
    """Orthonormal eigenbasis (columns) of Ran chi_[a,b](H) and its eigenvalues.

    Both ends are located with the dilated inertia counts of count_in_interval,
    so the rank always equals the count.
    """
    k_low = _clean_count(operator, window.lower, -1, dense_limit)
    k = _clean_count(operator, window.upper, +1, dense_limit)
    if k <= k_low:
        return np.zeros(0), np.zeros((operator.dimension, 0), dtype=complex)
    report = eigen_spectrum(operator, k, vectors=True)
    return report.eigenvalues[k_low:k], report.eigenvectors[:, k_low:k]


def eigenfunction_mass(eigenvector, region_indicator, cell_volume=1.0):
    """Share of |psi|^2 carried by the region: sum w|psi|^2 h^d / sum |psi|^2 h^d."""
    density = np.abs(np.asarray(eigenvector).ravel()) ** 2 * cell_volume
    total = density.sum()
    if total == 0:
        raise BasisError('zero vector has no mass')
    weight = np.asarray(region_indicator, dtype=float).ravel()
    return float(np.clip((weight * density).sum() / total, 0.0, 1.0))


def compressed_operator_bottom(projector_basis, multiplier_values, cell_volume=1.0):
    """Smallest eigenvalue of G_kl = sum_x conj(psi_k) U psi_l h^d, the sharp kappa in P U P >= kappa P."""
    basis = np.asarray(projector_basis)
    if basis.ndim == 1:
        basis = basis[:, None]
    if basis.shape[1] == 0:
        return np.inf
    gram = basis.conj().T @ basis * cell_volume
    deviation = np.abs(gram - np.eye(basis.shape[1])).max()
    if deviation > GRAM_TOL:
        raise BasisError(f'basis is not orthonormal (Gram deviation {deviation:.2e})')
    u = np.asarray(multiplier_values, dtype=float).ravel()
    g = basis.conj().T @ (u[:, None] * basis) * cell_volume
    g = 0.5 * (g + g.conj().T)
    # min U <= G <= max U for an orthonormal basis; clip the rounding
    return float(np.clip(np.linalg.eigvalsh(g)[0], u.min(), u.max()))
