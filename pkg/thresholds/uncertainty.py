"""Uncertainty relations on spectral subspaces: P U P >= kappa_0 P, ball mass of eigenfunctions."""
from dataclasses import dataclass

import numpy as np

from hamiltonian import field_norms, gershgorin_bounds
from spectra import (BasisError, SpectralWindow, compressed_operator_bottom, eigenfunction_mass,
                     spectral_projection)
from utils import parallel_map
from .constants import UCPConstants, ThresholdError, csfuc, gamma1
from .curve import kappa0

UNCERTAINTY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class UncertaintyReport:
    E1: float
    kappa0: float
    bottoms: np.ndarray       # smallest eigenvalue of P U P on Ran P, per sample
    ranks: np.ndarray         # dim Ran P, per sample
    tolerance: float = UNCERTAINTY_TOL

    @property
    def violations(self):
        return int((self.bottoms < self.kappa0 - self.tolerance).sum())

    @property
    def worst_margin(self):
        finite = self.bottoms[np.isfinite(self.bottoms)]
        return float((finite - self.kappa0).min()) if finite.size else np.inf


def uncertainty_check(model, curve, E1, lam, n_samples, seed_base, threads=1, progress=False):
    """Compress U_L to the spectral subspace of H_{omega,L} below E1 and compare with kappa_0."""
    kappa = kappa0(curve, E1)
    u = model.u_envelope.ravel()

    def one(index):
        operator = model.random_operator(lam, seed_base, index)
        floor = gershgorin_bounds(operator)[0] - 1.0
        _, basis = spectral_projection(operator, SpectralWindow(floor, E1))
        return compressed_operator_bottom(basis, u), basis.shape[1]

    results = parallel_map(one, range(n_samples), threads, progress, desc='uncertainty')
    bottoms, ranks = zip(*results) if results else ((), ())
    return UncertaintyReport(float(E1), kappa, np.array(bottoms, dtype=float), np.array(ranks, dtype=int))


@dataclass(frozen=True, eq=False)
class UCPMassReport:
    window: SpectralWindow
    gamma_squared: float
    eigenvalues: np.ndarray
    masses: np.ndarray        # share of |psi|^2 on the union of balls, per eigenfunction
    sfuc_left: np.ndarray     # |psi|_S^2 + delta^2 G^2 |zeta|^2 for unit psi
    sfuc_constant: np.ndarray

    @property
    def min_mass(self):
        return float(self.masses.min())

    @property
    def ratio(self):
        """Observed minimum mass over the formula value gamma^2."""
        return self.min_mass / self.gamma_squared

    @property
    def sfuc_ratio(self):
        return float((self.sfuc_left / self.sfuc_constant).min())


def ball_mass_lower_bound(operator, eigenvalues, eigenvectors, ball_indicator, potential, norms, delta,
                          constants=UCPConstants(), G=1.0):
    """Both sides of |psi|_S^2 + delta^2 G^2 |zeta|^2 >= C_sfuc |psi|^2 for unit eigenvectors.

    zeta is the eigen-residual (H - E) psi and the zeroth-order term entering
    C_sfuc is E - V, the part of H psi = E psi carried by the potential.
    """
    matrix = operator.matrix()
    region = np.asarray(ball_indicator, dtype=float).ravel() > 0
    potential = np.asarray(potential, dtype=float).ravel()
    left, right = [], []
    for e, psi in zip(eigenvalues, eigenvectors.T):
        psi = psi / np.linalg.norm(psi)
        zeta = matrix @ psi - e * psi
        left.append(float(np.sum(np.abs(psi[region]) ** 2) + delta ** 2 * G ** 2 * np.sum(np.abs(zeta) ** 2)))
        right.append(csfuc(delta, float(np.abs(e - potential).max()), norms.norm_b, norms.norm_c, constants))
    return np.array(left), np.array(right)


def ucp_mass(model, E0, width=None, constants=UCPConstants(), G=1.0):
    """Eigenfunction mass of H_{0,L} on S_{delta_-}(L) for the window [E0 - width, E0].

    The window width defaults to the largest allowed, 2 gamma.
    """
    norms = field_norms(model.background)
    delta = model.profile.inner_radius
    gamma = gamma1(delta, E0, norms, constants)
    width = 2 * gamma if width is None else width
    if width > 2 * gamma:
        raise ThresholdError(f'window width {width:g} exceeds 2 gamma = {2 * gamma:g}')
    window = SpectralWindow(E0 - width, E0)
    operator = model.hamiltonian()
    eigenvalues, basis = spectral_projection(operator, window)
    if eigenvalues.size == 0:
        raise BasisError(f'no eigenvalue of H0 in [{window.lower:g}, {window.upper:g}]')
    region = model.w_indicator > 0
    masses = np.array([eigenfunction_mass(psi, region) for psi in basis.T])
    left, right = ball_mass_lower_bound(operator, eigenvalues, basis, region, model.background.potential,
                                        norms, delta, constants, G)
    return UCPMassReport(window, gamma ** 2, eigenvalues, masses, left, right)
