"""Finite-volume threshold curves E_{0,L}(t) and the uncertainty constant kappa_0."""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ids.complement import EmptyDomain, complement_operator
from spectra import ground_energy
from utils import parallel_map
from .constants import DEFAULT_T_GRID, ThresholdError

MONOTONE_TOL = 1e-8
SATURATION_TOL = 0.05
ENVELOPES = ('profile', 'ball')


@dataclass(frozen=True, eq=False)
class ThresholdCurve:
    t_values: np.ndarray
    e0_values: np.ndarray
    e0_infinity_estimate: float
    e0_infinity_cross_check: float = np.inf
    e0_zero: float = 0.0
    grid: Optional[object] = None
    envelope: str = 'profile'

    @property
    def covering(self):
        """No complement domain: E0(inf) is infinite."""
        return not np.isfinite(self.e0_infinity_cross_check)

    @property
    def threshold(self):
        return np.inf if self.covering else self.e0_infinity_estimate

    @property
    def discrepancy(self):
        """Relative gap between the saturated curve and the complement ground energy."""
        if self.covering:
            return np.nan
        return abs(self.e0_infinity_cross_check - self.e0_infinity_estimate) / max(1.0, abs(self.e0_infinity_cross_check))

    @property
    def saturated(self):
        return self.covering or self.discrepancy <= SATURATION_TOL


def e0_curve(model, t_grid=DEFAULT_T_GRID, threads=1, envelope='profile', progress=False):
    """Ground energy of H0 + t U_L along t_grid (or of H0 + t u_- W_L for envelope='ball').

    The ground energy of the complement-domain operator bounds the whole curve
    from above and is returned as the cross-check for E0(inf).
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size == 0 or np.any(t_grid <= 0) or np.any(np.diff(t_grid) <= 0):
        raise ThresholdError('t grid must be nonempty, positive and increasing')
    if envelope not in ENVELOPES:
        raise ThresholdError(f'unknown envelope {envelope!r}, expected one of {ENVELOPES}')
    if envelope == 'profile':
        potential = model.u_envelope
    else:
        potential = model.profile.floor * model.w_indicator

    def one(t):
        return ground_energy(model.hamiltonian(t * potential))

    e_zero = ground_energy(model.hamiltonian())
    values = np.array(parallel_map(one, t_grid, threads, progress, desc=f'E0(t) {envelope}'))
    scale = np.maximum(1.0, np.abs(values))
    steps = np.diff(np.concatenate([[e_zero], values]))
    if np.any(steps < -MONOTONE_TOL * scale):
        worst = int(np.argmin(steps))
        raise ThresholdError(f'non-monotone E0(t) at t={t_grid[worst]:g} (step {steps[worst]:.3e}); '
                             'the eigensolver is not resolving the ground state')
    try:
        cross_check = ground_energy(complement_operator(model))
    except EmptyDomain:
        cross_check = np.inf
    if np.any(values > cross_check + MONOTONE_TOL * max(1.0, abs(cross_check))):
        raise ThresholdError(f'E0(t) exceeds the complement ground energy {cross_check:g}')
    curve = ThresholdCurve(t_grid, values, float(values[-1]), float(cross_check), float(e_zero), model.grid, envelope)
    if not curve.saturated:
        print(f'warning: E0(t_max)={curve.e0_infinity_estimate:g} and complement ground energy '
              f'{cross_check:g} differ by {curve.discrepancy:.1%}; raise t_max or refine the grid')
    return curve


def kappa0(curve, E1):
    """max over grid points s with E0(s) >= E1 of (E0(s) - E1) / s."""
    if not E1 > 0:
        raise ThresholdError(f'E1 must be positive, got {E1}')
    if not E1 < curve.e0_infinity_estimate:
        raise ThresholdError(f'E1={E1:g} is not below the E0(inf) estimate {curve.e0_infinity_estimate:g}')
    t = np.asarray(curve.t_values, dtype=float)
    e = np.asarray(curve.e0_values, dtype=float)
    feasible = e >= E1
    if not feasible.any():
        raise ThresholdError(f'no grid point reaches E0(s) >= {E1:g}; extend the t grid')
    return float(np.max((e[feasible] - E1) / t[feasible]))
