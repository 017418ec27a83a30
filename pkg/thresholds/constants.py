"""Closed-form unique continuation constants and the E0(t) lower bound."""
from dataclasses import dataclass

import numpy as np

DEFAULT_T_GRID = np.logspace(-2, 6, 30)


class ThresholdError(ValueError):
    pass


@dataclass(frozen=True)
class UCPConstants:
    """Dimensional constants N1, N2 and the leading constants C1, C2, C3 of the Wegner bounds."""
    N1: float = 1.0
    N2: float = 1.0
    C1: float = 1.0
    C2: float = 1.0
    C3: float = 1.0

    def __post_init__(self):
        if self.N1 < 1 or self.N2 < 1:
            raise ThresholdError(f'N1 and N2 must be >= 1, got N1={self.N1}, N2={self.N2}')
        if min(self.C1, self.C2, self.C3) <= 0:
            raise ThresholdError('leading constants C1, C2, C3 must be positive')

    def describe(self):
        return f'N1={self.N1:g} N2={self.N2:g} C1={self.C1:g} C2={self.C2:g} C3={self.C3:g}'


def _check_delta(delta):
    # 1/2 itself is accepted so the formulas can be evaluated at the endpoint
    if not 0 < delta <= 0.5:
        raise ThresholdError(f'out-of-range delta {delta}, expected (0, 1/2)')


def _pow23(x):
    return abs(x) ** (2 / 3)


def gamma1(delta_minus, E0, norms, constants=UCPConstants()):
    """gamma_1 with gamma_1^2 = delta_-^{N2 (1 + |E0|^{2/3} + |b0|^2 + |c0|^{2/3})} / 2."""
    _check_delta(delta_minus)
    if not E0 > 0:
        raise ThresholdError(f'gamma1 needs E0 > 0, got {E0}')
    exponent = constants.N2 * (1 + _pow23(E0) + norms.norm_b ** 2 + _pow23(norms.norm_c))
    return float(np.sqrt(0.5 * delta_minus ** exponent))


def gamma2(delta_minus, E0, norms, lam, M, delta_plus, dim, constants=UCPConstants()):
    """gamma_2 = delta_-^{N2 (1 + |E0|^{2/3} + |b0|^2 + (|c0| + lam M (2 + delta_+)^d)^{2/3})} / 2, not squared."""
    _check_delta(delta_minus)
    if not E0 > 0:
        raise ThresholdError(f'gamma2 needs E0 > 0, got {E0}')
    if lam < 0 or M < 0:
        raise ThresholdError(f'gamma2 needs lam, M >= 0, got lam={lam}, M={M}')
    potential = norms.norm_c + lam * M * (2 + delta_plus) ** dim
    exponent = constants.N2 * (1 + _pow23(E0) + norms.norm_b ** 2 + _pow23(potential))
    return float(0.5 * delta_minus ** exponent)


def csfuc(delta, norm_V, norm_b, norm_c, constants=UCPConstants()):
    _check_delta(delta)
    exponent = constants.N1 * (1 + _pow23(norm_V) + norm_b ** 2 + _pow23(norm_c))
    return float(delta ** exponent)


def e0_lower_bound(t, u_minus, delta_minus, norm_V0, norm_b, norm_c, constants=UCPConstants()):
    """E0(t) >= t u_- delta_-^{N1 (1 + (|V0| + t u_-)^{2/3} + |b0|^2 + |c0|^{2/3})}."""
    if t < 0:
        raise ThresholdError(f'negative coupling t={t}')
    if t == 0:
        return 0.0
    return t * u_minus * csfuc(delta_minus, norm_V0 + t * u_minus, norm_b, norm_c, constants)


def e0_infinity_lower_bound(u_minus, delta_minus, norms, constants=UCPConstants(), t_grid=DEFAULT_T_GRID):
    """Best lower bound on E0(inf) over a t-grid; returns (bound, maximizing t)."""
    values = [e0_lower_bound(t, u_minus, delta_minus, norms.norm_V0, norms.norm_b, norms.norm_c, constants)
              for t in t_grid]
    best = int(np.argmax(values))
    return float(values[best]), float(t_grid[best])


def n1_threshold(curve, u_minus, delta_minus, norms, constants=UCPConstants(), n1_grid=range(1, 65), tol=1e-10):
    """Smallest N1 on the grid for which the lower bound stays under the measured E_{0,L}(t).

    None when no grid value works.
    """
    for n1 in n1_grid:
        trial = UCPConstants(n1, constants.N2, constants.C1, constants.C2, constants.C3)
        bounds = np.array([e0_lower_bound(t, u_minus, delta_minus, norms.norm_V0, norms.norm_b, norms.norm_c, trial)
                           for t in curve.t_values])
        if np.all(bounds <= curve.e0_values + tol):
            return float(n1)
    return None
