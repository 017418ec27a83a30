"""Right-hand sides of the three Wegner estimates and their calibration on measured cells."""
from dataclasses import dataclass, replace

import numpy as np

from disorder import concentration_sup
from thresholds import UCPConstants, gamma2, kappa0

THEOREMS = (1, 2, 3)
# Theorem k has outer exponent 2^{k' + log d / log 2} = 2^{k'} d, k' = 2 for the first, 1 otherwise
OUTER_POWER = {1: 4, 2: 2, 3: 2}


class WegnerError(ValueError):
    pass


class MissingParameter(WegnerError):
    pass


def _need(parameters, *names):
    missing = [name for name in names if parameters.get(name) is None]
    if missing:
        raise MissingParameter(f'missing parameter(s) {", ".join(missing)}')
    return [parameters[name] for name in names]


def _concentration(parameters):
    """S_L(|I| / lam), taken as 1 when lam = 0."""
    if parameters.get('S') is not None:
        return float(parameters['S'])
    width, lam, distributions = _need(parameters, 'width', 'lam', 'distributions')
    if lam == 0:
        return 1.0
    return concentration_sup(distributions, width / lam)


def theoretical_bound(theorem_id, parameters, constants=UCPConstants()):
    """C_k (prefactor)^{2^k d} S_L(lam^-1 |I|) |Lambda_L| for theorem k.

    `parameters` holds dim and volume plus, per theorem: lam and M (first);
    u_minus, E0 and gamma2 or its inputs (second); kappa0 or a curve, and E1
    (third). S may be passed directly instead of width, lam and distributions.
    """
    if theorem_id not in THEOREMS:
        raise WegnerError(f'unknown theorem {theorem_id}, expected one of {THEOREMS}')
    dim, volume = _need(parameters, 'dim', 'volume')
    power = OUTER_POWER[theorem_id] * dim
    s = _concentration(parameters)
    if theorem_id == 1:
        lam, M = _need(parameters, 'lam', 'M')
        return float(constants.C1 * (1 + (lam * M) ** power) * s * volume)
    if theorem_id == 2:
        u_minus, E0 = _need(parameters, 'u_minus', 'E0')
        g = parameters.get('gamma2')
        if g is None:
            args = _need(parameters, 'delta_minus', 'norms', 'lam', 'M', 'delta_plus')
            g = gamma2(args[0], E0, args[1], args[2], args[3], args[4], dim, constants)
        return float(constants.C2 * (u_minus ** -2 * g ** -4 * (1 + E0)) ** power * s * volume)
    E1, = _need(parameters, 'E1')
    k = parameters.get('kappa0')
    if k is None:
        curve, = _need(parameters, 'curve')
        k = kappa0(curve, E1)
    return float(constants.C3 * (k ** -2 * (1 + E1)) ** power * s * volume)


def cell_parameters(cell, parameters):
    """Shared parameters completed by the ones a cell carries."""
    return dict(parameters, lam=cell.lam, width=cell.window.width, dim=cell.dim,
                volume=float(cell.box_side) ** cell.dim)


@dataclass(frozen=True, eq=False)
class Calibration:
    theorem_id: int
    constant: float
    reference: int
    bounds: np.ndarray
    violations: list          # cell indices with estimate > bound (1 + 3 relative CI)


def calibrate_bound(cells, theorem_id, parameters, constants=UCPConstants(), reference=0):
    """Fit the leading constant C_k on one cell and test it on the others."""
    unit = replace(constants, **{f'C{theorem_id}': 1.0})
    raw = np.array([theoretical_bound(theorem_id, cell_parameters(c, parameters), unit) for c in cells])
    ref = cells[reference]
    if not ref.estimate > 0 or not raw[reference] > 0:
        raise WegnerError(f'reference cell {reference} has estimate {ref.estimate} and cannot calibrate')
    constant = ref.estimate / raw[reference]
    bounds = constant * raw
    violations = []
    for i, (cell, bound) in enumerate(zip(cells, bounds)):
        if i == reference or cell.status != 'ok':
            continue
        relative_ci = cell.ci_halfwidth / cell.estimate if cell.estimate > 0 else 0.0
        if cell.estimate > bound * (1 + 3 * relative_ci):
            violations.append(i)
    return Calibration(theorem_id, float(constant), reference, bounds, violations)
