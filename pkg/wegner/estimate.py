"""Monte Carlo estimates of E[Tr P_{omega,L}(I)] and their scaling fits."""
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy import stats

from disorder import corner_configurations
from spectra import SolverError, count_in_interval
from utils import batches, mean_and_ci, parallel_map
from .bounds import WegnerError

AXES = ('interval-width', 'volume', 'disorder')
# three side lengths (31, 63, 127) are the standard volume sweep, so allow three cells
MIN_FIT_POINTS = 3


@dataclass(eq=False)
class WegnerCell:
    window: object
    lam: float
    box_side: float
    dim: int
    n_samples: int
    estimate: float
    ci_halfwidth: float
    seed_base: int
    counts: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))
    eta_bound: Optional[int] = None
    corner_minimum: Optional[int] = None
    theoretical_bound: Optional[float] = None
    status: str = 'ok'
    error: str = ''

    @property
    def volume(self):
        return float(self.box_side) ** self.dim


def estimate_expected_trace(model, window, lam, n_samples, seed_base, threads=1, batch_size=None,
                            rel_tol=None, progress=False):
    """Mean eigenvalue count of H_{omega,L} in `window` over samples keyed by (seed_base, index).

    With `batch_size` and `rel_tol` the loop runs whole batches and stops once
    the CI half-width drops under rel_tol times the mean; the stopping point
    only depends on the batch boundaries, never on the thread count.
    """
    if n_samples < 1:
        raise WegnerError(f'n_samples must be >= 1, got {n_samples}')
    grid = model.grid

    def one(index):
        return count_in_interval(model.random_operator(lam, seed_base, index), window)

    counts = []
    try:
        for batch in batches(range(n_samples), batch_size or n_samples):
            counts.extend(parallel_map(one, batch, threads, progress, desc=f'Tr P lam={lam:g}'))
            if rel_tol is not None and len(counts) > 1:
                mean, ci = mean_and_ci(counts)
                if ci < rel_tol * mean:
                    break
    except SolverError as e:
        print(f'cell lam={lam:g} window=[{window.lower:g}, {window.upper:g}] failed: {e}')
        return WegnerCell(window, float(lam), grid.side_length, grid.dim, len(counts), np.nan, np.nan, seed_base,
                          np.array(counts, dtype=int), status='failed', error=str(e))
    mean, ci = mean_and_ci(counts)
    return WegnerCell(window, float(lam), grid.side_length, grid.dim, len(counts), mean, ci, seed_base,
                      np.array(counts, dtype=int))


def eta_bound(model, window, lam):
    """Count for the all-M configuration, a lower bound for every sample on (-inf, E]."""
    return count_in_interval(model.eta_operator(lam), window)


def corner_minimum(model, window, lam):
    """Smallest count over omega in {0, M}^sites; only for a handful of sites."""
    return min(count_in_interval(model.operator_for(omega, lam), window)
               for omega in corner_configurations(model.sites, model.support_max))


def disorder_sweep(model, window, lambdas, n_samples, seed_base, threads=1, corners=False, batch_size=None,
                   rel_tol=None, progress=False):
    lambdas = np.asarray(lambdas, dtype=float)
    if lambdas.size == 0 or np.any(lambdas <= 0) or np.any(np.diff(lambdas) <= 0):
        raise WegnerError('lambda grid must be nonempty, positive and increasing')
    cells = []
    for lam in lambdas:
        cell = estimate_expected_trace(model, window, lam, n_samples, seed_base, threads, batch_size, rel_tol,
                                       progress)
        if cell.status == 'ok':
            try:
                cell.eta_bound = eta_bound(model, window, lam)
                if corners:
                    cell.corner_minimum = corner_minimum(model, window, lam)
            except SolverError as e:
                cell.status, cell.error = 'failed', str(e)
        cells.append(cell)
        print(f'lam={lam:g}: E[Tr P]={cell.estimate:.6g} +- {cell.ci_halfwidth:.3g} eta={cell.eta_bound}')
    return cells


def abscissa(cell, axis):
    if axis == 'interval-width':
        return cell.window.width
    if axis == 'volume':
        return cell.volume
    return cell.lam


@dataclass(frozen=True, eq=False)
class ScalingFit:
    axis: str
    log_slope: float
    slope_ci: float
    points: List[tuple]
    excluded: int = 0


def scaling_fit(cells, axis):
    """Least-squares slope of log(estimate) against log(abscissa); zero estimates are dropped and counted."""
    if axis not in AXES:
        raise WegnerError(f'unknown axis {axis!r}, expected one of {AXES}')
    cells = [c for c in cells if c.status == 'ok']
    if len(cells) < MIN_FIT_POINTS:
        raise WegnerError(f'insufficient points: {len(cells)} cells, need {MIN_FIT_POINTS}')
    points = [(abscissa(c, axis), c.estimate) for c in cells]
    positive = [(x, y) for x, y in points if y > 0]
    if len(positive) < 2:
        raise WegnerError(f'all-zero estimates: only {len(positive)} positive cells along {axis}')
    x, y = np.log(np.array(positive)).T
    fit = stats.linregress(x, y)
    return ScalingFit(axis, float(fit.slope), float(1.96 * fit.stderr), points, len(points) - len(positive))
