"""Integrated density of states, interlacing against the complement operator and the large-disorder dichotomy."""
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from hamiltonian import gershgorin_bounds
from spectra import SpectralWindow, count_in_interval, eigen_spectrum
from utils import mean_and_ci, parallel_map
from .complement import EmptyDomain, complement_operator

INTERLACING_TOL = 1e-9
THRESHOLD_BAND = 0.1
VANISHING_RATIO = 0.05


class InconclusiveProbe(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class IDSCurve:
    energies: np.ndarray
    values: np.ndarray        # mean count / L^d
    ci: np.ndarray
    lam: float
    box_side: float
    n_samples: int
    counts: np.ndarray        # (n_samples, len(energies)) integer counts


def staircase_counts(operator, energies):
    """Number of eigenvalues <= E for every E, from one factorization per energy."""
    floor = gershgorin_bounds(operator)[0] - 1.0
    return np.array([count_in_interval(operator, SpectralWindow(floor, max(float(e), floor)))
                     for e in energies], dtype=int)


def deterministic_staircase(operator, energies, volume):
    """Exact counting function from a full diagonalization, divided by the box volume."""
    values = eigen_spectrum(operator).eigenvalues
    return np.searchsorted(values, np.asarray(energies, dtype=float), side='right') / volume


def ids_estimate(model, energies, lam, n_samples, seed_base, threads=1, progress=False):
    energies = np.asarray(energies, dtype=float)
    assert np.all(np.diff(energies) > 0), 'energy grid must be increasing'

    def one(index):
        return staircase_counts(model.random_operator(lam, seed_base, index), energies)

    counts = np.array(parallel_map(one, range(n_samples), threads, progress, desc=f'ids lam={lam:g}'))
    volume = model.grid.volume
    values, ci = zip(*(mean_and_ci(column / volume) for column in counts.T))
    return IDSCurve(energies, np.array(values), np.array(ci), float(lam), model.grid.side_length,
                    int(n_samples), counts)


@dataclass(frozen=True, eq=False)
class InterlacingReport:
    k_max: int
    n_samples: int
    complement_eigenvalues: np.ndarray
    margins: np.ndarray       # (n_samples, k_max), mu_k(complement) - mu_k(sample)
    tolerance: float = INTERLACING_TOL

    @property
    def instances(self):
        return int(self.margins.size)

    @property
    def violations(self):
        return int((self.margins < -self.tolerance).sum())

    @property
    def worst_margin(self):
        return float(self.margins.min())


def _complement_spectrum(model, k_max):
    complement = complement_operator(model)
    if k_max > complement.dimension:
        raise EmptyDomain(f'complement keeps {complement.dimension} points, fewer than k_max={k_max}')
    return eigen_spectrum(complement, k_max).eigenvalues


def interlacing_check(model, k_max, lam, n_samples, seed_base, threads=1, progress=False):
    """mu_k(H^inf_{0,L}) >= mu_k(H_{omega,L}) for k <= k_max on every sample."""
    limit = _complement_spectrum(model, k_max)

    def one(index):
        return eigen_spectrum(model.random_operator(lam, seed_base, index), k_max).eigenvalues

    samples = np.array(parallel_map(one, range(n_samples), threads, progress, desc='interlacing'))
    return InterlacingReport(k_max, n_samples, limit, limit[None, :] - samples)


@dataclass(frozen=True, eq=False)
class CouplingLimitReport:
    t_values: np.ndarray
    eigenvalues: np.ndarray   # (len(t_values), k_max)
    limit: np.ndarray         # mu_k of the complement operator

    @property
    def gaps(self):
        return self.limit[None, :] - self.eigenvalues

    @property
    def monotone(self):
        return bool(np.all(np.diff(self.eigenvalues, axis=0) >= -INTERLACING_TOL))

    def relative_gap(self):
        """Final gap against the eigenvalue scale max(1, |mu_k|)."""
        return float((self.gaps[-1] / np.maximum(1.0, np.abs(self.limit))).max())


def coupling_limit(model, t_values, k_max):
    """mu_k(H0 + t U_L) climbing toward mu_k of the complement operator as t grows."""
    t_values = np.asarray(t_values, dtype=float)
    limit = _complement_spectrum(model, k_max)
    values = np.array([eigen_spectrum(model.coupled_operator(t), k_max).eigenvalues for t in t_values])
    return CouplingLimitReport(t_values, values, limit)


@dataclass
class ProbeVerdict:
    energy: float
    side: str                 # 'below', 'above' or 'band'
    verdict: str              # 'vanishing', 'persistent', 'inconclusive' or 'skipped'
    reason: str = ''
    lambdas: List[float] = field(default_factory=list)
    means: List[float] = field(default_factory=list)
    ci: List[float] = field(default_factory=list)
    complement_count: Optional[int] = None
    violations: int = 0


@dataclass
class DichotomyReport:
    threshold: float
    box_side: float
    n_samples: int
    probes: List[ProbeVerdict]


def classify_probe(energy, threshold, band=THRESHOLD_BAND):
    if abs(energy - threshold) <= band * abs(threshold):
        raise InconclusiveProbe(f'E={energy:g} lies within {band:.0%} of the threshold {threshold:g}')
    return 'below' if energy < threshold else 'above'


def _nonincreasing(means, ci):
    return all(means[i + 1] <= means[i] + ci[i] + ci[i + 1] for i in range(len(means) - 1))


def ids_dichotomy(model, probes, lambdas, n_samples, seed_base, threshold, band=THRESHOLD_BAND,
                  threads=1, progress=False):
    """Finite-volume IDS along a disorder grid at probes on both sides of E0(inf).

    Below the threshold the IDS must fall toward 0; above it every sample count
    must stay at or above the complement count.
    """
    lambdas = [float(x) for x in lambdas]
    if not np.isfinite(threshold):
        notice = 'E0(inf) is infinite (covering regime); no threshold to probe'
        return DichotomyReport(threshold, model.grid.side_length, n_samples,
                               [ProbeVerdict(float(e), 'band', 'skipped', notice) for e in probes])
    if not model.ergodic:
        notice = 'model is not ergodic; the dichotomy needs periodic centers and identical sites'
        return DichotomyReport(threshold, model.grid.side_length, n_samples,
                               [ProbeVerdict(float(e), 'band', 'skipped', notice) for e in probes])
    try:
        complement = complement_operator(model)
    except EmptyDomain as e:
        return DichotomyReport(threshold, model.grid.side_length, n_samples,
                               [ProbeVerdict(float(x), 'band', 'skipped', str(e)) for x in probes])

    verdicts = []
    for energy in probes:
        energy = float(energy)
        try:
            side = classify_probe(energy, threshold, band)
        except InconclusiveProbe as e:
            verdicts.append(ProbeVerdict(energy, 'band', 'inconclusive', str(e)))
            continue
        reference = staircase_counts(complement, [energy])[0]
        probe = ProbeVerdict(energy, side, 'inconclusive', lambdas=lambdas, complement_count=int(reference))
        for lam in lambdas:
            curve = ids_estimate(model, [energy], lam, n_samples, seed_base, threads, progress)
            probe.means.append(float(curve.values[0]))
            probe.ci.append(float(curve.ci[0]))
            probe.violations += int((curve.counts[:, 0] < reference).sum())
        if side == 'below':
            falling = _nonincreasing(probe.means, probe.ci)
            small = probe.means[-1] <= VANISHING_RATIO * probe.means[0]
            if falling and small:
                probe.verdict = 'vanishing'
            else:
                probe.reason = f'IDS did not fall below {VANISHING_RATIO:g} of its first value along the grid'
        elif probe.violations:
            probe.reason = f'{probe.violations} samples counted fewer states than the complement operator'
        elif reference == 0:
            probe.reason = 'complement operator has no eigenvalue below the probe in this box'
        else:
            probe.verdict = 'persistent'
        verdicts.append(probe)
        print(f'dichotomy E={energy:g} ({side}): {probe.verdict} {probe.reason}')
    return DichotomyReport(threshold, model.grid.side_length, n_samples, verdicts)
