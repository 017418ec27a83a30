"""Coupling distributions, their concentration functions and keyed sampling."""
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

KINDS = ('uniform', 'tent')
PLACEMENT_STREAM = 0
COUPLING_STREAM = 1


class DisorderError(ValueError):
    pass


def _zigzag(k):
    k = int(k)
    return 2 * k if k >= 0 else -2 * k - 1


def keyed_rng(*keys):
    """Generator seeded by a stable hash of integer keys (negative keys allowed)."""
    return np.random.default_rng(np.random.SeedSequence([_zigzag(k) for k in keys]))


@dataclass(frozen=True)
class CouplingDistribution:
    kind: str = 'uniform'
    support_max: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DisorderError(f'unknown distribution kind {self.kind!r}, expected one of {KINDS}')
        if not self.support_max > 0:
            raise DisorderError(f'support_max must be positive, got {self.support_max}')

    def draw(self, rng, size=None):
        m = self.support_max
        if self.kind == 'uniform':
            return m * rng.random(size)
        return rng.triangular(0.0, m / 2, m, size)

    @property
    def mean(self):
        return self.support_max / 2

    @property
    def std(self):
        m = self.support_max
        return m / np.sqrt(12) if self.kind == 'uniform' else m / np.sqrt(24)


def concentration(distribution, t):
    """S(t) = sup_a mu([a, a + t])."""
    if t < 0:
        raise DisorderError(f'concentration needs t >= 0, got {t}')
    m = distribution.support_max
    if t >= m:
        return 1.0
    if distribution.kind == 'uniform':
        return t / m
    # tent: the window centered at the mode carries 1 - (1 - t/M)^2
    return 1.0 - (1.0 - t / m) ** 2


def concentration_sup(distributions, t):
    """S_L(t): the supremum of S over the per-site distributions."""
    return max(concentration(mu, t) for mu in distributions)


def empirical_concentration(samples, t):
    """Largest fraction of samples in any window [x, x + t], x a sample."""
    x = np.sort(np.asarray(samples))
    counts = np.searchsorted(x, x + t, side='right') - np.arange(x.size)
    return float(counts.max() / x.size)


@dataclass(frozen=True, eq=False)
class OmegaSample:
    sites: np.ndarray
    values: np.ndarray
    master_seed: int
    sample_index: int

    def as_dict(self):
        return {tuple(int(c) for c in s): float(v) for s, v in zip(self.sites, self.values)}


def sample_omega(distribution, sites, master_seed, sample_index,
                 overrides: Optional[Dict[Tuple[int, ...], CouplingDistribution]] = None):
    """One coupling per site; each site has its own stream keyed by (seed, index, site)."""
    overrides = overrides or {}
    values = np.empty(len(sites))
    for i, site in enumerate(sites):
        mu = overrides.get(tuple(int(c) for c in site), distribution)
        values[i] = mu.draw(keyed_rng(COUPLING_STREAM, master_seed, sample_index, *site))
    return OmegaSample(np.asarray(sites), values, master_seed, sample_index)


def constant_omega(sites, value, master_seed=0, sample_index=0):
    return OmegaSample(np.asarray(sites), np.full(len(sites), float(value)), master_seed, sample_index)


def corner_configurations(sites, support_max, max_sites=6):
    """All omega in {0, M}^sites; only for small lattices."""
    if len(sites) > max_sites:
        raise DisorderError(f'{len(sites)} sites is too many for exhaustive corners (max {max_sites})')
    for bits in range(2 ** len(sites)):
        values = np.array([(bits >> i) & 1 for i in range(len(sites))], dtype=float) * support_max
        yield OmegaSample(np.asarray(sites), values, 0, bits)
