"""Lattice sites and (possibly crooked) single-site centers z_j = j + offset_j."""
import itertools
from dataclasses import dataclass

import numpy as np

from .distributions import DisorderError, PLACEMENT_STREAM, keyed_rng

MODES = ('periodic', 'crooked')


@dataclass(frozen=True, eq=False)
class CenterPlacement:
    sites: np.ndarray     # (m, d) integer lattice sites
    offsets: np.ndarray   # (m, d), each in Lambda_{1 - 2 delta_-}(0)
    structure_seed: int
    mode: str
    delta_minus: float

    @property
    def centers(self):
        return self.sites + self.offsets

    def __len__(self):
        return len(self.sites)


def place_centers(grid, delta_minus, structure_seed, mode='periodic', delta_plus=1.0):
    """Centers for every site whose support cube Lambda_{delta_+}(z_j) meets the box.

    Crooked offsets are uniform in the cube of half-side 1/2 - delta_-, which
    keeps B(delta_-, z_j) inside the unit cell of j.
    """
    if not 0 < delta_minus < 0.5:
        raise DisorderError(f'invalid delta_minus {delta_minus}, expected (0, 1/2)')
    if mode not in MODES:
        raise DisorderError(f'unknown placement mode {mode!r}, expected one of {MODES}')
    half = grid.side_length / 2
    reach = int(np.ceil(half + delta_plus / 2 + 0.5))
    wiggle = 0.5 - delta_minus
    sites, offsets = [], []
    for site in itertools.product(range(-reach, reach + 1), repeat=grid.dim):
        if mode == 'crooked':
            offset = keyed_rng(PLACEMENT_STREAM, structure_seed, *site).uniform(-wiggle, wiggle, grid.dim)
        else:
            offset = np.zeros(grid.dim)
        z = np.asarray(site) + offset
        if np.all(np.abs(z) < half + delta_plus / 2):
            sites.append(site)
            offsets.append(offset)
    return CenterPlacement(np.array(sites, dtype=int).reshape(-1, grid.dim),
                           np.array(offsets, dtype=float).reshape(-1, grid.dim),
                           structure_seed, mode, delta_minus)
