"""Dirichlet restriction to the complement of the single-site supports."""
from dataclasses import dataclass

import numpy as np

from disorder.profiles import FACE_TOL


class EmptyDomain(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ComplementDomain:
    mask: np.ndarray   # boolean over grid indices, True = removed
    kept_dimension: int


def complement_domain(grid, centers, delta_plus):
    """Remove every grid point in a closed support cube Lambda_{delta_+}(z_j)."""
    axes = grid.axis_coordinates()
    removed = np.zeros(grid.shape, dtype=bool)
    half = delta_plus / 2
    for z in centers.centers:
        cube = np.ones(grid.shape, dtype=bool)
        for k, c in enumerate(z):
            axis_shape = [1] * grid.dim
            axis_shape[k] = -1
            cube &= (np.abs(axes - c) <= half + FACE_TOL).reshape(axis_shape)
        removed |= cube
    kept = int((~removed).sum())
    if kept == 0:
        raise EmptyDomain('single-site supports cover the whole box; no complement operator exists')
    return ComplementDomain(removed.ravel(), kept)


def complement_operator(model):
    domain = complement_domain(model.grid, model.centers, model.profile.outer_side)
    return model.hamiltonian(mask=domain.mask)
