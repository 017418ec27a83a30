"""Dirichlet grids over the open cube (-L/2, L/2)^d."""
from dataclasses import dataclass

import numpy as np


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    dim: int
    side_length: float
    points_per_side: int

    @property
    def spacing(self):
        return self.side_length / (self.points_per_side + 1)

    @property
    def shape(self):
        return (self.points_per_side,) * self.dim

    @property
    def size(self):
        return self.points_per_side ** self.dim

    @property
    def cell_volume(self):
        return self.spacing ** self.dim

    @property
    def volume(self):
        return float(self.side_length) ** self.dim

    def axis_coordinates(self, padded=False):
        """Interior coordinates along one axis; `padded` adds the two boundary points."""
        n = self.points_per_side
        ticks = np.arange(0, n + 2) if padded else np.arange(1, n + 1)
        return -self.side_length / 2 + ticks * self.spacing

    def coordinates(self, padded=False):
        """Point coordinates as an array of shape (*shape, dim), C order."""
        axes = [self.axis_coordinates(padded)] * self.dim
        return np.stack(np.meshgrid(*axes, indexing='ij'), axis=-1)

    def link_midpoints(self, axis):
        """Midpoints of the n+1 links along `axis`, boundary links included.

        Link i joins padded points i and i+1, so link i for 1 <= i <= n-1 joins
        interior points i-1 and i.
        """
        padded = self.axis_coordinates(padded=True)
        axes = [self.axis_coordinates()] * self.dim
        axes[axis] = 0.5 * (padded[:-1] + padded[1:])
        return np.stack(np.meshgrid(*axes, indexing='ij'), axis=-1)

    def index(self, multi_index):
        return int(np.ravel_multi_index(tuple(multi_index), self.shape))

    def multi_index(self, index):
        return tuple(int(i) for i in np.unravel_index(index, self.shape))

    def with_side(self, side_length):
        """Same spacing on a box of another side length."""
        n = int(round(side_length / self.spacing)) - 1
        return build_grid(self.dim, side_length, n)


def build_grid(dim, side_length, points_per_side):
    if dim not in (1, 2, 3):
        raise GridError(f'invalid dimension {dim}, expected 1, 2 or 3')
    if not side_length > 0 or points_per_side < 2:
        raise GridError(f'non-positive size: side_length={side_length}, points_per_side={points_per_side}')
    return GridSpec(int(dim), float(side_length), int(points_per_side))
