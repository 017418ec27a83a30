"""Single-site bumps u with u_- chi_B(delta_-) <= u <= chi_Lambda(delta_+)."""
from dataclasses import dataclass

import numpy as np

from .distributions import DisorderError

# points this close to a face count as lying on it
FACE_TOL = 1e-12
SHAPES = ('indicator-ball', 'indicator-cube', 'tent')


@dataclass(frozen=True)
class SingleSiteProfile:
    shape: str = 'indicator-cube'
    inner_radius: float = 0.25
    outer_side: float = 0.5
    floor: float = 1.0

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise DisorderError(f'unknown profile shape {self.shape!r}, expected one of {SHAPES}')
        if not 0 < self.inner_radius < 0.5:
            raise DisorderError(f'invalid delta_minus {self.inner_radius}, expected (0, 1/2)')
        if not self.outer_side > 0:
            raise DisorderError(f'invalid delta_plus {self.outer_side}, expected > 0')
        if not 0 < self.floor <= 1:
            raise DisorderError(f'invalid u_minus {self.floor}, expected (0, 1]')

    @property
    def reach(self):
        """Max-norm radius outside of which both u and the inner ball vanish."""
        return max(self.outer_side / 2, self.inner_radius)

    def __call__(self, r):
        """Profile at displacements r of shape (..., d); indicators use open sets."""
        r = np.asarray(r, dtype=float)
        if self.shape == 'indicator-ball':
            return self.floor * (np.linalg.norm(r, axis=-1) < self.inner_radius - FACE_TOL)
        if self.shape == 'indicator-cube':
            return 1.0 * (np.abs(r).max(axis=-1) < self.outer_side / 2 - FACE_TOL)
        return np.prod(np.maximum(0.0, 1.0 - 2 * np.abs(r) / self.outer_side), axis=-1)

    def inner_ball(self, r):
        return 1.0 * (np.linalg.norm(np.asarray(r, dtype=float), axis=-1) < self.inner_radius - FACE_TOL)


def check_profile_sandwich(profile, r, values=None):
    values = profile(r) if values is None else values
    lower = profile.floor * profile.inner_ball(r)
    upper = 1.0 * (np.abs(r).max(axis=-1) < profile.outer_side / 2 - FACE_TOL)
    if np.any(values < lower - 1e-12) or np.any(values > upper + 1e-12):
        raise DisorderError(f'{profile.shape} profile with delta_-={profile.inner_radius}, '
                            f'delta_+={profile.outer_side}, u_-={profile.floor} '
                            'violates u_- chi_B <= u <= chi_Lambda on the grid')
