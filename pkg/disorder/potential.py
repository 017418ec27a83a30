"""The alloy-type potential V_omega and its envelopes U_L and W_L on a grid."""
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .profiles import check_profile_sandwich


@dataclass(frozen=True, eq=False)
class SiteBasis:
    """Columns u_j(x - z_j) and chi_B(delta_-, z_j)(x) on the grid, one per site."""
    profiles: sp.csc_matrix
    balls: sp.csc_matrix


@dataclass(frozen=True, eq=False)
class PotentialField:
    v_omega: np.ndarray
    u_envelope: np.ndarray
    w_indicator: np.ndarray


def _near_points(grid, center, reach):
    axes = grid.axis_coordinates()
    local = [np.flatnonzero(np.abs(axes - c) < reach + 1e-12) for c in center]
    if any(ix.size == 0 for ix in local):
        return None, None
    mesh = np.meshgrid(*local, indexing='ij')
    flat = np.ravel_multi_index(tuple(m.ravel() for m in mesh), grid.shape)
    displacement = np.stack([axes[m.ravel()] for m in mesh], axis=-1) - center
    return flat, displacement


def alloy_basis(grid, centers, profile):
    """Evaluate every translated profile on the grid points near its center.

    The profile sandwich is checked on the same points.
    """
    rows, cols, values = [], [], []
    ball_rows, ball_cols = [], []
    for j, z in enumerate(centers.centers):
        flat, r = _near_points(grid, z, profile.reach)
        if flat is None:
            continue
        u = profile(r)
        check_profile_sandwich(profile, r, u)
        nonzero = u != 0
        rows.append(flat[nonzero])
        cols.append(np.full(nonzero.sum(), j))
        values.append(u[nonzero])
        inside = profile.inner_ball(r) > 0
        ball_rows.append(flat[inside])
        ball_cols.append(np.full(inside.sum(), j))
    shape = (grid.size, len(centers))

    def build(r, c, v=None):
        if not r:
            return sp.csc_matrix(shape)
        r, c = np.concatenate(r), np.concatenate(c)
        v = np.concatenate(v) if v is not None else np.ones(r.size)
        return sp.csc_matrix((v, (r, c)), shape=shape)
    return SiteBasis(build(rows, cols, values), build(ball_rows, ball_cols))


def assemble_random_potential(grid, centers, profile, omega, lam, basis=None):
    """v_omega = lam * sum_j omega_j u(x - z_j), with U_L and W_L from the same centers."""
    basis = basis or alloy_basis(grid, centers, profile)
    assert len(omega.values) == basis.profiles.shape[1], 'omega and centers disagree on the site list'
    v = lam * (basis.profiles @ omega.values)
    u = np.asarray(basis.profiles.sum(axis=1)).ravel()
    w = np.asarray(basis.balls.sum(axis=1)).ravel()
    return PotentialField(v.reshape(grid.shape), u.reshape(grid.shape), w.reshape(grid.shape))
