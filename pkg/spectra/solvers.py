"""Eigenvalues of assembled operators: dense LAPACK below DENSE_LIMIT, shift-invert Lanczos above."""
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg as la
import scipy.sparse.linalg as sla

from hamiltonian import gershgorin_bounds

DENSE_LIMIT = 4096
RESIDUAL_TOL = 1e-8


class SolverError(RuntimeError):
    def __init__(self, message, residual=None):
        super().__init__(message if residual is None else f'{message} (residual {residual:.3e})')
        self.residual = residual


@dataclass(frozen=True)
class SpectralWindow:
    lower: float = -np.inf
    upper: float = np.inf

    def __post_init__(self):
        if not self.lower <= self.upper:
            raise ValueError(f'empty window [{self.lower}, {self.upper}]')

    @property
    def width(self):
        return self.upper - self.lower

    def contains(self, values):
        values = np.asarray(values)
        return (values >= self.lower) & (values <= self.upper)

    @classmethod
    def centered(cls, center, width):
        return cls(center - width / 2, center + width / 2)


@dataclass(frozen=True, eq=False)
class SpectralReport:
    eigenvalues: np.ndarray
    count_in_window: int
    window: SpectralWindow
    method: str
    residual_bound: float
    eigenvectors: Optional[np.ndarray] = None


def _residual(matrix, values, vectors):
    if vectors.shape[1] == 0:
        return 0.0
    r = matrix @ vectors - vectors * values
    return float(np.linalg.norm(r, axis=0).max())


def eigen_spectrum(operator, how_many='all', window=None, vectors=False, dense_limit=DENSE_LIMIT):
    """Smallest `how_many` eigenvalues, ascending, with the max residual norm."""
    n = operator.dimension
    if n < 1:
        raise SolverError('operator has dimension 0')
    k = n if how_many == 'all' else int(how_many)
    assert 1 <= k <= n, f'asked for {how_many} eigenvalues of a {n}-dimensional operator'
    window = window or SpectralWindow()
    matrix = operator.matrix()
    lower, upper = gershgorin_bounds(operator)
    scale = max(1.0, abs(lower), abs(upper))

    if n <= dense_limit or k >= n - 1:
        method = 'dense'
        values, vecs = la.eigh(matrix.toarray(), subset_by_index=[0, k - 1])
    else:
        method = 'iterative'
        try:
            values, vecs = sla.eigsh(matrix, k=k, sigma=lower - 1.0, which='LM')
        except sla.ArpackNoConvergence as e:
            residual = _residual(matrix, e.eigenvalues, e.eigenvectors) if len(e.eigenvalues) else None
            raise SolverError(f'shift-invert Lanczos did not converge for {k} eigenvalues', residual)
        order = np.argsort(values)
        values, vecs = values[order], vecs[:, order]

    residual = _residual(matrix, values, vecs)
    if residual > RESIDUAL_TOL * scale:
        raise SolverError(f'{method} eigensolver did not reach tolerance', residual)
    return SpectralReport(eigenvalues=values,
                          count_in_window=int(window.contains(values).sum()),
                          window=window,
                          method=method,
                          residual_bound=residual,
                          eigenvectors=vecs if vectors else None)


def ground_energy(operator):
    return float(eigen_spectrum(operator, 1).eigenvalues[0])
