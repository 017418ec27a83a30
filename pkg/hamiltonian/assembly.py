"""Peierls-phase finite-difference discretization of (-i grad + A0)^2 + V0."""
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp

from .grid import GridSpec


class AssemblyError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Sparse Hermitian matrix stored as its upper triangle (diagonal included).

    `kept` lists the grid indices that survive the domain mask, in increasing
    order; None means the full box.
    """
    upper: sp.csr_matrix
    kept: Optional[np.ndarray] = None
    grid: Optional[GridSpec] = None

    @property
    def dimension(self):
        return self.upper.shape[0]

    def matrix(self):
        strict = sp.triu(self.upper, k=1)
        return (self.upper + strict.conj().T).tocsr()

    def dense(self):
        return self.matrix().toarray()

    def diagonal(self):
        return self.upper.diagonal().real

    def shifted(self, c):
        return HermitianOperator((self.upper + c * sp.identity(self.dimension, format='csr')).tocsr(),
                                 self.kept, self.grid)

    def hermiticity_defect(self):
        m = self.matrix()
        defect = m - m.conj().T
        return float(abs(defect).max()) if defect.nnz else 0.0

    def embed(self, vectors):
        """Lift vectors on the kept points back onto the full grid (zero on masked points)."""
        if self.kept is None:
            return vectors
        full = np.zeros((self.grid.size,) + vectors.shape[1:], dtype=vectors.dtype)
        full[self.kept] = vectors
        return full

    @classmethod
    def from_matrix(cls, m):
        m = sp.csr_matrix(m, dtype=complex)
        upper = sp.triu(m, k=1) + sp.diags(m.diagonal().real)
        return cls(sp.csr_matrix(upper, dtype=complex))


def _mask_to_keep(domain_mask, size):
    if domain_mask is None:
        return None
    mask = np.asarray(domain_mask)
    if mask.dtype == bool:
        assert mask.size == size, f'mask has {mask.size} entries, grid has {size}'
        removed = mask.ravel()
    else:
        removed = np.zeros(size, dtype=bool)
        removed[mask.astype(int)] = True
    if not removed.any():
        return None
    return np.flatnonzero(~removed)


def assemble_hamiltonian(grid, background, extra_potential=None, domain_mask=None):
    """Dirichlet operator on the grid points not in `domain_mask`.

    Diagonal 2d/h^2 + V0 + shift + extra; hopping from x to x + h e_k is
    -exp(-i h A_k(midpoint)) / h^2, and only that upper entry is stored.
    """
    n, d, h = grid.points_per_side, grid.dim, grid.spacing
    size = grid.size
    diagonal = 2 * d / h ** 2 + background.potential.ravel()
    if extra_potential is not None:
        diagonal = diagonal + np.asarray(extra_potential, dtype=float).reshape(size)

    index = np.arange(size).reshape(grid.shape)
    rows, cols, values = [np.arange(size)], [np.arange(size)], [diagonal.astype(complex)]
    for k in range(d):
        rows.append(index.take(range(n - 1), axis=k).ravel())
        cols.append(index.take(range(1, n), axis=k).ravel())
        a = background.vector_potential[k].take(range(1, n), axis=k).ravel()
        values.append(-np.exp(-1j * h * a) / h ** 2)
    upper = sp.csr_matrix((np.concatenate(values), (np.concatenate(rows), np.concatenate(cols))),
                          shape=(size, size))

    keep = _mask_to_keep(domain_mask, size)
    if keep is not None:
        if keep.size == 0:
            raise AssemblyError('domain mask removes every grid point')
        upper = upper[keep][:, keep]
    return HermitianOperator(upper.tocsr(), keep, grid)


def gershgorin_bounds(operator):
    """Interval containing the whole spectrum."""
    m = operator.matrix()
    diagonal = m.diagonal().real
    radius = np.asarray(abs(m).sum(axis=1)).ravel() - np.abs(diagonal)
    return float((diagonal - radius).min()), float((diagonal + radius).max())
