"""Eigenvalue counting by Sylvester inertia of symmetric-indefinite factorizations."""
import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as sla

from .solvers import DENSE_LIMIT, SolverError, SpectralWindow

COLLISION_TOL = 1e-9
DILATION = 1e-8
MAX_RETRIES = 3


class FactorizationBreakdown(SolverError):
    pass


class EndpointCollision(SolverError):
    pass


def _block_negatives(d):
    """Negative eigenvalues of the 1x1/2x2 block diagonal factor of scipy.linalg.ldl."""
    n = d.shape[0]
    negatives, i = 0, 0
    while i < n:
        if i + 1 < n and d[i + 1, i] != 0:
            negatives += int((np.linalg.eigvalsh(d[i:i + 2, i:i + 2]) < 0).sum())
            i += 2
        else:
            if d[i, i].real == 0:
                raise FactorizationBreakdown(f'zero pivot at position {i}')
            negatives += int(d[i, i].real < 0)
            i += 1
    return negatives


def negative_count(operator, shift, dense_limit=DENSE_LIMIT):
    """Number of eigenvalues strictly below `shift`, from the inertia of H - shift."""
    if shift == -np.inf:
        return 0
    if shift == np.inf:
        return operator.dimension
    n = operator.dimension
    shifted = operator.matrix() - shift * sp.identity(n, format='csr')
    if n <= dense_limit:
        _, d, _ = la.ldl(shifted.toarray(), lower=True, hermitian=True)
        return _block_negatives(d)
    # without row pivoting the LU of a Hermitian matrix is L D L^H with D = diag(U)
    try:
        lu = sla.splu(shifted.tocsc(), permc_spec='MMD_AT_PLUS_A', diag_pivot_thresh=0.0,
                      options={'SymmetricMode': True})
    except RuntimeError as e:
        raise FactorizationBreakdown(f'sparse factorization failed at shift {shift}: {e}')
    pivots = lu.U.diagonal().real
    if np.any(pivots == 0) or not np.all(np.isfinite(pivots)):
        raise FactorizationBreakdown(f'singular pivot at shift {shift}')
    return int((pivots < 0).sum())


def _clean_count(operator, endpoint, outward, dense_limit):
    """Count below an endpoint after moving it off any nearby eigenvalue.

    An eigenvalue within COLLISION_TOL of the endpoint shows up as differing
    counts on both sides; the endpoint is then dilated outward.
    """
    if not np.isfinite(endpoint):
        return negative_count(operator, endpoint, dense_limit)
    for attempt in range(MAX_RETRIES + 1):
        eps = COLLISION_TOL * (1 + abs(endpoint))
        below = negative_count(operator, endpoint - eps, dense_limit)
        above = negative_count(operator, endpoint + eps, dense_limit)
        if below == above:
            return below
        if attempt == MAX_RETRIES:
            break
        endpoint = endpoint + outward * DILATION * (attempt + 1) * (1 + abs(endpoint))
    raise EndpointCollision(f'eigenvalue at window endpoint {endpoint} after {MAX_RETRIES} dilations')


def count_in_interval(operator, window, dense_limit=DENSE_LIMIT):
    """Tr chi_[a,b](H) = #{mu <= b} - #{mu < a}."""
    if not isinstance(window, SpectralWindow):
        window = SpectralWindow(*window)
    upper = _clean_count(operator, window.upper, +1, dense_limit)
    lower = _clean_count(operator, window.lower, -1, dense_limit)
    return upper - lower
