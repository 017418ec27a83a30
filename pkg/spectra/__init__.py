from .solvers import (SpectralWindow, SpectralReport, SolverError, DENSE_LIMIT,
                      eigen_spectrum, ground_energy)
from .inertia import (FactorizationBreakdown, EndpointCollision, count_in_interval, negative_count)
from .projections import (BasisError, spectral_projection, eigenfunction_mass, compressed_operator_bottom)
