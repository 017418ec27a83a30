from .bounds import (WegnerError, MissingParameter, Calibration, THEOREMS, theoretical_bound, cell_parameters,
                     calibrate_bound)
from .estimate import (WegnerCell, ScalingFit, AXES, estimate_expected_trace, eta_bound, corner_minimum,
                       disorder_sweep, scaling_fit)
