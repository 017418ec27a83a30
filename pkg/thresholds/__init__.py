from .constants import (UCPConstants, ThresholdError, DEFAULT_T_GRID, gamma1, gamma2, csfuc, e0_lower_bound,
                        e0_infinity_lower_bound, n1_threshold)
from .curve import ThresholdCurve, e0_curve, kappa0
from .uncertainty import (UncertaintyReport, UCPMassReport, uncertainty_check, ball_mass_lower_bound, ucp_mass)


def build(config):
    """UCPConstants from the `constants` block of an experiment config."""
    c = config.constants
    return UCPConstants(c.N1, c.N2, c.C1, c.C2, c.C3)
