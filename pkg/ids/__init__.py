from .complement import ComplementDomain, EmptyDomain, complement_domain, complement_operator
from .density import (IDSCurve, InterlacingReport, CouplingLimitReport, ProbeVerdict, DichotomyReport,
                      InconclusiveProbe, classify_probe, staircase_counts, deterministic_staircase, ids_estimate,
                      interlacing_check, coupling_limit, ids_dichotomy)
