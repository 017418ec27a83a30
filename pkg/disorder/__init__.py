from .distributions import (CouplingDistribution, OmegaSample, DisorderError, concentration, concentration_sup,
                            empirical_concentration, sample_omega, constant_omega, corner_configurations,
                            keyed_rng)
from .profiles import SingleSiteProfile, check_profile_sandwich
from .placement import CenterPlacement, place_centers
from .potential import PotentialField, SiteBasis, alloy_basis, assemble_random_potential
from .model import DisorderModel


def build(config, grid, background, structure_seed):
    """DisorderModel for a `ModelConfig` on an already built grid and background."""
    d = config.disorder
    profile = SingleSiteProfile(d.shape, d.delta_minus, d.delta_plus, d.u_minus)
    centers = place_centers(grid, d.delta_minus, structure_seed, d.placement, d.delta_plus)
    distribution = CouplingDistribution(d.distribution.kind, d.distribution.support_max)
    overrides = {tuple(o.site): CouplingDistribution(o.kind, o.support_max) for o in d.overrides}
    return DisorderModel(grid, background, profile, centers, distribution, overrides,
                         d.omega_override, ergodic=d.ergodic)
