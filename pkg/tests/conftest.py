import pytest

from disorder import CouplingDistribution, DisorderModel, SingleSiteProfile, place_centers
from hamiltonian import build_grid, normalize_ground_energy, sample_background
from presets import get_preset


def make_model(preset='gap', dim=1, side=7, n=63, structure_seed=0, omega_override=None, **disorder):
    params = get_preset(preset).disorder()
    params.update(disorder)
    grid = build_grid(dim, side, n)
    background = normalize_ground_energy(sample_background(None, grid))
    profile = SingleSiteProfile(params['shape'], params['delta_minus'], params['delta_plus'], params['u_minus'])
    centers = place_centers(grid, params['delta_minus'], structure_seed, params['placement'], params['delta_plus'])
    distribution = CouplingDistribution(**params['distribution'])
    return DisorderModel(grid, background, profile, centers, distribution,
                         omega_override=omega_override, ergodic=params['ergodic'])


@pytest.fixture
def model_factory():
    return make_model
