from .grid import GridSpec, GridError, build_grid
from .fields import (Expression, FieldDescription, BackgroundField, FieldNorms, FieldError,
                     sample_background, gauge_transform, field_norms, normalize_ground_energy, load_tabulated)
from .assembly import HermitianOperator, AssemblyError, assemble_hamiltonian, gershgorin_bounds


def _component(source, shape):
    if isinstance(source, str) and source.endswith('.csv'):
        return load_tabulated(source, shape)
    return source


def build(config):
    """Grid and (optionally normalized) background field from a `ModelConfig`."""
    g = config.grid
    grid = build_grid(g.dim, g.side_length, g.points_per_side)
    link_shapes = [tuple(grid.points_per_side + (k == axis) for k in range(grid.dim)) for axis in range(grid.dim)]
    vector = [_component(s, shape) for s, shape in zip(config.fields.vector_potential, link_shapes)]
    description = FieldDescription(vector, _component(config.fields.scalar_potential, grid.shape))
    background = sample_background(description, grid)
    if config.normalize:
        background = normalize_ground_energy(background)
    return grid, background
