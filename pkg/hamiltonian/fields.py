"""Background magnetic and electric fields sampled on a grid."""
import ast
from dataclasses import dataclass, replace
from typing import Any, Sequence

import numpy as np
import pandas as pd

from .grid import GridSpec


class FieldError(ValueError):
    pass


FUNCTIONS = {'sin': np.sin, 'cos': np.cos}
CONSTANTS = {'pi': np.pi}
VARIABLES = ('x1', 'x2', 'x3')
_NODES = (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Constant, ast.Name, ast.Call, ast.Load,
          ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.USub, ast.UAdd)


class Expression:
    """A closed-form field component.

    `source` is a number, a string in the small vocabulary (constants, x1..x3,
    + - * / **, sin, cos, pi), a callable taking coordinates of shape (..., d),
    or an already tabulated array.
    """

    def __init__(self, source=0.0):
        self.source = source
        self.fn = None
        self.table = None
        if isinstance(source, Expression):
            self.fn, self.table = source.fn, source.table
        elif isinstance(source, np.ndarray):
            self.table = np.asarray(source, dtype=float)
        elif callable(source):
            self.fn = source
        elif isinstance(source, (int, float)):
            value = float(source)
            self.fn = lambda x: np.full(x.shape[:-1], value)
        elif isinstance(source, str):
            self.fn = self._compile(source)
        else:
            raise FieldError(f'unsupported field source: {source!r}')

    @staticmethod
    def _compile(text):
        try:
            tree = ast.parse(text.strip(), mode='eval')
        except SyntaxError as e:
            raise FieldError(f'cannot parse expression {text!r}: {e.msg}')
        for node in ast.walk(tree):
            if not isinstance(node, _NODES):
                raise FieldError(f'{type(node).__name__} not allowed in expression {text!r}')
            if isinstance(node, ast.Name) and node.id not in FUNCTIONS and node.id not in CONSTANTS \
                    and node.id not in VARIABLES:
                raise FieldError(f'unknown name {node.id!r} in expression {text!r}')
            if isinstance(node, ast.Call) and (not isinstance(node.func, ast.Name) or node.func.id not in FUNCTIONS
                                               or len(node.args) != 1 or node.keywords):
                raise FieldError(f'only sin(.) and cos(.) calls are allowed in {text!r}')
            if isinstance(node, ast.Constant) and not isinstance(node.value, (int, float)):
                raise FieldError(f'non-numeric constant in expression {text!r}')
        code = compile(tree, '<field>', 'eval')

        def fn(x):
            scope = dict(FUNCTIONS, **CONSTANTS)
            for k, name in enumerate(VARIABLES[:x.shape[-1]]):
                scope[name] = x[..., k]
            for name in VARIABLES[x.shape[-1]:]:
                scope[name] = np.zeros(x.shape[:-1])
            return np.broadcast_to(np.asarray(eval(code, {'__builtins__': {}}, scope), dtype=float),
                                   x.shape[:-1])
        return fn

    def __call__(self, coords):
        if self.table is not None:
            if self.table.shape != coords.shape[:-1]:
                raise FieldError(f'tabulated field has shape {self.table.shape}, expected {coords.shape[:-1]}')
            return self.table
        return np.array(np.broadcast_to(self.fn(coords), coords.shape[:-1]), dtype=float)

    def __repr__(self):
        return f'Expression({self.source!r})'


def load_tabulated(path, shape):
    """Read a CSV with one row per point: integer index columns then a value column."""
    table = pd.read_csv(path)
    if table.shape[1] != len(shape) + 1:
        raise FieldError(f'{path}: expected {len(shape)} index columns and one value column')
    index = table.iloc[:, :-1].to_numpy(dtype=int)
    values = np.full(shape, np.nan)
    try:
        values[tuple(index.T)] = table.iloc[:, -1].to_numpy(dtype=float)
    except IndexError:
        raise FieldError(f'{path}: index out of range for shape {shape}')
    if np.isnan(values).any():
        raise FieldError(f'{path}: {int(np.isnan(values).sum())} grid entries missing')
    return values


@dataclass
class FieldDescription:
    vector_potential: Sequence[Any] = ()
    scalar_potential: Any = 0.0


@dataclass(frozen=True, eq=False)
class BackgroundField:
    grid: GridSpec
    vector_potential: tuple   # per axis k, shape n+1 along k and n elsewhere
    scalar_potential: np.ndarray
    energy_shift: float = 0.0

    def with_shift(self, energy_shift):
        return replace(self, energy_shift=float(energy_shift))

    @property
    def potential(self):
        return self.scalar_potential + self.energy_shift


@dataclass(frozen=True)
class FieldNorms:
    norm_b: float
    norm_c: float
    norm_V0: float
    norm_divA: float


def _finite(name, values):
    if not np.all(np.isfinite(values)):
        raise FieldError(f'non-finite sample in {name}')
    return values


def sample_background(description, grid):
    if description is None:
        description = FieldDescription()
    components = list(description.vector_potential) or [0.0] * grid.dim
    if len(components) != grid.dim:
        raise FieldError(f'vector potential has {len(components)} components, grid has dimension {grid.dim}')
    links = []
    for k, source in enumerate(components):
        values = Expression(source)(grid.link_midpoints(k))
        links.append(_finite(f'A_{k + 1}', np.array(values, dtype=float)))
    scalar = Expression(description.scalar_potential)(grid.coordinates())
    scalar = _finite('V0', np.array(scalar, dtype=float))
    return BackgroundField(grid, tuple(links), scalar, 0.0)


def gauge_transform(background, gauge_function):
    """Replace A_k by A_k + (chi(x + h e_k) - chi(x)) / h on every link.

    A callable gauge function is evaluated on the padded grid; an array holds
    interior values and is padded with zeros on the boundary.
    """
    grid = background.grid
    h = grid.spacing
    if isinstance(gauge_function, np.ndarray):
        chi = np.pad(np.asarray(gauge_function, dtype=float).reshape(grid.shape), 1)
    else:
        chi = Expression(gauge_function)(grid.coordinates(padded=True))
    chi = _finite('gauge function', chi)
    links = []
    for k, a in enumerate(background.vector_potential):
        inner = [slice(1, -1)] * grid.dim
        inner[k] = slice(None)
        links.append(a + np.diff(chi[tuple(inner)], axis=k) / h)
    return replace(background, vector_potential=tuple(links))


def field_norms(background, grid=None):
    """Grid maxima of the b0/c0 coefficients; lower bounds of the continuum sup-norms.

    |A0(x)| uses the mean of the two links adjacent to x on each axis. norm_b is
    twice the larger of the per-link maximum and that pointwise Euclidean
    maximum; in 1-D, or with one nonzero component, this is 2 max |A_k| over
    links, and in general it keeps norm_c <= norm_V0 + (norm_b/2)^2 + norm_divA.
    V0 includes the energy shift from normalize_ground_energy, since that is
    the potential H0 is built with.
    """
    grid = grid or background.grid
    n, h = grid.points_per_side, grid.spacing
    a_squared = np.zeros(grid.shape)
    div = np.zeros(grid.shape)
    link_max = 0.0
    for k, a in enumerate(background.vector_potential):
        left, right = a.take(range(n), axis=k), a.take(range(1, n + 1), axis=k)
        a_squared += (0.5 * (left + right)) ** 2
        div += (right - left) / h
        link_max = max(link_max, float(np.abs(a).max()))
    potential = background.potential
    c = np.sqrt((potential + a_squared) ** 2 + div ** 2)
    return FieldNorms(norm_b=2 * max(link_max, float(np.sqrt(a_squared.max()))),
                      norm_c=float(c.max()),
                      norm_V0=float(np.abs(potential).max()),
                      norm_divA=float(np.abs(div).max()))


def normalize_ground_energy(background, grid=None):
    """Shift V0 so the discrete H0 on this box has smallest eigenvalue 0."""
    from spectra import ground_energy  # spectra imports this package
    from .assembly import assemble_hamiltonian

    grid = grid or background.grid
    e = ground_energy(assemble_hamiltonian(grid, background))
    return background.with_shift(background.energy_shift - e)
