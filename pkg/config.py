"""Strict YAML experiment configs parsed into frozen dataclasses."""
import math
from dataclasses import MISSING, asdict, dataclass, field, fields, replace
from typing import Optional, Tuple

import numpy as np
import yaml

from presets import get_preset

KINDS = ('wegner-sweep', 'disorder-sweep', 'thresholds', 'ids', 'interlacing', 'phase-scan', 'ucp-mass')


class ConfigError(ValueError):
    def __init__(self, path, message):
        super().__init__(f'{path}: {message}' if path else message)
        self.path = path


def _number(value, path):
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        raise ConfigError(path, f'expected a number, got {value!r}')
    try:
        return float(value)
    except ValueError:
        raise ConfigError(path, f'expected a number, got {value!r}')


def _integer(value, path):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(path, f'expected an integer, got {value!r}')
    return value


def _positive_integer(value, path):
    value = _integer(value, path)
    if value < 1:
        raise ConfigError(path, f'expected an integer >= 1, got {value}')
    return value


def _boolean(value, path):
    if not isinstance(value, bool):
        raise ConfigError(path, f'expected true or false, got {value!r}')
    return value


def _optional(parse):
    return lambda value, path: None if value is None else parse(value, path)


def _choice(*options):
    def parse(value, path):
        if value not in options:
            raise ConfigError(path, f'{value!r} is not one of {list(options)}')
        return value
    return parse


def _source(value, path):
    """Field component: a number, an expression string or a .csv table path."""
    if isinstance(value, str):
        return value
    return _number(value, path)


def _grid(value, path):
    """Either an explicit list or {start, stop, num, scale: linear|log}."""
    if isinstance(value, dict):
        _check_keys(value, ('start', 'stop', 'num', 'scale'), path)
        for key in ('start', 'stop', 'num'):
            if key not in value:
                raise ConfigError(f'{path}.{key}', 'missing required key')
        start, stop = _number(value['start'], f'{path}.start'), _number(value['stop'], f'{path}.stop')
        num = _positive_integer(value['num'], f'{path}.num')
        scale = _choice('linear', 'log')(value.get('scale', 'linear'), f'{path}.scale')
        if scale == 'log':
            if start <= 0 or stop <= 0:
                raise ConfigError(path, 'log-spaced grids need positive start and stop')
            points = np.geomspace(start, stop, num)
        else:
            points = np.linspace(start, stop, num)
        values = tuple(float(x) for x in points)
    elif isinstance(value, (list, tuple)):
        values = tuple(_number(x, f'{path}[{i}]') for i, x in enumerate(value))
    else:
        raise ConfigError(path, f'expected a list or a {{start, stop, num}} mapping, got {value!r}')
    if not values:
        raise ConfigError(path, 'empty grid')
    return values


def _increasing(value, path):
    values = _grid(value, path)
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ConfigError(path, f'grid must be strictly increasing, got {list(values)}')
    return values


def _positive_increasing(value, path):
    values = _increasing(value, path)
    if values[0] <= 0:
        raise ConfigError(path, f'grid must be positive, got {list(values)}')
    return values


def _check_keys(data, known, path):
    for key in data:
        if key not in known:
            raise ConfigError(f'{path}.{key}' if path else str(key), 'unknown key')


def _nested(cls):
    return lambda value, path: parse_section(cls, value, path)


def _listed(cls):
    def parse(value, path):
        if not isinstance(value, list):
            raise ConfigError(path, f'expected a list, got {value!r}')
        return tuple(parse_section(cls, x, f'{path}[{i}]') for i, x in enumerate(value))
    return parse


def _with(parse, default=MISSING):
    if default is MISSING:
        return field(metadata={'parse': parse})
    return field(default=default, metadata={'parse': parse})


def parse_section(cls, data, path=''):
    """Build dataclass `cls` from a mapping, rejecting unknown and missing keys."""
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(path, f'expected a mapping, got {data!r}')
    _check_keys(data, [f.name for f in fields(cls)], path)
    kwargs = {}
    for f in fields(cls):
        sub = f'{path}.{f.name}' if path else f.name
        if f.name not in data:
            if f.default is MISSING and f.default_factory is MISSING:
                raise ConfigError(sub, 'missing required key')
            continue
        parse = f.metadata.get('parse')
        kwargs[f.name] = parse(data[f.name], sub) if parse else data[f.name]
    try:
        return cls(**kwargs)
    except ValueError as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(path, str(e))


@dataclass(frozen=True)
class GridConfig:
    dim: int = _with(_integer)
    side_length: float = _with(_number)
    points_per_side: int = _with(_integer)


@dataclass(frozen=True)
class FieldConfig:
    vector_potential: tuple = _with(lambda v, p: tuple(_source(x, f'{p}[{i}]') for i, x in enumerate(v)), ())
    scalar_potential: object = _with(_source, 0.0)


@dataclass(frozen=True)
class DistributionConfig:
    kind: str = _with(_choice('uniform', 'tent'), 'uniform')
    support_max: float = _with(_number, 1.0)


@dataclass(frozen=True)
class OverrideConfig:
    site: tuple = _with(lambda v, p: tuple(_integer(x, f'{p}[{i}]') for i, x in enumerate(v)))
    kind: str = _with(_choice('uniform', 'tent'), 'uniform')
    support_max: float = _with(_number, 1.0)


@dataclass(frozen=True)
class DisorderConfig:
    shape: str = _with(_choice('indicator-ball', 'indicator-cube', 'tent'))
    delta_minus: float = _with(_number)
    delta_plus: float = _with(_number)
    u_minus: float = _with(_number, 1.0)
    placement: str = _with(_choice('periodic', 'crooked'), 'periodic')
    distribution: DistributionConfig = _with(_nested(DistributionConfig), DistributionConfig())
    overrides: Tuple[OverrideConfig, ...] = _with(_listed(OverrideConfig), ())
    omega_override: Optional[float] = _with(_optional(_number), None)
    ergodic: bool = _with(_boolean, False)


@dataclass(frozen=True)
class ModelConfig:
    grid: GridConfig = _with(_nested(GridConfig))
    disorder: DisorderConfig = _with(_nested(DisorderConfig))
    fields: FieldConfig = _with(_nested(FieldConfig), FieldConfig())
    preset: Optional[str] = None
    normalize: bool = _with(_boolean, True)


def parse_model(data, path='model'):
    """Preset values first, explicit disorder keys on top."""
    if not isinstance(data, dict):
        raise ConfigError(path, f'expected a mapping, got {data!r}')
    data = dict(data)
    name = data.get('preset')
    if name is not None:
        try:
            preset = get_preset(name)
        except KeyError as e:
            raise ConfigError(f'{path}.preset', e.args[0])
        merged = preset.disorder()
        explicit = data.get('disorder') or {}
        if not isinstance(explicit, dict):
            raise ConfigError(f'{path}.disorder', f'expected a mapping, got {explicit!r}')
        if isinstance(explicit.get('distribution'), dict):
            explicit = dict(explicit, distribution=dict(merged['distribution'], **explicit['distribution']))
        merged.update(explicit)
        data['disorder'] = merged
    return parse_section(ModelConfig, data, path)


@dataclass(frozen=True)
class ConstantsConfig:
    N1: float = _with(_number, 1.0)
    N2: float = _with(_number, 1.0)
    C1: float = _with(_number, 1.0)
    C2: float = _with(_number, 1.0)
    C3: float = _with(_number, 1.0)


@dataclass(frozen=True)
class SeedsConfig:
    structure_seed: int = _with(_integer)
    master_seed: int = _with(_integer)


@dataclass(frozen=True)
class WegnerSweepConfig:
    axis: str = _with(_choice('interval-width', 'volume'))
    center: float = _with(_number)
    lam: float = _with(_number)
    n_samples: int = _with(_positive_integer)
    widths: Optional[tuple] = _with(_optional(_positive_increasing), None)
    width: Optional[float] = _with(_optional(_number), None)
    side_lengths: Optional[tuple] = _with(_optional(_positive_increasing), None)
    batch_size: Optional[int] = _with(_optional(_positive_integer), None)
    rel_tol: Optional[float] = _with(_optional(_number), None)
    theorem: Optional[int] = _with(_optional(_choice(1, 2, 3)), None)

    def __post_init__(self):
        if self.axis == 'interval-width' and self.widths is None:
            raise ValueError('axis interval-width needs widths')
        if self.axis == 'volume' and (self.width is None or self.side_lengths is None):
            raise ValueError('axis volume needs width and side_lengths')


@dataclass(frozen=True)
class DisorderSweepConfig:
    lambdas: tuple = _with(_increasing)
    n_samples: int = _with(_positive_integer)
    upper: Optional[float] = _with(_optional(_number), None)
    threshold_factor: Optional[float] = _with(_optional(_number), None)
    lower: float = _with(_number, -math.inf)
    corners: bool = _with(_boolean, False)
    t_grid: Optional[tuple] = _with(_optional(_positive_increasing), None)
    batch_size: Optional[int] = _with(_optional(_positive_integer), None)
    rel_tol: Optional[float] = _with(_optional(_number), None)

    def __post_init__(self):
        if (self.upper is None) == (self.threshold_factor is None):
            raise ValueError('give exactly one of upper and threshold_factor')


@dataclass(frozen=True)
class ThresholdsConfig:
    t_grid: Optional[tuple] = _with(_optional(_positive_increasing), None)
    envelope: str = _with(_choice('profile', 'ball', 'both'), 'both')
    E1_factor: float = _with(_number, 0.5)
    uncertainty: bool = _with(_boolean, True)
    lam: float = _with(_number, 1.0)
    n_samples: int = _with(_positive_integer, 10)


@dataclass(frozen=True)
class DichotomyConfig:
    lambdas: tuple = _with(_increasing)
    n_samples: int = _with(_positive_integer)
    probe_factors: tuple = _with(_increasing, (0.5, 2.0))
    band: float = _with(_number, 0.1)


@dataclass(frozen=True)
class IDSConfig:
    energies: tuple = _with(_increasing)
    lam: float = _with(_number)
    n_samples: int = _with(_positive_integer)
    dichotomy: Optional[DichotomyConfig] = _with(_optional(_nested(DichotomyConfig)), None)
    t_grid: Optional[tuple] = _with(_optional(_positive_increasing), None)


@dataclass(frozen=True)
class InterlacingConfig:
    k_max: int = _with(_positive_integer)
    n_samples: int = _with(_positive_integer)
    lam: float = _with(_number, 1.0)
    t_values: Optional[tuple] = _with(_optional(_positive_increasing), None)


@dataclass(frozen=True)
class PhaseScanConfig:
    lambdas: tuple = _with(_increasing)
    n_samples: int = _with(_positive_integer)
    energies: Optional[tuple] = _with(_optional(_increasing), None)
    energy_factors: Optional[tuple] = _with(_optional(_increasing), None)
    t_grid: Optional[tuple] = _with(_optional(_positive_increasing), None)

    def __post_init__(self):
        if (self.energies is None) == (self.energy_factors is None):
            raise ValueError('give exactly one of energies and energy_factors')


@dataclass(frozen=True)
class UCPMassConfig:
    E0: float = _with(_number)
    width: Optional[float] = _with(_optional(_number), None)
    G: float = _with(_number, 1.0)


SWEEPS = {
    'wegner-sweep': WegnerSweepConfig,
    'disorder-sweep': DisorderSweepConfig,
    'thresholds': ThresholdsConfig,
    'ids': IDSConfig,
    'interlacing': InterlacingConfig,
    'phase-scan': PhaseScanConfig,
    'ucp-mass': UCPMassConfig,
}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    model: ModelConfig
    seeds: SeedsConfig
    sweep: object
    constants: ConstantsConfig = ConstantsConfig()
    output: str = 'outputs/'

    def with_seed(self, master_seed):
        return replace(self, seeds=replace(self.seeds, master_seed=int(master_seed)))

    def as_dict(self):
        return asdict(self)


def parse_experiment(data):
    if not isinstance(data, dict):
        raise ConfigError('', f'config must be a mapping, got {type(data).__name__}')
    _check_keys(data, ('experiment', 'model', 'seeds', 'sweep', 'constants', 'output'), '')
    for key in ('experiment', 'model', 'seeds'):
        if key not in data:
            raise ConfigError(key, 'missing required key')
    kind = _choice(*KINDS)(data['experiment'], 'experiment')
    output = data.get('output', 'outputs/')
    if not isinstance(output, str):
        raise ConfigError('output', f'expected a directory path, got {output!r}')
    return ExperimentConfig(
        experiment=kind,
        model=parse_model(data['model']),
        seeds=parse_section(SeedsConfig, data['seeds'], 'seeds'),
        sweep=parse_section(SWEEPS[kind], data.get('sweep'), 'sweep'),
        constants=parse_section(ConstantsConfig, data.get('constants'), 'constants'),
        output=output,
    )


def load_config(path):
    try:
        with open(path) as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise ConfigError('', f'cannot read {path}: {e.strerror}')
    except yaml.YAMLError as e:
        raise ConfigError('', f'{path} is not valid YAML: {e}')
    return parse_experiment(data)
