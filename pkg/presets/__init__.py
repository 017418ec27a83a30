""" named single-site geometries for the alloy-type model
"""


class Preset:
    # Disorder block defaults; explicit keys in a config override them.
    name = None
    shape = 'indicator-cube'
    delta_minus = 0.25
    delta_plus = 1.0
    u_minus = 1.0
    placement = 'periodic'
    distribution = {'kind': 'uniform', 'support_max': 1.0}
    ergodic = False
    description = ''

    @classmethod
    def disorder(cls):
        return {
            'shape': cls.shape,
            'delta_minus': cls.delta_minus,
            'delta_plus': cls.delta_plus,
            'u_minus': cls.u_minus,
            'placement': cls.placement,
            'distribution': dict(cls.distribution),
            'ergodic': cls.ergodic,
        }


class Covering(Preset):
    # open cubes of side 1.2 overlap across every face: sum_j u_j >= 1 on any grid,
    # and = 1 on grids with no point within 0.1 of a half-integer
    name = 'covering'
    delta_minus = 0.25
    delta_plus = 1.2
    description = 'overlapping cube bumps on Z^d, covering condition holds, E0(inf) = inf'


class Gap(Preset):
    name = 'gap'
    delta_minus = 0.15
    delta_plus = 0.4
    description = 'small cube bumps on Z^d leaving a connected complement, finite E0(inf)'


class Ergodic(Gap):
    name = 'ergodic'
    ergodic = True
    description = 'gap geometry with identical sites and distributions, for the IDS'


class Crooked(Preset):
    name = 'crooked'
    delta_minus = 0.2
    delta_plus = 0.4
    placement = 'crooked'
    description = 'small cube bumps at randomly displaced centers z_j in the unit cell of j'


PRESETS = (Covering, Gap, Ergodic, Crooked)


def get_preset(name):
    for preset in PRESETS:
        if preset.name == name:
            return preset
    raise KeyError(f'Unknown preset: {name}, expected one of {[p.name for p in PRESETS]}')
