"""Runs one configured experiment end to end: builds the model, sweeps, writes reports."""
from dataclasses import replace
from datetime import datetime, timezone

import numpy as np
import wandb

import disorder
import hamiltonian
import thresholds
from config import ConfigError
from hamiltonian import field_norms
from ids import (EmptyDomain, InconclusiveProbe, complement_operator, deterministic_staircase, ids_dichotomy,
                 ids_estimate, interlacing_check, coupling_limit, staircase_counts)
from reports import Reporter, RunManifest, config_digest
from spectra import DENSE_LIMIT, BasisError, SpectralWindow
from thresholds import (DEFAULT_T_GRID, ThresholdError, csfuc, e0_curve, e0_infinity_lower_bound, e0_lower_bound,
                        gamma1, gamma2, kappa0, n1_threshold, uncertainty_check, ucp_mass)
from wegner import (WegnerError, calibrate_bound, disorder_sweep, estimate_expected_trace, eta_bound,
                    scaling_fit)

# failures of an experiment's own preconditions; recorded as failed cells
EXPERIMENT_ERRORS = (EmptyDomain, InconclusiveProbe, ThresholdError, WegnerError, BasisError)


def _now():
    return datetime.now(timezone.utc).isoformat(timespec='seconds')


def _window_row(cell):
    return {
        'window_lower': cell.window.lower,
        'window_upper': cell.window.upper,
        'width': cell.window.width,
        'box_side': cell.box_side,
        'lam': cell.lam,
        'estimate': cell.estimate,
        'ci': cell.ci_halfwidth,
        'n_samples': cell.n_samples,
        'eta_bound': np.nan if cell.eta_bound is None else cell.eta_bound,
        'theoretical_bound': np.nan if cell.theoretical_bound is None else cell.theoretical_bound,
        'seed_base': cell.seed_base,
        'status': cell.status,
    }


def build_model(model_config, structure_seed, side_length=None):
    """Disorder model on the configured box, or on a box of another side with the same spacing."""
    if side_length is not None:
        g = model_config.grid
        grid = hamiltonian.build_grid(g.dim, g.side_length, g.points_per_side).with_side(side_length)
        model_config = replace(model_config, grid=replace(g, side_length=grid.side_length,
                                                          points_per_side=grid.points_per_side))
    grid, background = hamiltonian.build(model_config)
    return disorder.build(model_config, grid, background, structure_seed)


class Laboratory(object):
    def __init__(self, config, out_dir=None, threads=1, progress=True):
        self.config = config
        self.threads = max(1, int(threads))
        self.progress = progress
        self.reporter = Reporter(out_dir or config.output)
        self.constants = thresholds.build(config)
        self.seed = config.seeds.master_seed
        self.model = self.build_model()
        self.cells = []
        print(f'{config.experiment}: {self.model.grid} with {len(self.model.sites)} sites, '
              f'{self.constants.describe()}')

    def build_model(self, side_length=None):
        return build_model(self.config.model, self.config.seeds.structure_seed, side_length)

    def log(self, metrics):
        if wandb.run is not None:
            wandb.log({f'{self.config.experiment}/{k}': v for k, v in metrics.items()})

    def record(self, name, status='ok', error=''):
        self.cells.append({'name': name, 'status': status, 'error': error})

    def threshold_curve(self, t_grid=None):
        return e0_curve(self.model, DEFAULT_T_GRID if t_grid is None else t_grid, self.threads,
                        progress=self.progress)

    def run(self):
        manifest = RunManifest(config_digest(self.config), self.config.experiment, self.threads, _now())
        experiment = getattr(self, self.config.experiment.replace('-', '_'))
        try:
            experiment(self.config.sweep)
        except EXPERIMENT_ERRORS as e:
            print(f'{self.config.experiment} failed: {e}')
            self.record(self.config.experiment, 'failed', str(e))
        manifest.cells = self.cells
        manifest.finished = _now()
        self.reporter.write_manifest(manifest)
        print(f'wrote {len(self.reporter.files)} files to {self.reporter.out_dir}')
        return manifest

    def _record_cells(self, cells, prefix):
        for i, cell in enumerate(cells):
            self.record(f'{prefix}[{i}]', cell.status, cell.error)
            if cell.status == 'ok':
                self.log({'estimate': cell.estimate, 'ci': cell.ci_halfwidth, 'lam': cell.lam,
                          'width': cell.window.width, 'box_side': cell.box_side})

    def _bound_parameters(self, theorem, model, upper):
        norms = field_norms(model.background)
        profile = model.profile
        parameters = {'M': model.support_max, 'distributions': model.distributions()}
        if theorem == 2:
            parameters.update(u_minus=profile.floor, E0=upper, delta_minus=profile.inner_radius,
                              delta_plus=profile.outer_side, norms=norms)
        if theorem == 3:
            parameters.update(E1=upper, curve=self.threshold_curve())
        return parameters

    def wegner_sweep(self, s):
        if s.axis == 'interval-width':
            jobs = [(self.model, SpectralWindow.centered(s.center, w)) for w in s.widths]
        else:
            jobs = [(self.build_model(L), SpectralWindow.centered(s.center, s.width)) for L in s.side_lengths]
        cells = []
        for model, window in jobs:
            cell = estimate_expected_trace(model, window, s.lam, s.n_samples, self.seed, self.threads,
                                           s.batch_size, s.rel_tol, self.progress)
            if cell.status == 'ok':
                cell.eta_bound = eta_bound(model, window, s.lam)
            print(f'L={cell.box_side:g} |I|={window.width:g}: E[Tr P]={cell.estimate:.6g} +- {cell.ci_halfwidth:.3g}')
            cells.append(cell)
        self._record_cells(cells, s.axis)

        report = {'axis': s.axis, 'constants': self.constants, 'fit': None, 'calibration': None}
        try:
            fit = scaling_fit(cells, s.axis)
            report['fit'] = {'log_slope': fit.log_slope, 'slope_ci': fit.slope_ci, 'excluded': fit.excluded}
            print(f'log-log slope along {s.axis}: {fit.log_slope:.4f} +- {fit.slope_ci:.4f}')
            self.log({'log_slope': fit.log_slope})
        except WegnerError as e:
            report['fit_error'] = str(e)
        if s.theorem is not None:
            upper = max(c.window.upper for c in cells)
            try:
                calibration = calibrate_bound(cells, s.theorem, self._bound_parameters(s.theorem, self.model, upper),
                                              self.constants)
                for cell, bound in zip(cells, calibration.bounds):
                    cell.theoretical_bound = float(bound)
                report['calibration'] = {'theorem': s.theorem, 'constant': calibration.constant,
                                         'violations': calibration.violations}
            except (WegnerError, ThresholdError) as e:
                report['calibration_error'] = str(e)
        self.reporter.write_csv('cells.csv', [_window_row(c) for c in cells])
        self.reporter.write_json('report.json', report)

    def _threshold_window(self, s):
        if s.upper is not None:
            return SpectralWindow(s.lower, s.upper), None
        curve = self.threshold_curve(s.t_grid)
        if curve.covering:
            raise ConfigError('sweep.threshold_factor', 'E0(inf) is infinite for this model; give upper instead')
        return SpectralWindow(s.lower, s.threshold_factor * curve.threshold), curve

    def _complement_count(self, energy):
        try:
            return int(staircase_counts(complement_operator(self.model), [energy])[0])
        except EmptyDomain:
            return None

    def disorder_sweep(self, s):
        window, curve = self._threshold_window(s)
        cells = disorder_sweep(self.model, window, s.lambdas, s.n_samples, self.seed, self.threads, s.corners,
                               s.batch_size, s.rel_tol, self.progress)
        self._record_cells(cells, 'lambda')
        ok = [c for c in cells if c.status == 'ok']
        means = [c.estimate for c in ok]
        cis = [c.ci_halfwidth for c in ok]
        report = {
            'window': [window.lower, window.upper],
            'e0_infinity': None if curve is None else curve.e0_infinity_estimate,
            'nonincreasing': all(means[i + 1] <= means[i] + cis[i] + cis[i + 1] for i in range(len(means) - 1)),
            'final_over_initial': means[-1] / means[0] if means and means[0] > 0 else None,
        }
        if window.lower == -np.inf:
            reference = self._complement_count(window.upper)
            report['complement_count'] = reference
            report['below_complement'] = [] if reference is None else \
                [i for i, c in enumerate(ok) if np.min(c.counts) < reference]
            report['below_eta'] = [i for i, c in enumerate(ok) if np.min(c.counts) < c.eta_bound]
            report['below_corner_minimum'] = [i for i, c in enumerate(ok) if c.corner_minimum is not None
                                              and np.min(c.counts) < c.corner_minimum]
        self.reporter.write_csv('cells.csv', [_window_row(c) for c in cells])
        self.reporter.write_json('report.json', report)

    def thresholds(self, s):
        t_grid = DEFAULT_T_GRID if s.t_grid is None else np.asarray(s.t_grid)
        envelopes = ('profile', 'ball') if s.envelope == 'both' else (s.envelope,)
        curves = {e: e0_curve(self.model, t_grid, self.threads, e, self.progress) for e in envelopes}
        curve = curves.get('profile', curves[envelopes[0]])
        norms = field_norms(self.model.background)
        profile = self.model.profile
        E1 = s.E1_factor * curve.e0_infinity_estimate
        frame = {'t': t_grid}
        for e, c in curves.items():
            frame[f'e0_{e}'] = c.e0_values
        frame['e0_lower_bound'] = [e0_lower_bound(t, profile.floor, profile.inner_radius, norms.norm_V0,
                                                  norms.norm_b, norms.norm_c, self.constants) for t in t_grid]
        bound, t_best = e0_infinity_lower_bound(profile.floor, profile.inner_radius, norms, self.constants, t_grid)
        report = {
            'constants': self.constants,
            'norms': norms,
            'e0_curve': {e: {'t': c.t_values, 'e0': c.e0_values, 'e0_zero': c.e0_zero} for e, c in curves.items()},
            'e0_infinity': {'estimate': curve.e0_infinity_estimate, 'cross_check': curve.e0_infinity_cross_check,
                            'covering': curve.covering, 'discrepancy': curve.discrepancy,
                            'lower_bound': bound, 'lower_bound_t': t_best},
            'n1_threshold': n1_threshold(curve, profile.floor, profile.inner_radius, norms, self.constants),
            'E1': E1,
            'kappa0': kappa0(curve, E1),
            'gamma1': gamma1(profile.inner_radius, E1, norms, self.constants),
            'gamma2': gamma2(profile.inner_radius, E1, norms, s.lam, self.model.support_max, profile.outer_side,
                             self.model.grid.dim, self.constants),
            'csfuc': csfuc(profile.inner_radius, norms.norm_V0, norms.norm_b, norms.norm_c, self.constants),
        }
        print(f'E0(inf) ~ {curve.e0_infinity_estimate:.6g} (complement {curve.e0_infinity_cross_check:.6g}), '
              f'kappa0(E1={E1:.4g}) = {report["kappa0"]:.6g}')
        self.log({'e0_infinity': curve.e0_infinity_estimate, 'kappa0': report['kappa0']})
        self.record('e0_curve')
        if s.uncertainty:
            check = uncertainty_check(self.model, curve, E1, s.lam, s.n_samples, self.seed, self.threads,
                                      self.progress)
            report['uncertainty'] = {'violations': check.violations, 'worst_margin': check.worst_margin,
                                     'bottoms': check.bottoms, 'ranks': check.ranks}
            print(f'P U P >= kappa0 P: {check.violations} violations in {s.n_samples} samples')
            self.record('uncertainty', 'ok' if check.violations == 0 else 'failed',
                        f'{check.violations} violations' if check.violations else '')
        self.reporter.write_csv('e0_curve.csv', frame)
        self.reporter.write_json('report.json', report)

    def ids(self, s):
        curve = ids_estimate(self.model, s.energies, s.lam, s.n_samples, self.seed, self.threads, self.progress)
        frame = {'energy': curve.energies, 'value': curve.values, 'ci': curve.ci}
        if self.model.grid.size <= DENSE_LIMIT:
            frame['staircase_h0'] = deterministic_staircase(self.model.hamiltonian(), curve.energies,
                                                            self.model.grid.volume)
        self.record('ids')
        report = {'lam': s.lam, 'box_side': curve.box_side, 'n_samples': curve.n_samples}
        if s.dichotomy is not None:
            d = s.dichotomy
            threshold = self.threshold_curve(s.t_grid).threshold
            probes = [f * threshold for f in d.probe_factors]
            dichotomy = ids_dichotomy(self.model, probes, d.lambdas, d.n_samples, self.seed, threshold, d.band,
                                      self.threads, self.progress)
            report['dichotomy'] = dichotomy
            for probe in dichotomy.probes:
                note = f'{probe.verdict}: {probe.reason}' if probe.reason else probe.verdict
                self.record(f'probe E={probe.energy:g}', 'ok', note)
        self.reporter.write_csv('ids.csv', frame)
        self.reporter.write_json('report.json', report)

    def interlacing(self, s):
        check = interlacing_check(self.model, s.k_max, s.lam, s.n_samples, self.seed, self.threads, self.progress)
        rows = [{'sample': i, 'k': k + 1, 'mu_sample': check.complement_eigenvalues[k] - check.margins[i, k],
                 'mu_complement': check.complement_eigenvalues[k], 'margin': check.margins[i, k]}
                for i in range(s.n_samples) for k in range(s.k_max)]
        report = {'instances': check.instances, 'violations': check.violations, 'worst_margin': check.worst_margin,
                  'tolerance': check.tolerance}
        print(f'interlacing: {check.violations} violations in {check.instances} instances, '
              f'worst margin {check.worst_margin:.3e}')
        self.record('interlacing', 'ok' if check.violations == 0 else 'failed',
                    f'{check.violations} violations' if check.violations else '')
        if s.t_values is not None:
            limit = coupling_limit(self.model, s.t_values, s.k_max)
            report['coupling_limit'] = {'t': limit.t_values, 'eigenvalues': limit.eigenvalues, 'limit': limit.limit,
                                        'monotone': limit.monotone, 'relative_gap': limit.relative_gap()}
        self.log({'violations': check.violations, 'worst_margin': check.worst_margin})
        self.reporter.write_csv('interlacing.csv', rows)
        self.reporter.write_json('report.json', report)

    def phase_scan(self, s):
        curve = self.threshold_curve(s.t_grid)
        if s.energies is not None:
            energies = list(s.energies)
        elif curve.covering:
            raise ConfigError('sweep.energy_factors', 'E0(inf) is infinite for this model; give energies instead')
        else:
            energies = [f * curve.threshold for f in s.energy_factors]
        rows = []
        for energy in energies:
            window = SpectralWindow(-np.inf, energy)
            cells = disorder_sweep(self.model, window, s.lambdas, s.n_samples, self.seed, self.threads,
                                   progress=self.progress)
            self._record_cells(cells, f'E={energy:g}')
            rows.extend(dict(_window_row(c), energy=energy) for c in cells)
        self.reporter.write_csv('phase_scan.csv', rows)
        self.reporter.write_json('report.json', {
            'e0_infinity': curve.threshold,
            'complement_counts': {f'{e:.17g}': self._complement_count(e) for e in energies},
        })

    def ucp_mass(self, s):
        result = ucp_mass(self.model, s.E0, s.width, self.constants, s.G)
        print(f'min ball mass {result.min_mass:.6g} vs gamma^2 {result.gamma_squared:.6g} '
              f'(ratio {result.ratio:.3g}) over {len(result.eigenvalues)} eigenfunctions')
        self.record('ucp-mass', 'ok' if result.min_mass > 0 else 'failed',
                    '' if result.min_mass > 0 else 'an eigenfunction carries no mass on the balls')
        self.log({'min_mass': result.min_mass, 'ratio': result.ratio})
        self.reporter.write_csv('masses.csv', {'eigenvalue': result.eigenvalues, 'mass': result.masses,
                                               'sfuc_left': result.sfuc_left, 'sfuc_constant': result.sfuc_constant})
        self.reporter.write_json('report.json', {
            'window': [result.window.lower, result.window.upper],
            'gamma_squared': result.gamma_squared,
            'min_mass': result.min_mass,
            'ratio': result.ratio,
            'sfuc_ratio': result.sfuc_ratio,
            'constants': self.constants,
        })
