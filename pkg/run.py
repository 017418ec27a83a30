import argparse
import os
import sys

import wandb

from config import ConfigError, load_config
from disorder import DisorderError
from hamiltonian import AssemblyError, FieldError, GridError
from laboratory import Laboratory, build_model
from presets import PRESETS
from spectra import SolverError

EXIT_OK, EXIT_CONFIG, EXIT_PARTIAL, EXIT_SOLVER = 0, 2, 3, 4
# errors raised while building the model from a config
MODEL_ERRORS = (ConfigError, GridError, FieldError, AssemblyError, DisorderError)


def parse_args(argv=None):
    parser = argparse.ArgumentParser('Wegner estimates for alloy-type Schroedinger operators')
    sub = parser.add_subparsers(dest='command', required=True)

    run = sub.add_parser('run', help='run the experiment of a config and write its reports.')
    run.add_argument('--config', type=str, required=True, help='the yaml experiment config.')
    run.add_argument('--out', type=str, default=None, help='output directory (default: the config\'s output).')
    run.add_argument('--threads', type=int, default=1, help='worker threads; never changes the numbers.')
    run.add_argument('--seed-override', type=int, default=None, help='replace seeds.master_seed.')
    run.add_argument('--wandb', type=str, default='wegner', help='the project name for wandb.')
    run.add_argument('--wandb_mode', default='disabled', choices=['disabled', 'offline', 'online'])
    run.add_argument('--quiet', action='store_true', help='no progress bars.')

    validate = sub.add_parser('validate', help='parse a config and build its model without running.')
    validate.add_argument('--config', type=str, required=True)

    sub.add_parser('list-presets', help='print the named model presets.')
    return parser.parse_args(argv)


def list_presets():
    for preset in PRESETS:
        print(f'{preset.name:10s} {preset.shape} delta_-={preset.delta_minus:g} delta_+={preset.delta_plus:g} '
              f'{preset.placement}{" ergodic" if preset.ergodic else ""}: {preset.description}')
    return EXIT_OK


def validate(args):
    try:
        config = load_config(args.config)
        model = build_model(config.model, config.seeds.structure_seed)
    except MODEL_ERRORS as e:
        print(f'config invalid: {e}', file=sys.stderr)
        return EXIT_CONFIG
    print(f'{args.config}: {config.experiment} on {model.grid.size} grid points is valid')
    return EXIT_OK


def run(args):
    try:
        config = load_config(args.config)
        if args.seed_override is not None:
            config = config.with_seed(args.seed_override)
        out_dir = args.out or config.output
        os.makedirs(out_dir, exist_ok=True)
        wandb.init(project=args.wandb, dir=out_dir, config=config.as_dict(), mode=args.wandb_mode)
        lab = Laboratory(config, out_dir=out_dir, threads=args.threads, progress=not args.quiet)
        manifest = lab.run()
    except MODEL_ERRORS as e:
        print(f'config invalid: {e}', file=sys.stderr)
        return EXIT_CONFIG
    except SolverError as e:
        print(f'solver failure: {e}', file=sys.stderr)
        return EXIT_SOLVER
    finally:
        if wandb.run is not None:
            wandb.finish()
    if manifest.failed:
        print(f'{len(manifest.failed)} of {len(manifest.cells)} cells failed', file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def main(argv=None):
    args = parse_args(argv)
    if args.command == 'list-presets':
        return list_presets()
    if args.command == 'validate':
        return validate(args)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
