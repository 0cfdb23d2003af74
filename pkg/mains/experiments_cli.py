import argparse
import os
import sys
from typing import List, Optional

from src.constants import Constants
from src.exceptions import ConfigError, SteklovWarpError, VerificationFailure
from src.experiments import load_experiment, run_verify, with_overrides
from src.experiments.runners import (
    run_kokarev,
    run_normalize_volume,
    run_oracle,
    run_quasi_iso,
    run_spectrum,
    run_sweep_frame,
)
from src.utilities.config_parser import PROJECT_ROOT, config_section
from src.utilities.logger import Logger
from src.utilities.utils import Utils

SUBCOMMANDS = {
    'spectrum': 'spectrum',
    'oracle': 'oracle',
    'sweep': 'sweep',
    'verify': 'verify',
    'kokarev': 'kokarev',
    'quasi-iso': 'quasi_iso',
    'normalize-volume': 'normalize_volume',
}
EXPERIMENT_DIR = os.path.join(PROJECT_ROOT, 'configs', 'experiments')

logger = Logger()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='steklov-warp',
        description='Steklov spectra of warped products and the large-sigma_1 construction',
    )
    commands = parser.add_subparsers(dest='command', required=True)
    for command in SUBCOMMANDS:
        sub = commands.add_parser(command)
        sub.add_argument('--config', help='experiment YAML (default: configs/experiments/<kind>.yaml)')
        sub.add_argument('--out', help='output file; CSV tables go to stdout when omitted')
        sub.add_argument('--mesh', type=int, help='elements of the collar mesh')
        sub.add_argument('--top', type=float, help='spectral truncation bound')
        sub.add_argument('--count', type=int, help='number of eigenvalues')
        sub.add_argument('--seed', type=int, help='seed of randomized checks')
    return parser


def _emit(frame, columns: List[str], out: Optional[str]) -> None:
    digits = int(config_section('output').get('float_digits', Constants.FLOAT_DIGITS))
    text = Utils.frame_to_csv(frame, columns, file_path=out, digits=digits)
    if not out:
        sys.stdout.write(text)


def _load(args: argparse.Namespace):
    kind = SUBCOMMANDS[args.command]
    config_file = args.config or os.path.join(EXPERIMENT_DIR, f'{kind}.yaml')
    cfg = load_experiment(config_file)
    if cfg.kind != kind:
        raise ConfigError('kind', f"config describes a {cfg.kind} run, not {kind}")
    return with_overrides(cfg, mesh=args.mesh, top=args.top, count=args.count, seed=args.seed, out=args.out)


def run(args: argparse.Namespace) -> int:
    cfg = _load(args)
    logger.info(f"Running {cfg.kind} from {cfg.source}")

    if cfg.kind == 'spectrum':
        _emit(run_spectrum(cfg), Constants.SPECTRUM_COLUMNS, cfg.output)
        return Constants.EXIT_OK
    if cfg.kind == 'sweep':
        _emit(run_sweep_frame(cfg), Constants.SWEEP_COLUMNS, cfg.output)
        return Constants.EXIT_OK
    if cfg.kind == 'normalize_volume':
        _emit(run_normalize_volume(cfg), Constants.NORMALIZE_COLUMNS, cfg.output)
        return Constants.EXIT_OK
    if cfg.kind == 'oracle':
        frame, report = run_oracle(cfg)
        _emit(frame, Constants.ORACLE_COLUMNS, cfg.output)
        if report is not None and not report.passed:
            raise VerificationFailure(report.message, report.to_dict())
        return Constants.EXIT_OK
    if cfg.kind == 'kokarev':
        frame, passed = run_kokarev(cfg)
        _emit(frame, Constants.KOKAREV_COLUMNS, cfg.output)
        if not passed:
            raise VerificationFailure('surface bound violated for some epsilon')
        return Constants.EXIT_OK
    if cfg.kind == 'quasi_iso':
        frame, passed = run_quasi_iso(cfg)
        _emit(frame, Constants.QUASI_ISO_COLUMNS, cfg.output)
        if not passed:
            raise VerificationFailure('eigenvalue ratio outside the quasi-isometry bound')
        return Constants.EXIT_OK

    report = run_verify(cfg)
    if cfg.output:
        Utils.save_json(report, cfg.output)
    else:
        sys.stdout.write(f"{'PASS' if report['passed'] else 'FAIL'}\n")
    if not report['passed']:
        failed = [check['name'] for check in report['checks'] if not check['passed']]
        raise VerificationFailure(f"failed checks: {', '.join(failed)}", report)
    return Constants.EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except ConfigError as e:
        logger.error(f"Config error: {str(e)}")
        return Constants.EXIT_CONFIG
    except VerificationFailure as e:
        logger.error(f"Verification failed: {str(e)}")
        return Constants.EXIT_FAILURE
    except SteklovWarpError as e:
        logger.error(f"{type(e).__name__}: {str(e)}")
        return Constants.EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
