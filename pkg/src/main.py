"""
Command-line front end for the Kakutani stability lab

    python -m src.main weights --horizon 64
    python -m src.main spectral-radius --p 40
    python -m src.main trajectory --basis 1 --lognorm-pow 257 --steps 20000
    python -m src.main nilpotency --m-max 8
    python -m src.main verify --suite all --seed 7

Exit codes: 0 all certificates pass, 1 a certificate failed, 2 usage or
configuration error.
"""

import argparse
import logging
import sys
from typing import List, Optional

from src import __version__
from src.config import LabConfig, load_run_config
from src.exceptions import LabError, UsageError, VectorFormatError
from src.models.log_scalar import LogScalar
from src.models.run_config import OUTPUT_FORMATS, RunConfig
from src.models.sparse_vec import SparseVec
from src.services import certificate_service, sparse_l2, trajectory_service
from src.services.certificate_service import CertificateService
from src.services.report_service import ReportService

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--M', type=float, help="construction parameter M (M > K > 1)")
    common.add_argument('--K', type=float, help="construction parameter K")
    common.add_argument('--seed', type=int, help="random seed")
    common.add_argument('--steps', type=int, help="trajectory length")
    common.add_argument('--horizon', type=int, help="weight table length")
    common.add_argument('--format', choices=OUTPUT_FORMATS, help="output format")
    common.add_argument('--out', help="output file (default stdout)")
    common.add_argument('--config', help="flat key=value run configuration file")
    common.add_argument('--log-level', help="logging level (default LOG_LEVEL or WARNING)")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog='kakutani-lab',
        description="Kakutani weighted-shift counterexample: simulate and certify stability",
    )
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest='command', required=True)

    sub.add_parser('weights', parents=[common], help="table of n, k(n), alpha_n")

    radius = sub.add_parser('spectral-radius', parents=[common], help="rho_estimate(1..p) and M/K")
    radius.add_argument('--p', type=int, default=40, help="largest p (n = 2^p - 1)")

    trajectory = sub.add_parser('trajectory', parents=[common], help="iterate x_(n+1) = T(x_n)")
    trajectory.add_argument('--init', help="initial vector file, one index:sign:log_mag per line")
    trajectory.add_argument('--basis', type=int, help="start from a multiple of e_i")
    trajectory.add_argument('--lognorm-pow', type=float,
                            help="with --basis: ||x_0|| = M^(-value)")
    trajectory.add_argument('--lognorm', type=float,
                            help="with --basis: natural log of ||x_0||")

    nilpotency = sub.add_parser('nilpotency', parents=[common], help="index of W_eps - L_m")
    nilpotency.add_argument('--m-max', type=int, default=8)
    nilpotency.add_argument('--basis-max', type=int, default=512)

    verify = sub.add_parser('verify', parents=[common], help="run a certificate suite")
    verify.add_argument('--suite', default='all',
                        choices=CertificateService.SUITES + ('all',))
    verify.add_argument('--c1', type=float, help="lower log-log exponent (default 1.2)")
    verify.add_argument('--c2', type=float, help="upper log-log exponent (default 1.8)")
    verify.add_argument('--trajectories', type=int, help="random trajectories (default 100)")
    verify.add_argument('--timings', action='store_true', help="include runtime_ms in reports")
    return parser


def configure_logging(level: Optional[str]) -> None:
    name = (level or LabConfig.get_config()['log_level']).upper()
    if not isinstance(logging.getLevelName(name), int):
        raise UsageError(f"unknown log level {level!r}")
    logging.basicConfig(
        stream=sys.stderr,
        level=name,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def emit(text: str, config: RunConfig) -> None:
    """Write report text to --out or stdout"""
    if config.out:
        with open(config.out, 'w', encoding='utf-8', newline='') as handle:
            handle.write(text)
        logger.info("wrote %s", config.out)
    else:
        sys.stdout.write(text)


def initial_vector(args: argparse.Namespace, config: RunConfig) -> SparseVec:
    if args.init and args.basis is not None:
        raise UsageError("use either --init or --basis, not both")
    if args.init and (args.lognorm_pow is not None or args.lognorm is not None):
        raise UsageError("--lognorm-pow and --lognorm only apply to --basis, not --init")
    if args.init:
        try:
            with open(args.init, encoding='utf-8') as handle:
                return sparse_l2.parse_vector(handle)
        except UnicodeDecodeError as exc:
            raise VectorFormatError(f"{args.init} is not valid UTF-8: {exc}") from exc
        except OSError as exc:
            raise UsageError(f"cannot read {args.init}: {exc}") from exc
    if args.basis is None:
        raise UsageError("trajectory needs --init FILE or --basis i")
    if args.basis < 1:
        raise UsageError(f"--basis must be >= 1 (got {args.basis})")
    if args.lognorm_pow is not None and args.lognorm is not None:
        raise UsageError("use either --lognorm-pow or --lognorm, not both")
    log_norm = 0.0
    if args.lognorm_pow is not None:
        log_norm = -args.lognorm_pow * config.params.log_M
    elif args.lognorm is not None:
        log_norm = args.lognorm
    return sparse_l2.basis(args.basis, LogScalar(1, log_norm))


def cmd_weights(args: argparse.Namespace, config: RunConfig) -> int:
    emit(ReportService(config.params, config.format).weights_report(config.horizon), config)
    return EXIT_PASS


def cmd_spectral_radius(args: argparse.Namespace, config: RunConfig) -> int:
    if args.p < 1:
        raise UsageError(f"--p must be >= 1 (got {args.p})")
    emit(ReportService(config.params, config.format).spectral_radius_report(args.p), config)
    return EXIT_PASS


def cmd_trajectory(args: argparse.Namespace, config: RunConfig) -> int:
    x0 = initial_vector(args, config)
    records = trajectory_service.run_trajectory(x0, config.steps, config.params)
    emit(ReportService(config.params, config.format).trajectory_report(records), config)
    cap = certificate_service.check_growth_cap(records, config.params)
    if not cap.passed:
        logger.error("growth cap violated: %s", cap.witness)
        return EXIT_VIOLATION
    return EXIT_PASS


def cmd_nilpotency(args: argparse.Namespace, config: RunConfig) -> int:
    report = certificate_service.check_nilpotency(args.m_max, args.basis_max, config.params)
    report.params = config.params.to_dict()
    emit(ReportService.certificate_report([report], suite='nilpotency'), config)
    return EXIT_PASS if report.passed else EXIT_VIOLATION


def cmd_verify(args: argparse.Namespace, config: RunConfig) -> int:
    service = CertificateService(config.params, config.seed, config.steps)
    if args.c1 is not None:
        service.c1 = args.c1
    if args.c2 is not None:
        service.c2 = args.c2
    if args.trajectories is not None:
        if args.trajectories < 1:
            raise UsageError(f"--trajectories must be >= 1 (got {args.trajectories})")
        service.trajectories = args.trajectories
    reports = service.run_suite(args.suite)
    emit(ReportService.certificate_report(reports, args.suite, include_runtime=args.timings), config)
    failed = [r.certificate for r in reports if r.status.value == 'fail']
    if failed:
        logger.error("failed certificates: %s", ", ".join(failed))
        return EXIT_VIOLATION
    return EXIT_PASS


COMMANDS = {
    'weights': cmd_weights,
    'spectral-radius': cmd_spectral_radius,
    'trajectory': cmd_trajectory,
    'nilpotency': cmd_nilpotency,
    'verify': cmd_verify,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    try:
        configure_logging(args.log_level)
        config = load_run_config(args.config, {
            'M': args.M,
            'K': args.K,
            'seed': args.seed,
            'steps': args.steps,
            'horizon': args.horizon,
            'format': args.format,
            'out': args.out,
        })
        logger.info("running %s with M=%s K=%s seed=%d", args.command, config.M, config.K, config.seed)
        return COMMANDS[args.command](args, config)
    except LabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
