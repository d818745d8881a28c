import argparse
import asyncio
import sys
from pathlib import Path

from cqed_tempo.services.job_config import ConfigError, JobKind, parse_config
from cqed_tempo.services.job_runner import run_job
from cqed_tempo.settings import settings
from cqed_tempo.utils.logging_utils import setup_logger
from cqed_tempo.utils.sentry import init_sentry

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cqed-tempo",
        description="Non-Markovian cavity-emitter dynamics and spectra with TEMPO.",
    )
    parser.add_argument("--log-level", default=None, help="Overrides LOG_LEVEL")
    commands = parser.add_subparsers(dest="command", required=True)

    for kind in JobKind:
        command = commands.add_parser(kind.value, help=f"Run a {kind.value} job")
        command.add_argument("--config", type=Path, required=True)
        command.add_argument(
            "--out", type=Path, default=None, help="Overrides output.directory"
        )
        command.add_argument(
            "--workers",
            type=int,
            default=settings.DEFAULT_WORKERS,
            help="Concurrent sweep entries",
        )
        command.add_argument(
            "--seedless",
            action="store_true",
            help="Record that the run used no random numbers",
        )

    validate = commands.add_parser("validate", help="Check a config file only")
    validate.add_argument("--config", type=Path, required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logger(args.log_level)
    init_sentry()

    try:
        cfg = parse_config(args.config)
        if args.command == "validate":
            print(f"{args.config}: OK ({cfg.job.kind or 'no job kind'})")
            return EXIT_OK
        cfg = cfg.with_kind(JobKind(args.command))
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for error in exc.errors:
            print(f"  {error}", file=sys.stderr)
        return EXIT_CONFIG

    if args.workers < 1:
        print("error: --workers must be at least 1", file=sys.stderr)
        return EXIT_CONFIG

    status = asyncio.run(
        run_job(cfg, out_dir=args.out, workers=args.workers, seedless=args.seedless)
    )
    return EXIT_OK if status == 0 else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
