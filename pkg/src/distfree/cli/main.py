"""Command-line entry point for distfree."""

import argparse
import logging
import sys

from distfree.cli.commands import COMMANDS
from distfree.config import RunConfig, get_settings
from distfree.errors import (
    ConfigError,
    IllConditionedCovarianceError,
    InternalConsistencyError,
    InvalidArgumentError,
    QuadratureError,
)
from distfree.measurement import AssemblyMode

logger = logging.getLogger(__name__)

EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="distfree",
        description="Discretization-free Bayesian inversion for fan-beam tomography.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    helps = {
        "forward": "simulate noiseless and noisy data",
        "invert": "posterior mean and variance on the pixel grid",
        "compare": "truncation sweep against a trigonometric basis",
        "selftest": "run the built-in consistency checks",
    }
    for name, text in helps.items():
        sub = subparsers.add_parser(name, help=text, formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        sub.add_argument(
            "--config",
            required=name != "selftest",
            default=None,
            help="run configuration file",
        )
        sub.add_argument("--out", default=None, help="output directory (overrides run.output_dir)")
        sub.add_argument("--seed", type=int, default=None, help="noise seed (overrides run.seed)")
        sub.add_argument(
            "--mode",
            choices=[m.value for m in AssemblyMode],
            default=None,
            help="assembly mode (overrides run.mode)",
        )
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig.from_file(args.config) if args.config else RunConfig()
    return config.with_overrides(seed=args.seed, mode=args.mode, output_dir=args.out)


def main(argv: list[str] | None = None) -> int:
    """Parse arguments, run one subcommand and return its exit code.

    Exit codes: 0 success, 1 failed check, 2 configuration or missing input,
    3 numerical failure.
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=get_settings().log_level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        config = load_config(args)
        return COMMANDS[args.command](config)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except (QuadratureError, IllConditionedCovarianceError, InternalConsistencyError) as e:
        logger.error(f"Numerical failure in {args.command}: {e}")
        return EXIT_NUMERIC
    except InvalidArgumentError as e:
        logger.error(f"Invalid input to {args.command}: {e}")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
