"""Command-line driver."""

from distfree.cli.commands import cmd_compare, cmd_forward, cmd_invert, cmd_selftest
from distfree.cli.main import build_parser, main
from distfree.cli.selftest import CheckResult, SelfTestHooks, run_checks

__all__ = [
    "main",
    "build_parser",
    "cmd_forward",
    "cmd_invert",
    "cmd_compare",
    "cmd_selftest",
    "CheckResult",
    "SelfTestHooks",
    "run_checks",
]
