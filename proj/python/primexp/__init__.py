"""Exponential sums over primes at desk scale."""

from ._core import *  # noqa: F401,F403
from ._core import PrimexpError, run_cli

__all__ = [name for name in dir() if not name.startswith("_")]


def main() -> int:
    import sys

    return run_cli(sys.argv[1:])
