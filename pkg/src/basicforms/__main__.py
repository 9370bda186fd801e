"""Module entry point: ``python -m basicforms``."""

from .cli import run

if __name__ == "__main__":
    raise SystemExit(run())
