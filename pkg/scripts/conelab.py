#!/usr/bin/env python3
"""CLI entry point for running conelab from a source checkout."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.cli.main import run


if __name__ == "__main__":
    sys.exit(run())
