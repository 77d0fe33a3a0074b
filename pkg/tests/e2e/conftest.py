"""Fixtures for e2e tests."""

import os
import subprocess
import sys
from pathlib import Path

import pytest


REPO_ROOT = Path(__file__).resolve().parents[2]
E2E_TIMEOUT = int(os.getenv("E2E_TIMEOUT", "600"))


def is_e2e_enabled() -> bool:
    """Check if e2e tests should run."""
    return os.getenv("RUN_E2E_TESTS", "").lower() in ("1", "true", "yes")


pytestmark = pytest.mark.skipif(
    not is_e2e_enabled(),
    reason="E2E tests require RUN_E2E_TESTS=1"
)


@pytest.fixture
def conelab():
    """Run the command-line entry script in a fresh interpreter."""

    def run(*args: str) -> subprocess.CompletedProcess:
        return subprocess.run(
            [sys.executable, str(REPO_ROOT / "scripts" / "conelab.py"), *args],
            capture_output=True,
            text=True,
            timeout=E2E_TIMEOUT,
            cwd=REPO_ROOT,
        )

    return run
