"""Shared pytest fixtures for conelab tests."""

import pytest

from src.classify import ClassifyOptions
from src.measure import Variety


@pytest.fixture(scope="session")
def gallery_options():
    """Seeded options used for corpus runs."""
    return ClassifyOptions(seed=42, threads=2)


@pytest.fixture
def tangent_union():
    """A line and a tangent parabola through the origin."""
    return Variety.from_text([("y", []), ("y - x^2", [])])
