"""Pytest fixtures for feasregion tests."""

from pathlib import Path

import numpy as np
import pytest

from feasregion.config import get_settings
from feasregion.contracts.files import ProblemFile
from feasregion.contracts.geometry import NormalizationScheme, Polyhedron
from feasregion.contracts.problem import ProblemInstance

CASES_DIR = Path(__file__).resolve().parent.parent / "data" / "cases"

CASE_I_POINTS = [[2.0, 2.0], [1.0, 1.0], [1.0, 2.0], [2.0, 1.0], [1.5, 1.5]]


@pytest.fixture(autouse=True)
def fresh_settings():
    """Drop cached settings so `monkeypatch.setenv` overrides take effect."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def cases_dir() -> Path:
    return CASES_DIR


@pytest.fixture
def case_i() -> ProblemInstance:
    """Five observations on the unit square around (1.5, 1.5); c = (-1, -1); four rows."""
    return ProblemFile.load(CASES_DIR / "case_i.json").to_instance()


@pytest.fixture
def case_ii() -> ProblemInstance:
    """Nineteen observations with x0 = (1, 1); c = (1, 1); six rows."""
    return ProblemFile.load(CASES_DIR / "case_ii.json").to_instance()


@pytest.fixture
def unit_square() -> Polyhedron:
    """``[0, 1]^2``."""
    return Polyhedron.from_matrix([[1, 0], [-1, 0], [0, 1], [0, -1]], [0, -1, 0, -1])


def random_instance(
    rng: np.random.Generator,
    n: int,
    K: int,
    m1: int,
    known_rows: int = 0,
    normalization: NormalizationScheme = NormalizationScheme.sum_proxy,
) -> ProblemInstance:
    """Random instance with a cost whose coordinates do not sum to zero."""
    while True:
        c = rng.normal(size=n)
        if abs(c.sum()) > 0.2:
            break
    points = rng.uniform(-3.0, 3.0, size=(K, n)).round(3)
    known = None
    if known_rows:
        G = rng.normal(size=(known_rows, n))
        h = (points @ G.T).min(axis=0) - rng.uniform(0.0, 1.0, size=known_rows)
        known = Polyhedron.from_matrix(G.tolist(), h.tolist())
    return ProblemInstance.build(
        c.tolist(), points.tolist(), m1, known=known, normalization=normalization
    )
