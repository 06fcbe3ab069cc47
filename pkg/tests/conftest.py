import os
import sys

# keep test runs from writing daily log files
os.environ.setdefault("LPCUT_LOG_TO_FILE", "false")
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

import pytest

from app.models.pydantic_models import EnergyFunction, PairwiseTerm

FIXTURES = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "fixtures"))


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)


@pytest.fixture
def two_vertex() -> EnergyFunction:
    return EnergyFunction.from_tables(2, [(0.0, 10.0), (10.0, 0.0)], [(0, 1, (0.0, 1.0, 1.0, 0.0))])


@pytest.fixture
def single_vertex() -> EnergyFunction:
    return EnergyFunction.from_tables(1, [(5.0, 2.0)])


@pytest.fixture
def empty_energy() -> EnergyFunction:
    return EnergyFunction.from_tables(0, [])


@pytest.fixture
def counterexample_term() -> PairwiseTerm:
    # submodular, but its square (9, 4, 4, 0) is not
    return PairwiseTerm.of(3.0, 2.0, 2.0, 0.0)
