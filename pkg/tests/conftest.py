import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from manlp import Interpretation, LatticeKind, Unit, load_program

PROGRAMS = Path(__file__).resolve().parents[1] / "programs"


def load_fixture(name: str):
    return load_program((PROGRAMS / name).read_text())


@pytest.fixture(scope="session")
def unit_basic():
    return load_fixture("unit_basic.mnlp")


@pytest.fixture(scope="session")
def unit_two_stable():
    return load_fixture("unit_two_stable.mnlp")


@pytest.fixture(scope="session")
def interval_certified():
    return load_fixture("interval_certified.mnlp")


def unit_interp(**values) -> Interpretation:
    return Interpretation(LatticeKind.UNIT, {k: Unit(v) for k, v in values.items()})


@pytest.fixture
def model_m():
    return unit_interp(p=0.4, q=0.4, s=0.5, t=0.6)


@pytest.fixture
def model_m2():
    return unit_interp(p=0.5, q=0.4, s=0.5, t=0.5)
