import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lotva import parse_complex, parse_diagram, parse_lot

FIXTURES = Path(__file__).parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fig1():
    return parse_lot((FIXTURES / "fig1.lot").read_text())


@pytest.fixture(scope="session")
def fig3():
    return parse_lot((FIXTURES / "fig3.lot").read_text())


@pytest.fixture(scope="session")
def prime():
    return parse_lot((FIXTURES / "prime.lot").read_text())


@pytest.fixture(scope="session")
def square_complex():
    return parse_complex((FIXTURES / "square.cplx").read_text())


@pytest.fixture(scope="session")
def torus(square_complex):
    return parse_diagram((FIXTURES / "torus.diag").read_text())


@pytest.fixture(scope="session")
def fixture_dir():
    return FIXTURES
