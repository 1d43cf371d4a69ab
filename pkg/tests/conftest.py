import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ffenergy.field import build_field


@pytest.fixture(scope="session")
def ctx5():
    return build_field(5)


@pytest.fixture(scope="session")
def ctx7():
    return build_field(7)


@pytest.fixture(scope="session")
def ctx9():
    return build_field(3, 2)


@pytest.fixture(scope="session")
def ctx101():
    return build_field(101)


@pytest.fixture(scope="session")
def ctx1009():
    return build_field(1009)
