import pytest

from shiftconv.chars import make_character
from shiftconv.context import default_form


@pytest.fixture(scope="session")
def form():
    return default_form()


@pytest.fixture(scope="session")
def chi():
    return make_character(11, 2)
