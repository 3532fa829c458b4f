import pytest

from polybell.special_numbers import reset_cache


@pytest.fixture(autouse=True)
def _fresh_cache():
    """Every test starts and ends with empty memo triangles, so cache pokes
    in fault-injection tests can never leak."""
    reset_cache()
    yield
    reset_cache()
