import pytest

from burnside.actions import coord_spec, value_spec
from burnside.kernels import build_bundle


@pytest.fixture(scope="session")
def bundles():
    """Session-wide bundle cache keyed by (model, k, n)."""
    cache: dict = {}

    def get(model: str, k: int, n: int):
        key = (model, k, n)
        if key not in cache:
            spec = value_spec(k, n) if model == "value" else coord_spec(k, n)
            cache[key] = build_bundle(spec)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def golden_value(bundles):
    return bundles("value", 3, 2)


@pytest.fixture(scope="session")
def golden_coord(bundles):
    return bundles("coord", 2, 3)
