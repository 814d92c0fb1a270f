import json
from pathlib import Path

import pytest

from momentlab.ffcore import build_context
from momentlab.hecke import build_tau

FIXTURES_PATH = Path(__file__).resolve().parent.parent / "fixtures" / "derived.json"


@pytest.fixture(scope="session")
def ctx13():
    return build_context(13)


@pytest.fixture(scope="session")
def ctx101():
    return build_context(101)


@pytest.fixture(scope="session")
def hecke_small():
    return build_tau(10**4)


@pytest.fixture(scope="session")
def hecke_large():
    # covers the conductor-q^2 AFE cuts for q <= 809 and m,n <= 300 products
    return build_tau(10**5)


@pytest.fixture(scope="session")
def derived_fixtures():
    """Oracle-computed fixture values; recorded on first run, then frozen."""
    if not FIXTURES_PATH.exists():
        from momentlab.cli import compute_derived_fixtures

        FIXTURES_PATH.parent.mkdir(parents=True, exist_ok=True)
        FIXTURES_PATH.write_text(
            json.dumps(compute_derived_fixtures(), indent=1, sort_keys=True) + "\n")
    return json.loads(FIXTURES_PATH.read_text())
