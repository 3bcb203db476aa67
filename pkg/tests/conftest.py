from __future__ import annotations

import json
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from charcat.catalog import small_groups

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
ORACLES = Path(__file__).resolve().parent / "oracles"

settings.register_profile("charcat", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("charcat")


@pytest.fixture(scope="session")
def catalog():
    return small_groups(16)


@pytest.fixture(scope="session")
def catalog12():
    return small_groups(12)


@pytest.fixture(scope="session")
def oracle():
    return json.loads((ORACLES / "small_groups.json").read_text())


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES
