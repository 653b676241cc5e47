from __future__ import annotations

from datetime import date
from pathlib import Path

import pytest

from pricingspace import Pricing, load_pricing

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

#: Fixed reference date for temporal lint checks; after every fixture's
#: createdAt except the seeded future-date case.
NOW = date(2025, 6, 1)


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


def fixture_pricing(name: str) -> Pricing:
    return load_pricing(fixture_text(name))


@pytest.fixture(scope="session")
def zoom() -> Pricing:
    return fixture_pricing("zoom.yml")


@pytest.fixture(scope="session")
def zoom_text() -> str:
    return fixture_text("zoom.yml")


@pytest.fixture(scope="session")
def circular() -> Pricing:
    return fixture_pricing("circular.yml")


@pytest.fixture(scope="session")
def minimal() -> Pricing:
    return fixture_pricing("minimal.yml")
