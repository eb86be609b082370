"""Shared fixtures for the test suite.

Precision contexts are session-scoped (immutable, so sharing is safe); every
randomized test builds its own seeded ``random.Random`` so failures replay.
"""

from __future__ import annotations

import pytest

from voigt_asym import PrecisionContext


@pytest.fixture(scope="session")
def ctx40() -> PrecisionContext:
    return PrecisionContext(digits=40)


@pytest.fixture(scope="session")
def ctx60() -> PrecisionContext:
    return PrecisionContext(digits=60)
