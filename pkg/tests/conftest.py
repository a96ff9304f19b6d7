"""Shared fixtures and float-comparison helpers."""

import math

import pytest

from ncsq import make_space


def ulp_between(a: float, b: float) -> float:
    """|a - b| measured in ulps of the larger magnitude."""
    if a == b:
        return 0.0
    return abs(a - b) / math.ulp(max(abs(a), abs(b)))


@pytest.fixture(scope="session")
def space12():
    return make_space(12)


@pytest.fixture(scope="session")
def space20():
    return make_space(20)


@pytest.fixture(scope="session")
def space30():
    return make_space(30)
