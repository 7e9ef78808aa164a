"""Shared fixtures: the p=17 hand instance and the desk and strict towers."""

from fractions import Fraction

import hypothesis
import pytest

from gapforge.forge import ForgePolicy, build_counterexample
from gapforge.modmath import PrimeFieldCtx
from gapforge.params import Profile, RateSpec, derive_params
from gapforge.rscode import CodeDesc

hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.register_profile("gapforge", max_examples=50, deadline=None)
hypothesis.settings.register_profile("thorough", max_examples=1000, deadline=None)
hypothesis.settings.load_profile("gapforge")


@pytest.fixture
def tiny_field():
    """F_17 with omega = 2 of order 8, m = 2, so xi = 4 and s = 4."""
    return PrimeFieldCtx(p=17, n=8, omega=2, m=2)


@pytest.fixture
def tiny_code(tiny_field):
    return CodeDesc(tiny_field, 0)


@pytest.fixture
def tiny_delta():
    return Fraction(1, 2)


@pytest.fixture(scope="session")
def strict_params():
    return derive_params(1, RateSpec(1, 2), 6, Profile.STRICT)


@pytest.fixture(scope="session")
def desk_params():
    return derive_params(1, RateSpec(1, 2), 4, Profile.DESK, m_override=4)


@pytest.fixture(scope="session")
def desk_counterexample(desk_params):
    return build_counterexample(desk_params, seed=7, policy=ForgePolicy(threads=1))
