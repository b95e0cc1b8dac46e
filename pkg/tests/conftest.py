import pytest

from pathwave import InitialData, MediumProfile, QuadratureSpec, build_travel_time


@pytest.fixture(scope="session")
def example1_profile():
    """Linear impedance 1/2 -> 1 with speed 2 -> 1 on a unit-width region."""
    return MediumProfile(1.0, 0.5, 1.0, 2.0, 1.0)


@pytest.fixture(scope="session")
def example1_tt(example1_profile):
    return build_travel_time(example1_profile)


@pytest.fixture(scope="session")
def unit_speed_profile():
    """Impedance 1 -> 3 at constant unit speed (tau(x) = x, t_plus = 1)."""
    return MediumProfile(1.0, 1.0, 3.0, 1.0, 1.0)


@pytest.fixture(scope="session")
def unit_speed_tt(unit_speed_profile):
    return build_travel_time(unit_speed_profile)


@pytest.fixture(scope="session")
def step_data():
    return InitialData.step()


@pytest.fixture(scope="session")
def quad():
    return QuadratureSpec()
