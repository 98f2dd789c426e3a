import pytest

from goupillaud.levy_paths import JumpPath, SubordinatorSpec


@pytest.fixture
def jump_path():
    """Drift 1, single jump of size 2 at time 0.5."""
    return JumpPath(1.0, [0.5], [2.0], -2.0, 2.0)


@pytest.fixture
def two_jump_path():
    return JumpPath(1.0, [0.5, 0.75], [2.0, 1.0], -2.0, 2.0)


@pytest.fixture
def drift_path():
    return JumpPath(1.0, [], [], -4.0, 8.0)


@pytest.fixture
def poisson_spec():
    return SubordinatorSpec.compound_poisson(intensity=1.0, jump_size=1.0, drift=1.0)


@pytest.fixture
def gamma_spec():
    return SubordinatorSpec.gamma(shape=1.0, scale=1.0, drift=1.0)
