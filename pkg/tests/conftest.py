import numpy as np
import pytest

from armpilot.ik import IkConfig
from armpilot.kinematics import default_chain, planar_test_chain
from armpilot.session import SessionConfig
from armpilot.sim import RobotLimits


@pytest.fixture(scope="session")
def chain6():
    return default_chain()


@pytest.fixture(scope="session")
def chain2():
    return planar_test_chain()


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)


@pytest.fixture()
def session_config(chain6):
    return SessionConfig(chain=chain6)


@pytest.fixture()
def fast_limits():
    # no latency, keeps unit tests short
    return RobotLimits(command_latency=0.0)


@pytest.fixture(scope="session")
def ik_config():
    return IkConfig()
