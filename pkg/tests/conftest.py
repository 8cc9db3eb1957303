import numpy as np
import pytest

from vsheet.background import ConstantBackground, PressureLaw, make_constant_background


@pytest.fixture
def law():
    return PressureLaw()


@pytest.fixture
def supersonic():
    return ConstantBackground(1.0, 3.0, 1.0, 0.0)


@pytest.fixture
def subsonic():
    return ConstantBackground(1.0, 0.3, 1.0, 0.0)


@pytest.fixture
def bp_super(supersonic):
    return make_constant_background(supersonic)


@pytest.fixture
def bp_sub(subsonic):
    return make_constant_background(subsonic)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE

    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
