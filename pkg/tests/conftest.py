import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dresg.config import DEFAULT_LINK, DEFAULT_PACKET, builtin_profile, preset_scenario  # noqa: E402
from dresg.link import LinkBudgetModel, PowerLevel, RateLevel, TransceiverProfile  # noqa: E402


@pytest.fixture(scope="session")
def profile():
    return builtin_profile()


@pytest.fixture(scope="session")
def link():
    return DEFAULT_LINK


@pytest.fixture(scope="session")
def packet():
    return DEFAULT_PACKET


@pytest.fixture(scope="session")
def scenario_a():
    return preset_scenario("A")


@pytest.fixture(scope="session")
def scenario_e():
    return preset_scenario("E")


@pytest.fixture
def flat_profile():
    """One power level and one rate: every link costs the same."""
    return TransceiverProfile(
        power_levels=(PowerLevel(1, 10.0, 30.0),),
        rate_levels=(RateLevel(10_000, -110.0),),
        rx_current_ma=20.0,
        vdd=3.0,
        name="flat",
    )


@pytest.fixture
def free_link():
    return LinkBudgetModel(intercept_db=0.0, slope_db=20.0, gain_tx_dbi=0.0, gain_rx_dbi=0.0)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is not None and acceptance.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance.LINES:
            terminalreporter.write_line(line)
