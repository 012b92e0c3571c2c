import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hybridoms.presets import get_preset  # noqa: E402
from hybridoms.scattering import ScatteringContext  # noqa: E402

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def fig2_ctx():
    return ScatteringContext.build(get_preset("fig2").params)


@pytest.fixture(scope="session")
def fig3_ctx():
    return ScatteringContext.build(get_preset("fig3").params)


@pytest.fixture(scope="session")
def fig4ac_ctx():
    return ScatteringContext.build(get_preset("fig4ac").params)


@pytest.fixture(scope="session")
def fig4df_ctx():
    return ScatteringContext.build(get_preset("fig4df").params)


@pytest.fixture(scope="session")
def fig6_ctx():
    return ScatteringContext.build(get_preset("fig6").params)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
