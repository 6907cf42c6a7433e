from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("vxcalc", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("vxcalc")

_ACCEPTANCE: list[str] = []


@pytest.fixture
def acceptance_log():
    """Collects the one-line verdicts of the acceptance criteria."""
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
