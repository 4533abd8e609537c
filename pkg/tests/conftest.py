import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "hawkcast",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("hawkcast")


@pytest.fixture
def two_tone():
    """5 Hz plus 0.5 Hz over 4 s, 512 samples."""
    t = np.linspace(0.0, 4.0, 512, endpoint=False)
    return t, np.sin(2 * np.pi * 5 * t) + np.sin(2 * np.pi * 0.5 * t)


_VERDICTS: list[str] = []


def report(name: str, ok: bool, detail: str = "") -> None:
    """Record one PASS/FAIL line for an acceptance criterion."""
    line = f"{'PASS' if ok else 'FAIL'}: {name}" + (f" ({detail})" if detail else "")
    _VERDICTS.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
