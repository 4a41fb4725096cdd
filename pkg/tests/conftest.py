import pytest
from hypothesis import HealthCheck, settings

from integen.tower import EXP, LOG, QX, Tower

settings.register_profile(
    "integen",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
    derandomize=True,
)
settings.load_profile("integen")

# criterion number -> (description, passed)
ACCEPTANCE = {}


@pytest.fixture
def log_x():
    return Tower([(LOG, QX.gen)])


@pytest.fixture
def exp_x():
    return Tower([(EXP, QX.gen)])


@pytest.fixture
def base():
    return Tower()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        desc, ok = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {desc}")
