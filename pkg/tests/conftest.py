import pytest
from hypothesis import HealthCheck, settings

from normbrauer.config import set_caps

settings.register_profile("normbrauer", derandomize=True, deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("normbrauer")


@pytest.fixture(autouse=True)
def _default_caps():
    set_caps(None)
    yield
    set_caps(None)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(RESULTS):
        ok, dt, limit, detail = RESULTS[k]
        line = f"Criterion {k}: {'PASS' if ok else 'FAIL'} ({dt:.1f}s, limit {limit}s)"
        if detail:
            line += f" - {detail}"
        terminalreporter.write_line(line)
