import pytest

from paraosc.qscalar import ExactRing, FloatRing


@pytest.fixture(params=["exact", "float"])
def backend(request):
    return request.param


def ring_for(p, backend):
    return ExactRing(p) if backend == "exact" else FloatRing(p)


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, title, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
