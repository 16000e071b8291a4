import json
import pathlib

import pytest
from hypothesis import HealthCheck, settings

from bellframe import kernels

GOLDEN = pathlib.Path(__file__).parent / "golden"

# the backend fixtures hold no per-example state
settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.function_scoped_fixture])
settings.load_profile("default")

BACKENDS = [pytest.param(kernels.python_impl, id="python")]
if kernels.compiled_impl is not None:
    BACKENDS.append(pytest.param(kernels.compiled_impl, id="cython"))


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def force_backend(monkeypatch, backend):
    """Route the dispatcher through one implementation for the whole test."""
    monkeypatch.setattr(kernels, "_impl", backend)
    return backend


@pytest.fixture
def divergent_search(monkeypatch):
    """Make the conjecture search see a verdict split on every comparison."""
    from bellframe import conjecture
    real = conjecture.check_nouvelle_locality

    class Flipped:
        def __init__(self, report):
            self.ok = not report.ok

    monkeypatch.setattr(conjecture, "check_nouvelle_locality", lambda *a: Flipped(real(*a)))


def golden(name):
    return (GOLDEN / name).read_text()


def golden_json(name):
    return json.loads(golden(name))


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
