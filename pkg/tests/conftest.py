import numpy as np
import pytest

from schwarzpick import _backend


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(params=sorted(_backend.available()))
def backend(request, monkeypatch):
    """Run a test once per importable kernel backend."""
    monkeypatch.setattr(_backend, "kernels", _backend.available()[request.param])
    return request.param


def random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_contraction(rng, s, r, norm):
    g = random_complex(rng, s, r)
    return g * (norm / np.linalg.norm(g, 2))


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
