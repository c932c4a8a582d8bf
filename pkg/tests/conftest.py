import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import kahlercheck  # noqa: F401  (switches JAX to float64)

settings.register_profile(
    "default",
    max_examples=int(os.environ.get("HYPOTHESIS_EXAMPLES", "25")),
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def cpoint(*zs):
    """Interleaved real coordinates of a complex point."""
    z = np.asarray(zs, dtype=complex)
    return np.stack([z.real, z.imag], axis=-1).reshape(-1)


@pytest.fixture
def cp():
    return cpoint


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: acceptance criteria 1-11 (slow)")


def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance criterion."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in nodeid or rep.when != "call":
                continue
            number = int(nodeid.split("test_criterion_")[1][:2])
            summary = dict(getattr(rep, "user_properties", [])).get("summary", "")
            lines.append((number, f"criterion {number:2d}: {'PASS' if rep.passed else 'FAIL'}  {summary}"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)


@pytest.fixture(autouse=True, scope="module")
def _release_compiled_kernels():
    """Drop compiled kernels between test modules to bound memory."""
    yield
    import jax

    from kahlercheck import _batch

    _batch._compiled.cache_clear()
    jax.clear_caches()
