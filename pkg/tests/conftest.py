import functools

import pytest

from outcoupling import dynamics, fano, traps


@functools.lru_cache(maxsize=None)
def model(kind, coupling):
    """Trap, bound state and continuum evaluator, shared across tests."""
    trap = traps.TrapModel(kind, coupling)
    bs = fano.solve_bound_state(trap)
    return trap, bs, fano.ContinuumCoeffs(trap, bs)


@pytest.fixture(scope="session")
def fermi21():
    return dynamics.occupations_fermi(None, 21)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
