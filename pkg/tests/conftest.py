import functools

import pytest

from huapickrell import hua_pickrell as hp


@functools.lru_cache(maxsize=None)
def _s0_spectra(N, count, seed):
    return hp.sample_spectra(N, 0.0, hp.make_rng(seed), count)


@pytest.fixture(scope="session")
def s0_spectra():
    """Cached s = 0 spectra (ascending), shared across test modules."""
    return _s0_spectra


def pytest_configure(config):
    config._acceptance_lines = {}


@pytest.fixture
def report(request):
    """Record one pass/fail line for an acceptance criterion, then assert it."""
    lines = request.config._acceptance_lines

    def record(number, ok, detail, elapsed=None, limit=None):
        timing = ""
        if elapsed is not None:
            ok = ok and elapsed < limit
            timing = f" [{elapsed:.1f}s / limit {limit:.0f}s]"
        lines[number] = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}{timing}"
        assert ok, lines[number]

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config._acceptance_lines
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
