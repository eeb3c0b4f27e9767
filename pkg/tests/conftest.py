import time

import pytest
from hypothesis import HealthCheck, settings

from dehnfill import family, gluing

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def t3():
    return family.t_three()


@pytest.fixture(scope="session")
def k6():
    return gluing.default_k6()


@pytest.fixture(scope="session")
def block(k6):
    return gluing.build_block(k6)


@pytest.fixture(scope="session")
def xprime(k6):
    return gluing.build_xprime(k6, k6)


@pytest.fixture(scope="session")
def X(xprime):
    return gluing.orientation_double_cover(xprime)


# -- acceptance criteria log -------------------------------------------------------

ACCEPTANCE: dict = {}


class _Criterion:
    def __init__(self, number: int, title: str, limit: float):
        self.number, self.title, self.limit = number, title, limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        seconds = time.perf_counter() - self.start
        ok = exc_type is None and seconds < self.limit
        note = "" if exc_type is None else f" ({exc_type.__name__})"
        if exc_type is None and not ok:
            note = f" (over the {self.limit:g} s limit)"
        ACCEPTANCE[self.number] = f"criterion {self.number:>2} {'PASS' if ok else 'FAIL'} {seconds:7.2f}s  {self.title}{note}"
        if exc_type is None and not ok:
            raise AssertionError(f"criterion {self.number} took {seconds:.1f} s, limit {self.limit:g} s")
        return False


@pytest.fixture
def criterion():
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
