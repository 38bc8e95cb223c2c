import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from gapfill.frame import GaborParams, build_tight_frame

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DEFAULT_PARAMS = GaborParams(2800, 700, 2800, 23800)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def small_frame():
    return build_tight_frame(GaborParams(64, 16, 64, 512))


@pytest.fixture(scope="session")
def default_frame():
    return build_tight_frame(DEFAULT_PARAMS)


ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def acceptance(request):
    """``record(criterion, ok, detail)``; the summary prints one line per criterion."""
    results = request.config.stash.setdefault(ACCEPTANCE, {})

    def record(criterion: int, ok: bool, detail: str):
        results.setdefault(criterion, []).append((bool(ok), detail))
        print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} {detail}")

    return record


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(ACCEPTANCE, None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(results):
        parts = results[criterion]
        ok = all(p[0] for p in parts)
        detail = "; ".join(d for _, d in parts)
        terminalreporter.write_line(f"{criterion:2d} {'PASS' if ok else 'FAIL'}  {detail}")
