import numpy as np
import pytest

from finealign import _backend, stitching, suffix_index

BACKENDS = [("python", _backend.pure)]
if _backend.compiled is not None:
    BACKENDS.append(("compiled", _backend.compiled))


@pytest.fixture(params=[k for _, k in BACKENDS], ids=[n for n, _ in BACKENDS])
def backend(request, monkeypatch):
    """Run the test once per available kernel implementation."""
    for mod in (suffix_index, stitching):
        monkeypatch.setattr(mod, "kernels", request.param)
    return request.param


def random_codes(rng: np.random.Generator, n: int, alphabet: int = 4, n_rate: float = 0.0) -> np.ndarray:
    s = rng.integers(0, alphabet, n, dtype=np.uint8)
    if n_rate:
        s[rng.random(n) < n_rate] = 4
    return s


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if not test_acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(test_acceptance.RESULTS):
        terminalreporter.write_line(test_acceptance.RESULTS[n])
