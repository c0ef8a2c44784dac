from __future__ import annotations

import math

import numpy as np
import pytest

from threesq.report import run_scan

# sieve-independent brute force: Horner in u^2 modulo a 31-bit prime, then exact check
_M = 2**31 - 1


def _coeffs(n: int) -> list[int]:
    half = (n - 1) // 2
    return [math.comb(n, 2 * i + 1) * (-2) ** i * 3 ** (half - i) for i in range(half + 1)]


def _exact(n: int, u: int, v: int) -> int:
    return sum(c * u ** (n - 1 - 2 * i) * v ** (2 * i) for i, c in enumerate(_coeffs(n)))


def brute_force_hits(n: int, v: int, targets: set[int], u_max: int = 10**4) -> list[tuple[int, int]]:
    """All (u, f_n(u, v)) with 0 <= u <= u_max and f_n(u, v) in targets (f_n is even in u)."""
    u = np.arange(u_max + 1, dtype=np.int64)
    uu = (u * u) % _M
    vv = v * v % _M
    acc = np.zeros_like(u)
    vp = 1
    for c in _coeffs(n):
        acc = (acc * uu + (c % _M) * vp) % _M
        vp = vp * vv % _M
    tmod = np.array(sorted({t % _M for t in targets}), dtype=np.int64)
    out = []
    for cand in np.flatnonzero(np.isin(acc, tmod)):
        val = _exact(n, int(cand), v)
        if val in targets:
            out.append((int(cand), val))
    return out


@pytest.fixture(scope="session")
def scan200():
    return run_scan(200)


@pytest.fixture(scope="session")
def scan500():
    return run_scan(500)


# --- one summary line per acceptance criterion -------------------------------

_CRITERIA: dict[int, list[tuple[str, str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _CRITERIA.setdefault(marker.args[0], []).append((item.name, rep.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        results = _CRITERIA[k]
        ok = all(o == "passed" for _, o in results)
        names = ", ".join(f"{n}={o}" for n, o in results)
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'} ({names})")
