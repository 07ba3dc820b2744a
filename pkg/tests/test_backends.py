"""Both kernel backends must agree bit-for-bit; the env flag selects one."""

import random

import numpy as np
import pytest

from quadcong import backends


@pytest.fixture(params=["numba", "numpy"])
def backend(request, monkeypatch):
    if request.param == "numba" and not backends.HAVE_NUMBA:
        pytest.skip("numba unavailable")
    monkeypatch.setenv(backends.ENV_VAR, request.param)
    return request.param


def test_env_flag_selects_backend(monkeypatch):
    monkeypatch.setenv(backends.ENV_VAR, "numpy")
    assert backends.active_backend() == "numpy"
    monkeypatch.setenv(backends.ENV_VAR, "bogus")
    with pytest.raises(ValueError):
        backends.active_backend()
    monkeypatch.delenv(backends.ENV_VAR)
    assert backends.active_backend() in ("numba", "numpy")


def _random_family(rng, s):
    n = rng.randrange(1, 30)
    uinv = np.array([rng.randrange(0, s) for _ in range(n)], dtype=np.int64)
    z = np.array([rng.randrange(-3 * s, 3 * s) for _ in range(n)], dtype=np.int64)
    y = np.array([rng.randrange(0, 3 * s) for _ in range(n)], dtype=np.int64)
    return uinv, z, y


def test_backends_agree(monkeypatch):
    if not backends.HAVE_NUMBA:
        pytest.skip("numba unavailable")
    rng = random.Random(7)
    for _ in range(15):
        q = rng.randrange(3, 200, 2)
        M = rng.randrange(1, q + 1)
        N = rng.randrange(1, q + 1)
        r = rng.randrange(0, q)
        s = rng.randrange(2, 120)
        fam = _random_family(rng, s)
        results = {}
        for name in ("numba", "numpy"):
            monkeypatch.setenv(backends.ENV_VAR, name)
            results[name] = (
                backends.box_histogram(1, M, N, q),
                backends.pair_count(M, N, q, r),
                backends.uv_histogram(q),
                backends.t_counts(s, *fam),
            )
        for a, b in zip(results["numba"], results["numpy"]):
            assert np.array_equal(a, b)


def test_box_histogram_matches_python_loop(backend):
    rng = random.Random(11)
    for _ in range(5):
        q = rng.randrange(3, 40, 2)
        M = rng.randrange(1, q + 1)
        N = rng.randrange(1, q + 1)
        expected = [0] * q
        for m in range(1, M + 1):
            for n in range(1, N + 1):
                expected[((m * m - n * n) % q - 1) % q] += 1
        got = backends.box_histogram(1, M, N, q)
        assert got.tolist() == expected


def test_t_counts_matches_python_loop(backend):
    rng = random.Random(13)
    for _ in range(5):
        s = rng.randrange(2, 60)
        uinv, z, y = _random_family(rng, s)
        got = backends.t_counts(s, uinv, z, y)
        for a in range(s):
            expected = 0
            for ui, zi, yi in zip(uinv.tolist(), z.tolist(), y.tolist()):
                t = a * ui % s
                expected += (zi + yi - t) // s - (zi - 1 - t) // s
            assert got[a] == expected
