"""Hot counting kernels: numba-jitted loops with a pure-numpy fallback.

The backend is chosen by the QUADCONG_BACKEND environment variable
("numba" or "numpy"). Unset, it defaults to numba when importable. Both
backends are integer-exact and bit-identical; `benchmarks/bench_kernels.py`
compares their throughput.

Class indexing convention: residue r = value mod q is stored at index
(r - 1) mod q, i.e. index c - 1 for the class c in [1, q] with c = q
representing the zero class.
"""

from __future__ import annotations

import os

import numpy as np

ENV_VAR = "QUADCONG_BACKEND"

# Keeps m*m inside int64: isqrt(2^63 - 1).
INT64_SAFE_MAX = 3_037_000_499

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap


def active_backend() -> str:
    choice = os.environ.get(ENV_VAR, "").strip().lower()
    if choice == "numpy":
        return "numpy"
    if choice == "numba":
        return "numba" if HAVE_NUMBA else "numpy"
    if choice:
        raise ValueError(f"{ENV_VAR} must be 'numba' or 'numpy', got {choice!r}")
    return "numba" if HAVE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# numba kernels
# ---------------------------------------------------------------------------


@njit(cache=True, nogil=True)
def _box_histogram_nb(m_lo, m_hi, n_count, q):  # pragma: no cover - jitted
    out = np.zeros(q, dtype=np.int64)
    for m in range(m_lo, m_hi + 1):
        mm = (m * m) % q
        for n in range(1, n_count + 1):
            r = (mm - (n * n) % q) % q
            out[(r - 1) % q] += 1
    return out


@njit(cache=True, nogil=True)
def _pair_count_nb(m_count, n_count, q, r_target):  # pragma: no cover - jitted
    total = 0
    for m in range(1, m_count + 1):
        mm = (m * m) % q
        for n in range(1, n_count + 1):
            if (mm - (n * n) % q) % q == r_target:
                total += 1
    return total


@njit(cache=True, nogil=True)
def _uv_histogram_nb(q):  # pragma: no cover - jitted
    out = np.zeros(q, dtype=np.int64)
    for u in range(1, q + 1):
        for v in range(1, q + 1):
            r = (u * v) % q
            out[(r - 1) % q] += 1
    return out


@njit(cache=True, nogil=True)
def _t_counts_nb(s, uinv, z, y):  # pragma: no cover - jitted
    out = np.zeros(s, dtype=np.int64)
    for i in range(uinv.size):
        ui = uinv[i]
        zi = z[i]
        yi = y[i]
        for a in range(s):
            t = (a * ui) % s
            out[a] += (zi + yi - t) // s - (zi - 1 - t) // s
    return out


# ---------------------------------------------------------------------------
# numpy fallbacks
# ---------------------------------------------------------------------------

_CHUNK = 1 << 21


def _box_histogram_np(m_lo, m_hi, n_count, q):
    nsq = np.arange(1, n_count + 1, dtype=np.int64) ** 2 % q
    out = np.zeros(q, dtype=np.int64)
    step = max(1, _CHUNK // max(n_count, 1))
    for start in range(m_lo, m_hi + 1, step):
        ms = np.arange(start, min(start + step - 1, m_hi) + 1, dtype=np.int64)
        msq = ms * ms % q
        r = (msq[:, None] - nsq[None, :]) % q
        out += np.bincount(((r - 1) % q).ravel(), minlength=q)
    return out


def _pair_count_np(m_count, n_count, q, r_target):
    nsq = np.arange(1, n_count + 1, dtype=np.int64) ** 2 % q
    total = 0
    step = max(1, _CHUNK // max(n_count, 1))
    for start in range(1, m_count + 1, step):
        ms = np.arange(start, min(start + step - 1, m_count) + 1, dtype=np.int64)
        msq = ms * ms % q
        total += int(np.count_nonzero((msq[:, None] - nsq[None, :]) % q == r_target))
    return total


def _uv_histogram_np(q):
    vs = np.arange(1, q + 1, dtype=np.int64)
    out = np.zeros(q, dtype=np.int64)
    step = max(1, _CHUNK // q)
    for start in range(1, q + 1, step):
        us = np.arange(start, min(start + step - 1, q) + 1, dtype=np.int64)
        r = us[:, None] * vs[None, :] % q
        out += np.bincount(((r - 1) % q).ravel(), minlength=q)
    return out


def _t_counts_np(s, uinv, z, y):
    out = np.zeros(s, dtype=np.int64)
    a = np.arange(s, dtype=np.int64)
    for i in range(uinv.size):
        t = a * uinv[i] % s
        out += (z[i] + y[i] - t) // s - (z[i] - 1 - t) // s
    return out


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

_IMPLS = {
    "numba": {
        "box_histogram": _box_histogram_nb,
        "pair_count": _pair_count_nb,
        "uv_histogram": _uv_histogram_nb,
        "t_counts": _t_counts_nb,
    },
    "numpy": {
        "box_histogram": _box_histogram_np,
        "pair_count": _pair_count_np,
        "uv_histogram": _uv_histogram_np,
        "t_counts": _t_counts_np,
    },
}


def box_histogram(m_lo: int, m_hi: int, n_count: int, q: int) -> np.ndarray:
    """Counts of (m^2 - n^2) mod q classes over m in [m_lo, m_hi], n in [1, n_count]."""
    return _IMPLS[active_backend()]["box_histogram"](m_lo, m_hi, n_count, q)


def pair_count(m_count: int, n_count: int, q: int, r_target: int) -> int:
    """Exhaustive count of box pairs with m^2 - n^2 = r_target (mod q)."""
    return int(_IMPLS[active_backend()]["pair_count"](m_count, n_count, q, r_target))


def uv_histogram(q: int) -> np.ndarray:
    """Counts of u*v mod q classes over the full grid u, v in [1, q]."""
    return _IMPLS[active_backend()]["uv_histogram"](q)


def t_counts(s: int, uinv: np.ndarray, z: np.ndarray, y: np.ndarray) -> np.ndarray:
    """T(a) for every a in [0, s): per row i, integers w in [z_i, z_i + y_i]
    with w = a * uinv_i (mod s), summed over rows."""
    return _IMPLS[active_backend()]["t_counts"](
        s,
        np.ascontiguousarray(uinv, dtype=np.int64),
        np.ascontiguousarray(z, dtype=np.int64),
        np.ascontiguousarray(y, dtype=np.int64),
    )
