"""Counting solutions of m^2 - n^2 = c (mod q) in boxes, and their moments.

A(M, N; q, c) is the number of pairs 1 <= m <= M, 1 <= n <= N solving the
congruence; A0(q, c) is the full-box count, which for odd q equals the
divisor sum over f | gcd(c, q) of f * phi(q/f). The deviation of A from its
expected value M*N*A0/q^2 is kept as an exact integer numerator over the
fixed denominator q^4, so second moments over residue classes never touch
floating point.

Classes are labelled c = 1..q with c = q standing for the zero class, and
gcd(q, q) = q keeps the divisor stratification total.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import backends
from .errors import EvenModulus, NotADivisor, OracleScaleExceeded, OutOfRange
from .numtheory import divisors, euler_phi

A0_BRUTE_MAX_Q = 10**4


@dataclass(frozen=True)
class BoxSpec:
    """A box [1, M] x [1, N] against an odd modulus q, with M, N <= q."""

    M: int
    N: int
    q: int

    def __post_init__(self):
        if self.q < 1:
            raise OutOfRange(f"modulus must be positive, got {self.q}")
        if self.q % 2 == 0:
            raise EvenModulus(f"modulus must be odd, got {self.q}")
        if not (1 <= self.M <= self.q and 1 <= self.N <= self.q):
            raise OutOfRange(
                f"box sides must lie in [1, q]: M={self.M}, N={self.N}, q={self.q}"
            )


@dataclass(frozen=True)
class DeltaRecord:
    """Per-class counts and the exact squared deviation.

    delta_sq_num / scale is the square of A - M*N*A0/q^2, with
    delta_sq_num = (q^2*A - M*N*A0)^2 and scale = q^4.
    """

    c: int
    a: int
    a0: int
    expected_num: int
    delta_sq_num: int
    scale: int

    @property
    def delta_sq(self) -> Fraction:
        return Fraction(self.delta_sq_num, self.scale)


@dataclass(frozen=True, eq=False)
class Histogram:
    """Counts of every class c = 1..q for one box; counts[c-1] is class c."""

    box: BoxSpec
    counts: np.ndarray

    def count_for(self, c: int) -> int:
        _check_class(self.box.q, c)
        return int(self.counts[c - 1])

    def total(self) -> int:
        return int(self.counts.sum())


def _check_class(q: int, c: int) -> None:
    if not 1 <= c <= q:
        raise OutOfRange(f"class c must lie in [1, q] = [1, {q}], got {c}")


def count_box_brute(box: BoxSpec, c: int) -> int:
    """Ground-truth count of box solutions by exhaustive enumeration of all
    M*N pairs. Never shortcut this: it is the oracle the fast paths are
    checked against."""
    _check_class(box.q, c)
    r = c % box.q
    if max(box.M, box.N) <= backends.INT64_SAFE_MAX:
        return backends.pair_count(box.M, box.N, box.q, r)
    return _pair_count_bigint(box.M, box.N, box.q, r)


def _pair_count_bigint(M, N, q, r):
    total = 0
    nsq = [(n * n) % q for n in range(1, N + 1)]
    for m in range(1, M + 1):
        mm = m * m % q
        total += sum(1 for nn in nsq if (mm - nn) % q == r)
    return total


def count_distribution(box: BoxSpec, shards: int = 1, workers: int = 1) -> Histogram:
    """Counts for every class in one enumeration pass over the box.

    The m-range may be split into shards whose histograms are merged by
    addition, so the result is bit-identical for any shard or worker count.
    """
    if shards < 1:
        raise OutOfRange(f"shards must be >= 1, got {shards}")
    if max(box.M, box.N) > backends.INT64_SAFE_MAX:
        counts = _distribution_bigint(box)
        return Histogram(box=box, counts=counts)
    bounds = _shard_bounds(box.M, min(shards, box.M))
    jobs = [(lo, hi, box.N, box.q) for lo, hi in bounds]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda j: backends.box_histogram(*j), jobs))
    else:
        parts = [backends.box_histogram(*j) for j in jobs]
    counts = np.zeros(box.q, dtype=np.int64)
    for part in parts:
        counts += part
    return Histogram(box=box, counts=counts)


def _shard_bounds(M, shards):
    size, extra = divmod(M, shards)
    bounds = []
    lo = 1
    for i in range(shards):
        hi = lo + size - 1 + (1 if i < extra else 0)
        bounds.append((lo, hi))
        lo = hi + 1
    return bounds


def _distribution_bigint(box):
    counts = np.zeros(box.q, dtype=object)
    nsq = [(n * n) % box.q for n in range(1, box.N + 1)]
    for m in range(1, box.M + 1):
        mm = m * m % box.q
        for nn in nsq:
            counts[((mm - nn) % box.q - 1) % box.q] += 1
    return counts


def _require_odd(q: int) -> None:
    if q < 1:
        raise OutOfRange(f"modulus must be positive, got {q}")
    if q % 2 == 0:
        raise EvenModulus(f"modulus must be odd, got {q}")


@lru_cache(maxsize=128)
def a0_by_divisor(q: int) -> dict[int, int]:
    """Full-box count A0(q, c) for each possible d = gcd(c, q), via the
    divisor sum over f | d of f * phi(q/f)."""
    _require_odd(q)
    divs = divisors(q)
    phi_cofactor = {f: euler_phi(q // f) for f in divs}
    return {d: sum(f * phi_cofactor[f] for f in divs if d % f == 0) for d in divs}


def a0_exact(q: int, c: int) -> int:
    """A0(q, c) by the divisor-sum formula; depends on c only through gcd(c, q)."""
    _require_odd(q)
    _check_class(q, c)
    return a0_by_divisor(q)[math.gcd(c, q)]


@lru_cache(maxsize=32)
def _uv_histogram_cached(q: int):
    return backends.uv_histogram(q)


def a0_brute(q: int, c: int) -> int:
    """A0(q, c) by exhaustive counting of u*v = c (mod q) over the q x q grid
    (the full-box count in product coordinates). Oracle-scale only."""
    _require_odd(q)
    _check_class(q, c)
    if q > A0_BRUTE_MAX_Q:
        raise OracleScaleExceeded(f"a0_brute grid scan capped at q <= {A0_BRUTE_MAX_Q}")
    return int(_uv_histogram_cached(q)[c - 1])


def delta(box: BoxSpec, c: int, a: int) -> DeltaRecord:
    """Exact deviation record for class c given its count a = A(M, N; q, c)."""
    _check_class(box.q, c)
    a0 = a0_exact(box.q, c)
    expected_num = box.M * box.N * a0
    diff = box.q * box.q * a - expected_num
    return DeltaRecord(
        c=c,
        a=a,
        a0=a0,
        expected_num=expected_num,
        delta_sq_num=diff * diff,
        scale=box.q**4,
    )


def _moment_terms(box: BoxSpec, hist: Histogram):
    """Yields (c, gcd(c, q), delta_sq_num) for every class, all exact ints."""
    q = box.q
    a0_map = a0_by_divisor(q)
    mn = box.M * box.N
    qq = q * q
    gcds = np.gcd(np.arange(1, q + 1, dtype=np.int64), q)
    for i in range(q):
        d = int(gcds[i])
        diff = qq * int(hist.counts[i]) - mn * a0_map[d]
        yield i + 1, d, diff * diff


def second_moment(box: BoxSpec, hist: Histogram | None = None) -> Fraction:
    """V = sum over c = 1..q of the squared deviation, as an exact rational."""
    if hist is None:
        hist = count_distribution(box)
    total = sum(num for _, _, num in _moment_terms(box, hist))
    return Fraction(total, box.q**4)


def strata_moments(box: BoxSpec, hist: Histogram | None = None) -> dict[int, Fraction]:
    """S_d for every divisor d of q: the moment restricted to classes with
    gcd(c, q) = d. The strata partition [1, q], so the values sum to V."""
    if hist is None:
        hist = count_distribution(box)
    sums = {d: 0 for d in divisors(box.q)}
    for _, d, num in _moment_terms(box, hist):
        sums[d] += num
    scale = box.q**4
    return {d: Fraction(s, scale) for d, s in sums.items()}


def stratified_moment(box: BoxSpec, d: int, hist: Histogram | None = None) -> Fraction:
    """S_d = sum of squared deviations over the classes with gcd(c, q) = d."""
    if d < 1 or box.q % d != 0:
        raise NotADivisor(f"{d} does not divide q = {box.q}")
    return strata_moments(box, hist)[d]
