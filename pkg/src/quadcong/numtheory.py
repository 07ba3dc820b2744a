"""Exact elementary number-theoretic primitives.

Everything here is integer-exact and dependency-free: trial division plus a
deterministic Pollard rho handle any input up to 63 bits, and the classical
multiplicative functions (phi, tau, mu) are derived from the factorization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import NotInvertible, OutOfRange

# (prime, exponent) pairs, ascending by prime; the empty tuple is n = 1.
Factorization = tuple[tuple[int, int], ...]

_MAX_INPUT = 2**63 - 1
_TRIAL_LIMIT = 10**6

# Deterministic Miller-Rabin bases, valid for all n < 3.3 * 10^24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """Brent-cycle rho with a fixed, deterministic parameter schedule.

    Returns a nontrivial factor of composite odd n. The constant c steps
    through 1, 2, 3, ... so the search is reproducible; the iteration cap
    per c is generous for 63-bit inputs.
    """
    if n % 2 == 0:
        return 2
    cap = 1 << 22
    for c in range(1, 64):
        y, r, q_acc, g = 2, 1, 1, 1
        x = ys = y
        steps = 0
        while g == 1 and steps < cap:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q_acc = q_acc * abs(x - y) % n
                g = math.gcd(q_acc, n)
                k += 128
            r *= 2
            steps += r
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    raise ArithmeticError(f"rho schedule exhausted on {n}")  # unreachable for 63-bit inputs


def factorize(n: int) -> Factorization:
    """Prime factorization of n as ((p, alpha), ...), primes ascending.

    factorize(1) is the empty tuple.
    """
    if not 1 <= n <= _MAX_INPUT:
        raise OutOfRange(f"factorize requires 1 <= n <= 2^63-1, got {n}")
    factors: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    # wheel over 6k +/- 1
    p = 7
    step = 4
    while p <= _TRIAL_LIMIT and p * p <= n:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        p += step
        step = 6 - step
    if n > 1:
        stack = [n]
        while stack:
            m = stack.pop()
            if m == 1:
                continue
            if _is_prime(m):
                factors[m] = factors.get(m, 0) + 1
                continue
            if m < _TRIAL_LIMIT * _TRIAL_LIMIT:
                # composite below the trial square must have been split already
                raise ArithmeticError(f"trial division missed a factor of {m}")
            d = _pollard_rho(m)
            stack.append(d)
            stack.append(m // d)
    return tuple(sorted(factors.items()))


def product(fact: Factorization) -> int:
    """Reconstruct the integer from its factorization."""
    n = 1
    for p, a in fact:
        n *= p**a
    return n


def euler_phi(n: int) -> int:
    """Euler totient: count of k in [1, n] with gcd(k, n) = 1."""
    result = n
    for p, _ in factorize(n):
        result -= result // p
    return result


def tau_count(n: int) -> int:
    """Number of positive divisors of n."""
    t = 1
    for _, a in factorize(n):
        t *= a + 1
    return t


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    divs = [1]
    for p, a in factorize(n):
        pk = 1
        block = list(divs)
        for _ in range(a):
            pk *= p
            divs.extend(d * pk for d in block)
    return sorted(divs)


def mobius(n: int) -> int:
    """Mobius function: 0 on non-squarefree n, else (-1)^(#prime factors)."""
    fact = factorize(n)
    if any(a >= 2 for _, a in fact):
        return 0
    return -1 if len(fact) % 2 else 1


def mod_inverse(a: int, s: int) -> int:
    """Inverse of a modulo s, in [0, s). For s = 1 the inverse is 0.

    Raises NotInvertible when gcd(a, s) != 1.
    """
    if s < 1:
        raise OutOfRange(f"modulus must be positive, got {s}")
    if s == 1:
        return 0
    try:
        return pow(a, -1, s)
    except ValueError:
        raise NotInvertible(a, s) from None


@dataclass(frozen=True)
class ModulusProfile:
    """A modulus together with the arithmetic data every formula needs.

    r is the product of p^alpha over prime powers p^alpha || q with p = 2
    or alpha > 1 (the even-or-powerful part of q).
    """

    q: int
    factorization: Factorization
    phi: int
    tau: int
    r: int
    odd: bool

    @classmethod
    def from_q(cls, q: int) -> "ModulusProfile":
        fact = factorize(q)
        phi = q
        tau = 1
        for p, a in fact:
            phi -= phi // p
            tau *= a + 1
        r = _r_product(fact)
        return cls(q=q, factorization=fact, phi=phi, tau=tau, r=r, odd=(q % 2 == 1))


def _r_product(fact: Factorization) -> int:
    r = 1
    for p, a in fact:
        if p == 2 or a > 1:
            r *= p**a
    return r


def modulus_profile(q: int) -> ModulusProfile:
    return ModulusProfile.from_q(q)


def hb_r(profile: ModulusProfile) -> int:
    """The even-or-powerful part of q, recomputed from the factorization."""
    return _r_product(profile.factorization)


@lru_cache(maxsize=64)
def inverse_table(s: int) -> tuple[int, ...]:
    """inv[u] for u in [0, s) with inv[u] = u^-1 mod s for units, 0 otherwise."""
    table = [0] * max(s, 1)
    for u in range(1, s):
        if math.gcd(u, s) == 1:
            table[u] = pow(u, -1, s)
    if s == 1:
        table = [0]
    return tuple(table)
