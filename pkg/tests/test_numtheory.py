import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadcong.errors import NotInvertible, OutOfRange
from quadcong.numtheory import (
    ModulusProfile,
    divisors,
    euler_phi,
    factorize,
    hb_r,
    mobius,
    mod_inverse,
    product,
    tau_count,
)


def phi_scan(n):
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def divisor_scan(n):
    return [d for d in range(1, n + 1) if n % d == 0]


class TestFactorize:
    def test_one_is_empty_product(self):
        assert factorize(1) == ()

    def test_hand_checked_values(self):
        assert factorize(45) == ((3, 2), (5, 1))
        assert factorize(9973) == ((9973, 1),)  # prime by trial division to sqrt
        assert factorize(2**20) == ((2, 20),)

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            factorize(0)
        with pytest.raises(OutOfRange):
            factorize(2**63)

    def test_pollard_fallback_beyond_trial_range(self):
        n = 1_000_003 * 1_000_033  # both primes above the trial-division limit
        assert factorize(n) == ((1_000_003, 1), (1_000_033, 1))

    @given(st.integers(min_value=1, max_value=10**12))
    @settings(max_examples=200)
    def test_roundtrip_and_invariants(self, n):
        fact = factorize(n)
        assert product(fact) == n
        primes = [p for p, _ in fact]
        assert primes == sorted(primes)
        assert len(set(primes)) == len(primes)
        assert all(a >= 1 for _, a in fact)


class TestMultiplicativeFunctions:
    def test_phi_examples(self):
        assert euler_phi(1) == 1
        assert euler_phi(15) == 8
        assert euler_phi(9) == 6

    def test_tau_examples(self):
        assert tau_count(1) == 1
        assert tau_count(12) == 6
        assert tau_count(15) == 4

    def test_divisors_examples(self):
        assert divisors(1) == [1]
        assert divisors(15) == [1, 3, 5, 15]
        assert divisors(49) == [1, 7, 49]

    def test_mobius_examples(self):
        assert mobius(1) == 1
        assert mobius(30) == -1
        assert mobius(12) == 0

    def test_phi_matches_gcd_scan_exhaustively(self):
        # the literal definition, vectorized, for every n up to 10^4
        import numpy as np

        for n in range(1, 10**4 + 1):
            scan = int(np.count_nonzero(np.gcd(np.arange(1, n + 1), n) == 1))
            assert euler_phi(n) == scan

    @given(st.integers(min_value=1, max_value=10**4))
    @settings(max_examples=300)
    def test_divisors_and_tau_match_scan(self, n):
        divs = divisors(n)
        assert divs == divisor_scan(n)
        assert len(divs) == tau_count(n)

    def test_mobius_totient_identities_exhaustively(self):
        for n in range(1, 10**4 + 1):
            divs = divisors(n)
            phi = euler_phi(n)
            assert sum(mobius(d) * (n // d) for d in divs) == phi
            assert sum(Fraction(mobius(d), d) for d in divs) == Fraction(phi, n)


class TestModInverse:
    def test_examples(self):
        assert mod_inverse(2, 15) == 8
        assert mod_inverse(1, 7) == 1
        assert mod_inverse(5, 1) == 0

    def test_not_invertible(self):
        with pytest.raises(NotInvertible):
            mod_inverse(3, 15)

    @given(st.integers(min_value=-500, max_value=500), st.integers(min_value=2, max_value=500))
    @settings(max_examples=300)
    def test_inverse_property(self, a, s):
        if math.gcd(a, s) == 1:
            assert mod_inverse(a, s) * a % s == 1
        else:
            with pytest.raises(NotInvertible):
                mod_inverse(a, s)


class TestModulusProfile:
    def test_hb_r_examples(self):
        assert hb_r(ModulusProfile.from_q(15)) == 1
        assert hb_r(ModulusProfile.from_q(45)) == 9
        assert hb_r(ModulusProfile.from_q(12)) == 4

    def test_profile_fields(self):
        prof = ModulusProfile.from_q(45)
        assert prof.factorization == ((3, 2), (5, 1))
        assert prof.phi == 24
        assert prof.tau == 6
        assert prof.r == 9
        assert prof.odd

    @given(st.integers(min_value=1, max_value=10**5))
    @settings(max_examples=300)
    def test_r_divides_q_and_special_cases(self, q):
        prof = ModulusProfile.from_q(q)
        r = hb_r(prof)
        assert r == prof.r
        assert q % r == 0
        fact = prof.factorization
        if all(a >= 2 for _, a in fact):  # powerful q
            assert r == q
        if q % 2 == 1 and all(a == 1 for _, a in fact):  # odd squarefree
            assert r == 1
        assert prof.odd == (q % 2 == 1)
