import cmath
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadcong.errors import OracleScaleExceeded, OutOfRange
from quadcong.products import (
    IntervalFamily,
    coprime_count,
    coprime_weighted_sum,
    linear_exp_sum,
    t_count,
    t_main_term,
    t_second_moment,
)


def t_count_enumerated(fam, a):
    """Independent oracle: walk every w in every interval."""
    total = 0
    for u, active, z, y in fam.entries():
        if not active or y < 0:
            continue
        for w in range(z, z + y + 1):
            if (u * w - a) % fam.s == 0:
                total += 1
    return total


@st.composite
def small_families(draw):
    s = draw(st.integers(min_value=1, max_value=200))
    n = draw(st.integers(min_value=0, max_value=10))
    zs = draw(st.lists(st.integers(min_value=-2 * s, max_value=2 * s), min_size=n, max_size=n))
    ys = draw(st.lists(st.integers(min_value=-1, max_value=3 * s), min_size=n, max_size=n))
    return IntervalFamily.build(s, zs, ys)


class TestTCount:
    def test_examples(self):
        fam = IntervalFamily.build(5, [1, 1, 1], [2, 2, 2])  # u = 2, 3, 4
        assert t_count(fam, 1) == 2  # u=2 hits v=3, u=3 hits v=2
        fam = IntervalFamily.build(3, [0], [1])  # u = 2
        assert t_count(fam, 2) == 1  # v = 2 * inv(2) = 1 within {0, 1}

    def test_modulus_one_counts_whole_intervals(self):
        fam = IntervalFamily.build(1, [5, -7, 0], [3, 0, -1])
        assert t_count(fam, 0) == (3 + 1) + (0 + 1) + 0

    def test_class_out_of_range(self):
        fam = IntervalFamily.build(5, [1], [2])
        with pytest.raises(OutOfRange):
            t_count(fam, 5)
        with pytest.raises(OutOfRange):
            t_count(fam, -1)

    @given(small_families(), st.data())
    @settings(max_examples=250)
    def test_matches_enumeration_oracle(self, fam, data):
        a = data.draw(st.integers(min_value=0, max_value=fam.s - 1))
        assert t_count(fam, a) == t_count_enumerated(fam, a)

    def test_intervals_longer_than_modulus(self):
        fam = IntervalFamily.build(7, [-20], [65])  # one u = 2 row spanning many periods
        for a in range(7):
            assert t_count(fam, a) == t_count_enumerated(fam, a)


class TestMainTermAndMoment:
    def test_main_term_examples(self):
        assert t_main_term(IntervalFamily.build(5, [1, 1, 1], [2, 2, 2])) == Fraction(6, 5)
        assert t_main_term(IntervalFamily.build(3, [0], [1])) == Fraction(1, 3)
        assert t_main_term(IntervalFamily.build(7, [], [])) == 0

    def test_second_moment_hand_value(self):
        fam = IntervalFamily.build(3, [0], [1])
        # T over a = 1, 2, 0 is 0, 1, 1 against main term 1/3
        assert t_second_moment(fam) == 1

    def test_full_period_intervals(self):
        s, X = 5, 4
        fam = IntervalFamily.build(s, [1] * (X - 1), [s - 1] * (X - 1))
        active = sum(1 for _, act, _, _ in fam.entries() if act)
        # every row hits each class exactly once: T is uniform at `active`,
        # the main term is active*(s-1)/s, so the moment is active^2/s <= X
        assert t_second_moment(fam) == Fraction(active * active, s)
        assert t_second_moment(fam) <= fam.X

    def test_second_moment_matches_exhaustive_oracle(self):
        rng = random.Random(21)
        for _ in range(10):
            s = rng.randrange(2, 40)
            n = rng.randrange(0, 8)
            fam = IntervalFamily.build(
                s,
                [rng.randrange(-s, s) for _ in range(n)],
                [rng.randrange(-1, 2 * s) for _ in range(n)],
            )
            m = t_main_term(fam)
            direct = sum(
                ((Fraction(t_count_enumerated(fam, a)) - m) ** 2 for a in range(s)),
                Fraction(0),
            )
            assert t_second_moment(fam) == direct

    def test_scale_cap(self):
        fam = IntervalFamily.build(10**4 + 1, [1], [1])
        with pytest.raises(OracleScaleExceeded):
            t_second_moment(fam)


class TestCoprimeSums:
    def test_count_examples(self):
        exact, main, bound = coprime_count(0, 10, 6)
        assert (exact, main, bound) == (3, Fraction(10, 3), 4)
        exact, main, _ = coprime_count(0, 15, 15)
        assert exact == 8 and main == 8
        exact, main, _ = coprime_count(7, 12, 1)
        assert exact == 12 and main == 12

    def test_weighted_examples(self):
        exact, main = coprime_weighted_sum(0, 10, 6)
        assert exact == 1 + 5 + 7 == 13
        assert main == Fraction(100, 6)
        exact, main = coprime_weighted_sum(0, 10, 1)
        assert exact == 55 and main == 50
        exact, main = coprime_weighted_sum(5, 9, 3)
        scan = sum(k for k in range(6, 15) if math.gcd(k, 3) == 1)
        assert exact == scan
        assert abs(exact - main) <= 4 * 15 * 2

    def test_count_error_within_tau(self):
        rng = random.Random(23)
        for _ in range(400):
            W = rng.randrange(0, 5000)
            Z = rng.randrange(1, 5000)
            s = rng.randrange(1, 1200)
            exact, main, bound = coprime_count(W, Z, s)
            assert abs(Fraction(exact) - main) <= bound

    def test_count_matches_gcd_scan(self):
        rng = random.Random(24)
        for _ in range(50):
            W = rng.randrange(0, 300)
            Z = rng.randrange(1, 300)
            s = rng.randrange(1, 100)
            exact, _, _ = coprime_count(W, Z, s)
            assert exact == sum(1 for k in range(W + 1, W + Z + 1) if math.gcd(k, s) == 1)


class TestLinearExpSum:
    def test_examples(self):
        magnitude, bound = linear_exp_sum(0, 2, 2, 4)
        assert magnitude == pytest.approx(0.0, abs=1e-12)
        assert bound == 1.0
        magnitude, bound = linear_exp_sum(5, 9, 0, 7)  # r = 0 mod s: all terms are 1
        assert magnitude == 9.0
        assert bound == 9.0
        magnitude, bound = linear_exp_sum(5, 9, 14, 7)
        assert magnitude == 9.0

    def test_closed_form_matches_direct_sum(self):
        direct = abs(sum(cmath.exp(2j * cmath.pi * 1 * v / 12) for v in range(3, 8)))
        magnitude, _ = linear_exp_sum(3, 5, 1, 12)
        assert abs(magnitude - direct) <= 1e-9

    def test_bound_holds_on_random_triples(self):
        rng = random.Random(25)
        for _ in range(200):
            s = rng.randrange(2, 500)
            r = rng.choice((-1, 1)) * rng.randrange(1, s // 2 + 1)
            H = rng.randrange(1, 2 * s)
            Z = rng.randrange(-50, 50)
            magnitude, bound = linear_exp_sum(Z, H, r, s)
            direct = abs(sum(cmath.exp(2j * cmath.pi * r * v / s) for v in range(Z, Z + H)))
            assert abs(magnitude - direct) <= 1e-9
            assert magnitude <= bound + 1e-9
