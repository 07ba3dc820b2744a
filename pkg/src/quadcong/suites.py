"""Seeded verification suites behind the `verify` CLI subcommand.

Each suite checks one exact identity or one fitted-exponent envelope against
an independent route (exhaustive enumeration, direct summation, or a
log-log fit), and reports one pass/fail line per property. All randomness
is drawn from a single seeded generator, so reruns are byte-identical.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .counting import (
    BoxSpec,
    a0_brute,
    a0_exact,
    count_box_brute,
    count_distribution,
)
from .errors import ReductionMismatch
from .experiments import fit_exponent
from .numtheory import divisors
from .products import (
    IntervalFamily,
    coprime_count,
    coprime_weighted_sum,
    linear_exp_sum,
    t_second_moment,
)
from .transform import (
    b_count,
    count_via_xv,
    decode_point,
    encode_pair,
    lu_bounds,
    verify_reduction,
)


@dataclass(frozen=True)
class Check:
    label: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.label}: {self.detail}"


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> list[str]:
        return [c.line() for c in self.checks]


def _odd(rng: random.Random, lo: int, hi: int) -> int:
    return rng.randrange(lo | 1, hi + 1, 2)


def suite_lemma1(qmax: int = 99) -> SuiteReport:
    """Divisor-sum formula for the full-box count against the grid scan."""
    bad = []
    compared = 0
    for q in range(1, qmax + 1, 2):
        for c in range(1, q + 1):
            compared += 1
            if a0_exact(q, c) != a0_brute(q, c):
                bad.append((q, c))
    checks = (
        Check(
            "lemma1.a0_divisor_sum",
            not bad,
            f"{compared} (q, c) pairs compared, {len(bad)} mismatches"
            + (f", first {bad[0]}" if bad else ""),
        ),
    )
    return SuiteReport("lemma1", checks)


def suite_lemma2(cases: int = 10_000, seed: int = 42, smax: int = 2000) -> SuiteReport:
    """Coprime-count and coprime-weighted-sum error envelopes."""
    rng = random.Random(seed)
    worst_count = Fraction(0)
    worst_weighted = Fraction(0)
    count_bad = weighted_bad = 0
    for _ in range(cases):
        W = rng.randrange(0, 10_001)
        Z = rng.randrange(1, 10_001)
        s = rng.randrange(1, smax + 1)
        exact, main, tau = coprime_count(W, Z, s)
        err = abs(Fraction(exact) - main)
        if err > tau:
            count_bad += 1
        worst_count = max(worst_count, err / tau)
        wexact, wmain = coprime_weighted_sum(W, Z, s)
        envelope = 4 * (W + Z + 1) * tau
        werr = abs(Fraction(wexact) - wmain)
        if werr > envelope:
            weighted_bad += 1
        worst_weighted = max(worst_weighted, werr / envelope)
    checks = (
        Check(
            "lemma2.count_error_le_tau",
            count_bad == 0,
            f"{cases} cases, {count_bad} violations, max |err|/tau = {float(worst_count):.4f}",
        ),
        Check(
            "lemma2.weighted_error_le_4(W+Z+1)tau",
            weighted_bad == 0,
            f"{cases} cases, {weighted_bad} violations, "
            f"max |err|/envelope = {float(worst_weighted):.4f}",
        ),
    )
    return SuiteReport("lemma2", checks)


def suite_bijection(cases: int = 500, qmax: int = 999, seed: int = 42) -> SuiteReport:
    """Box <-> (x, v) change of variables, then fast counter vs enumeration."""
    rng = random.Random(seed)
    cover_bad = round_bad = 0
    boxes = 30
    for _ in range(boxes):
        q = _odd(rng, 3, qmax)
        box = BoxSpec(M=rng.randrange(1, q + 1), N=rng.randrange(1, q + 1), q=q)
        covered = sum(
            max(0, U - L + 1)
            for x in range(2, box.M + box.N + 1)
            for L, U in [lu_bounds(x, box.M, box.N)]
        )
        if covered != box.M * box.N:
            cover_bad += 1
        for _ in range(20):
            m = rng.randrange(1, box.M + 1)
            n = rng.randrange(1, box.N + 1)
            p = encode_pair(box, m, n)
            if decode_point(p) != (m, n) or not (p.L <= p.v <= p.U):
                round_bad += 1
    count_bad = 0
    for _ in range(cases):
        q = _odd(rng, 3, qmax)
        box = BoxSpec(M=rng.randrange(1, q + 1), N=rng.randrange(1, q + 1), q=q)
        c = rng.randrange(1, q + 1)
        if count_via_xv(box, c) != count_box_brute(box, c):
            count_bad += 1
    checks = (
        Check(
            "bijection.box_coverage",
            cover_bad == 0 and round_bad == 0,
            f"{boxes} boxes: column ranges tile the box exactly, "
            f"{cover_bad} coverage / {round_bad} roundtrip failures",
        ),
        Check(
            "bijection.fast_counter_equals_enumeration",
            count_bad == 0,
            f"{cases} random (q, M, N, c) tuples, {count_bad} mismatches",
        ),
    )
    return SuiteReport("bijection", checks)


def suite_strata(moduli: int = 50, qmax: int = 201, seed: int = 42) -> SuiteReport:
    """Stratum counts over f | gcd(c, q) must add up to the class count."""
    rng = random.Random(seed)
    pool = list(range(3, qmax + 1, 2))
    picks = rng.sample(pool, min(moduli, len(pool)))
    bad = 0
    classes = 0
    for q in picks:
        box = BoxSpec(M=rng.randrange(1, q + 1), N=rng.randrange(1, q + 1), q=q)
        hist = count_distribution(box)
        for c in range(1, q + 1):
            classes += 1
            d_divs = [f for f in divisors(q) if c % f == 0]
            if sum(b_count(box, c, f) for f in d_divs) != hist.count_for(c):
                bad += 1
    checks = (
        Check(
            "strata.partition_identity",
            bad == 0,
            f"{len(picks)} moduli, {classes} classes checked, {bad} mismatches",
        ),
    )
    return SuiteReport("strata", checks)


def _random_stratum(rng: random.Random, qmax: int):
    q = _odd(rng, 3, qmax)
    d = rng.choice(divisors(q))
    qd = q // d
    while True:
        t = rng.randrange(1, qd + 1)
        if math.gcd(t, qd) == 1:
            break
    c = d * t
    f = rng.choice(divisors(d))
    box = BoxSpec(M=rng.randrange(1, q + 1), N=rng.randrange(1, q + 1), q=q)
    return box, c, f


def suite_reduction(cases: int = 200, qmax: int = 999, seed: int = 42) -> SuiteReport:
    """Stratum count equals the interval-family product count, exactly."""
    rng = random.Random(seed)
    bad = 0
    first = ""
    for _ in range(cases):
        box, c, f = _random_stratum(rng, qmax)
        try:
            verify_reduction(box, c, f)
        except ReductionMismatch as exc:
            bad += 1
            if not first:
                first = str(exc)
    checks = (
        Check(
            "reduction.stratum_equals_product_count",
            bad == 0,
            f"{cases} random strata, {bad} mismatches" + (f", first: {first}" if first else ""),
        ),
    )
    return SuiteReport("reduction", checks)


def random_family(rng: random.Random, smin: int = 11, smax: int = 2000) -> IntervalFamily:
    """A random per-u interval family; alternates constant and per-u lengths."""
    s = rng.randrange(smin, smax + 1)
    X = rng.randrange(2, s + 1)
    n = X - 1
    if rng.random() < 0.5:
        y = rng.randrange(0, s + 1)
        ys = [y] * n
    else:
        ys = [rng.randrange(0, s + 1) for _ in range(n)]
    zs = [rng.randrange(0, s) for _ in range(n)]
    return IntervalFamily.build(s, zs, ys)


def suite_lemma4(families: int = 50, seed: int = 42, smax: int = 2000) -> SuiteReport:
    """Second moment of the product count, scaled by X(X+Y), fit against s."""
    rng = random.Random(seed)
    points = []
    for _ in range(families):
        fam = random_family(rng, smax=smax)
        v = t_second_moment(fam)
        points.append((fam.s, float(v) / (fam.X * (fam.X + fam.ymax))))
    slope, _ = fit_exponent(points)
    ok = slope <= 0.5
    checks = (
        Check(
            "lemma4.scaled_moment_exponent",
            ok,
            f"{families} families, fitted exponent {slope:.4f} (envelope 0.5)",
        ),
    )
    return SuiteReport("lemma4", checks)


def suite_expsum(cases: int = 1000, seed: int = 42, smax: int = 2000) -> SuiteReport:
    """Geometric closed form vs direct complex summation, and the
    min(H, s/(2|r|)) magnitude bound."""
    rng = random.Random(seed)
    form_bad = bound_bad = 0
    worst_gap = 0.0
    for _ in range(cases):
        s = rng.randrange(2, smax + 1)
        r = rng.choice((-1, 1)) * rng.randrange(1, s // 2 + 1)
        H = rng.randrange(1, min(2 * s, 4000) + 1)
        Z = rng.randrange(-1000, 1001)
        magnitude, bound = linear_exp_sum(Z, H, r, s)
        direct = abs(
            sum(cmath.exp(2j * cmath.pi * r * v / s) for v in range(Z, Z + H))
        )
        gap = abs(magnitude - direct)
        worst_gap = max(worst_gap, gap)
        if gap > 1e-9:
            form_bad += 1
        if magnitude > bound + 1e-9:
            bound_bad += 1
    checks = (
        Check(
            "expsum.closed_form_matches_direct_sum",
            form_bad == 0,
            f"{cases} triples, {form_bad} beyond 1e-9, worst gap {worst_gap:.2e}",
        ),
        Check(
            "expsum.magnitude_bound",
            bound_bad == 0,
            f"{cases} triples, {bound_bad} above min(H, s/(2|r|))",
        ),
    )
    return SuiteReport("expsum", checks)


SUITES = {
    "lemma1": suite_lemma1,
    "lemma2": suite_lemma2,
    "bijection": suite_bijection,
    "strata": suite_strata,
    "reduction": suite_reduction,
    "lemma4": suite_lemma4,
    "expsum": suite_expsum,
}
