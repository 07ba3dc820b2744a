"""Change of variables and divisor stratification for the box count.

Substituting x = m + n, y = m - n turns m^2 - n^2 = c (mod q) into the
hyperbola congruence x*y = c (mod q); writing y = theta_x + 2v (theta_x the
parity of x) gives an integer v confined to [L_x, U_x]. Solutions split into
strata by f = gcd(x, q), and each stratum is an interval-family product
count: u * w = 2^-1 * c_f (mod q_f) with w = h + v shifted by the half-parity
h. Every reduction step here is exact, so the stratum identity
A = sum over f | gcd(c, q) of B(f) and the stratum-to-product-count equality
hold with zero tolerance.

The v-range upper bound is derived from 2 <= x - y, giving
U_x = min((x - theta)/2 - 1, M - (x + theta)/2); the exhaustive bijection
test in the suite is the arbiter for this form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .counting import BoxSpec
from .errors import EvenModulus, NotADivisor, OutOfRange, ReductionMismatch
from .numtheory import euler_phi, inverse_table, mod_inverse
from .products import IntervalFamily, t_count


@dataclass(frozen=True)
class VPoint:
    """One box pair in (x, v) coordinates, with its admissible v-range."""

    x: int
    theta: int
    v: int
    L: int
    U: int


@dataclass(frozen=True)
class StratumContext:
    """Stratum-f quantities for class c: scaled class, modulus, ranges, and
    the product-count class a = 2^-1 * c_f (mod q_f)."""

    f: int
    d: int
    c_f: int
    q_f: int
    X_f: int
    M_f: int
    N_f: int
    a: int


def theta_parity(x: int) -> int:
    """0 for even x, 1 for odd x."""
    return x & 1


def lu_bounds(x: int, M: int, N: int) -> tuple[int, int]:
    """Admissible v-range [L, U] for column x = m + n of an M x N box.

    All four corner constraints are even-integer halves, so the divisions
    are exact. U < L is legal and means the column is empty.
    """
    theta = x & 1
    half_minus = (x - theta) // 2
    half_plus = (x + theta) // 2
    L = max(1 - half_plus, half_minus - N)
    U = min(half_minus - 1, M - half_plus)
    return L, U


def encode_pair(box: BoxSpec, m: int, n: int) -> VPoint:
    """Map a box pair to its (x, v) point."""
    if not (1 <= m <= box.M and 1 <= n <= box.N):
        raise OutOfRange(f"pair ({m}, {n}) outside box {box.M} x {box.N}")
    x = m + n
    theta = x & 1
    v = (m - n - theta) // 2
    L, U = lu_bounds(x, box.M, box.N)
    return VPoint(x=x, theta=theta, v=v, L=L, U=U)


def decode_point(point: VPoint) -> tuple[int, int]:
    """Inverse of encode_pair: recover (m, n) from (x, v)."""
    y = point.theta + 2 * point.v
    return (point.x + y) // 2, (point.x - y) // 2


def _count_residue_class(v0: int, L: int, U: int, s: int) -> int:
    # integers v in [L, U] with v = v0 (mod s)
    return (U - v0) // s - (L - 1 - v0) // s


def count_via_xv(box: BoxSpec, c: int) -> int:
    """A(M, N; q, c) in O(M + N) modular steps, one column x at a time.

    Column x contributes when gcd(x, q) divides c; its solutions form a
    single residue class of v mod q/gcd(x, q), counted in closed form.
    """
    q = box.q
    if not 1 <= c <= q:
        raise OutOfRange(f"class c must lie in [1, q] = [1, {q}], got {c}")
    total = 0
    for x in range(2, box.M + box.N + 1):
        g = math.gcd(x, q)
        if c % g:
            continue
        L, U = lu_bounds(x, box.M, box.N)
        if U < L:
            continue
        s = q // g
        if s == 1:
            total += U - L + 1
            continue
        w0 = (c // g) * mod_inverse((x // g) % s, s) % s
        v0 = (w0 - (x & 1)) * ((s + 1) // 2) % s
        total += _count_residue_class(v0, L, U, s)
    return total


def normalized(box: BoxSpec) -> tuple[BoxSpec, bool]:
    """Swap the box sides so M >= N; returns (box, swapped)."""
    if box.M >= box.N:
        return box, False
    return BoxSpec(M=box.N, N=box.M, q=box.q), True


def _stratum_params(box: BoxSpec, c: int, f: int):
    q = box.q
    if not 1 <= c <= q:
        raise OutOfRange(f"class c must lie in [1, q] = [1, {q}], got {c}")
    d = math.gcd(c, q)
    if f < 1 or d % f != 0:
        raise NotADivisor(f"stratum f = {f} must divide gcd(c, q) = {d}")
    return d, c // f, q // f


def stratum_context(box: BoxSpec, c: int, f: int) -> StratumContext:
    """Stratum quantities for the normalized box (M >= N assumed by caller)."""
    d, c_f, q_f = _stratum_params(box, c, f)
    X_f = (box.M + box.N) // f
    a = c_f * mod_inverse(2, q_f) % q_f if q_f > 1 else 0
    return StratumContext(
        f=f,
        d=d,
        c_f=c_f,
        q_f=q_f,
        X_f=X_f,
        M_f=-(-box.M // f),
        N_f=-(-box.N // f),
        a=a,
    )


def _stratum_u_min(f: int) -> int:
    # smallest u with f*u >= 2: the f = 1 stratum starts at x = 2, every
    # larger (odd) f already has x = f >= 3 at u = 1
    return 2 if f == 1 else 1


def b_count(box: BoxSpec, c: int, f: int) -> int:
    """Number of (x, v) solutions with gcd(x, q) = f exactly.

    Writing x = f*u with gcd(u, q_f) = 1, the congruence becomes
    u * (theta_u + 2v) = c_f (mod q_f); v is counted in closed form per u.
    """
    _, c_f, q_f = _stratum_params(box, c, f)
    X_f = (box.M + box.N) // f
    inv = inverse_table(q_f)
    inv2 = (q_f + 1) // 2
    total = 0
    for u in range(_stratum_u_min(f), X_f + 1):
        if q_f > 1 and math.gcd(u, q_f) != 1:
            continue
        L, U = lu_bounds(f * u, box.M, box.N)
        if U < L:
            continue
        if q_f == 1:
            total += U - L + 1
            continue
        w0 = c_f * inv[u % q_f] % q_f
        v0 = (w0 - (u & 1)) * inv2 % q_f
        total += _count_residue_class(v0, L, U, q_f)
    return total


def h_shift(theta: int, q_f: int) -> int:
    """The h in [0, q_f) with 2h = theta (mod q_f); q_f must be odd."""
    if theta not in (0, 1):
        raise OutOfRange(f"theta must be 0 or 1, got {theta}")
    if q_f < 1:
        raise OutOfRange(f"modulus must be positive, got {q_f}")
    if q_f % 2 == 0:
        raise EvenModulus(f"parity shift needs odd modulus, got {q_f}")
    if theta == 0 or q_f == 1:
        return 0
    return (q_f + 1) // 2


def build_interval_family(box: BoxSpec, f: int) -> IntervalFamily:
    """Interval family whose product count reproduces stratum f of the box.

    The box is normalized to M >= N first. Entry u covers column x = f*u:
    Z_u = h + L_x and Y_u = U_x - L_x (clamped to -1 when the column is
    empty). Entries with gcd(u, q_f) > 1 are present but inactive. For
    f > 1 the family starts at u = 1 so the column x = f is not lost;
    the generic product count starts at u = 2.
    """
    nbox, _ = normalized(box)
    if f < 1 or nbox.q % f != 0:
        raise NotADivisor(f"{f} does not divide q = {nbox.q}")
    q_f = nbox.q // f
    X_f = (nbox.M + nbox.N) // f
    u_min = _stratum_u_min(f)
    zs, ys = [], []
    for u in range(u_min, X_f + 1):
        L, U = lu_bounds(f * u, nbox.M, nbox.N)
        h = h_shift(u & 1, q_f)
        zs.append(h + L)
        ys.append(U - L if U >= L else -1)
    return IntervalFamily(s=q_f, u_min=u_min, X=X_f, Z=tuple(zs), Y=tuple(ys))


def w_main_term(box: BoxSpec, f: int) -> tuple[Fraction, Fraction]:
    """Stratum main term: exact (1/q_f) * sum over u >= 2, gcd(u, q_f) = 1 of
    (U - L), and its closed-form approximation f*M*N*phi(q_f)/q^2."""
    nbox, _ = normalized(box)
    if f < 1 or nbox.q % f != 0:
        raise NotADivisor(f"{f} does not divide q = {nbox.q}")
    q_f = nbox.q // f
    X_f = (nbox.M + nbox.N) // f
    total = 0
    for u in range(2, X_f + 1):
        if q_f > 1 and math.gcd(u, q_f) != 1:
            continue
        L, U = lu_bounds(f * u, nbox.M, nbox.N)
        if U >= L:
            total += U - L
    exact = Fraction(total, q_f)
    closed = Fraction(f * nbox.M * nbox.N * euler_phi(q_f), nbox.q**2)
    return exact, closed


@dataclass(frozen=True)
class ReductionReport:
    """Stratum count b versus interval-family product count t."""

    b: int
    t: int
    equal: bool
    swapped: bool


def verify_reduction(box: BoxSpec, c: int, f: int) -> ReductionReport:
    """Check that stratum f of class c equals the product count of its
    interval family at class a = 2^-1 * c_f (mod q_f).

    The box is normalized to M >= N and both sides are computed on the
    normalized box. Raises ReductionMismatch if they differ (they never
    should; the identity is exact).
    """
    nbox, swapped = normalized(box)
    ctx = stratum_context(nbox, c, f)
    b = b_count(nbox, c, f)
    t = t_count(build_interval_family(nbox, f), ctx.a)
    if b != t:
        raise ReductionMismatch(b, t, context=f"q={nbox.q} M={nbox.M} N={nbox.N} c={c} f={f}")
    return ReductionReport(b=b, t=t, equal=True, swapped=swapped)
