"""Products in residue classes: counts of u*v = a (mod s) with per-u intervals.

T(fam, a) counts solutions of u*v = a (mod s) where u runs over the family's
range, gcd(u, s) = 1, and v lies in the integer interval [Z_u, Z_u + Y_u].
The second moment of T over all classes a, the coprime-count sieve sums
feeding its main term, and a geometric-series exponential-sum diagnostic
live here as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import backends
from .errors import OracleScaleExceeded, OutOfRange
from .numtheory import euler_phi, inverse_table, tau_count

T_SECOND_MOMENT_MAX_S = 10**4


@dataclass(frozen=True, eq=False)
class IntervalFamily:
    """Per-u interval data [Z_u, Z_u + Y_u] for u in [u_min, X].

    Y_u = -1 encodes an empty interval; such entries contribute nothing to
    counts and are excluded from ymax. Entries with gcd(u, s) > 1 are kept
    but flagged inactive. u_min is 2 for the generic product count; the box
    stratification builder lowers it to 1 for strata with f > 1, where the
    smallest admissible x = f*u sits at u = 1.
    """

    s: int
    u_min: int
    X: int
    Z: tuple[int, ...]
    Y: tuple[int, ...]
    active: tuple[bool, ...] = field(init=False)

    def __post_init__(self):
        if self.s < 1:
            raise OutOfRange(f"modulus must be positive, got {self.s}")
        n = max(0, self.X - self.u_min + 1)
        if len(self.Z) != n or len(self.Y) != n:
            raise OutOfRange(f"family needs {n} entries for u in [{self.u_min}, {self.X}]")
        if any(y < -1 for y in self.Y):
            raise OutOfRange("Y_u below -1 (use -1 for an empty interval)")
        flags = tuple(math.gcd(u, self.s) == 1 for u in self.us())
        object.__setattr__(self, "active", flags)

    @classmethod
    def build(cls, s, Z, Y, u_min=2):
        return cls(s=s, u_min=u_min, X=u_min + len(Z) - 1, Z=tuple(Z), Y=tuple(Y))

    def us(self) -> range:
        return range(self.u_min, self.X + 1)

    def entries(self):
        """Yields (u, active, Z_u, Y_u) for every u in the family."""
        for i, u in enumerate(self.us()):
            yield u, self.active[i], self.Z[i], self.Y[i]

    @property
    def ymax(self) -> int:
        best = 0
        for _, act, _, y in self.entries():
            if act and y > best:
                best = y
        return best


def _interval_hits(z: int, y: int, t: int, s: int) -> int:
    # integers w in [z, z+y] with w = t (mod s); floor division, exact for any signs
    return (z + y - t) // s - (z - 1 - t) // s


def t_count(fam: IntervalFamily, a: int) -> int:
    """Number of solutions u*v = a (mod s) with v in the per-u interval."""
    if not 0 <= a < fam.s:
        raise OutOfRange(f"class a must lie in [0, {fam.s}), got {a}")
    inv = inverse_table(fam.s)
    total = 0
    for u, act, z, y in fam.entries():
        if not act or y < 0:
            continue
        t = a * inv[u % fam.s] % fam.s
        total += _interval_hits(z, y, t, fam.s)
    return total


def t_main_term(fam: IntervalFamily) -> Fraction:
    """(1/s) * sum of Y_u over active, nonempty entries."""
    return Fraction(sum(y for _, act, _, y in fam.entries() if act and y >= 0), fam.s)


def t_counts_all(fam: IntervalFamily) -> list[int]:
    """T(fam, a) for every a in [0, s), via the backend kernel when safe."""
    inv = inverse_table(fam.s)
    rows = [
        (inv[u % fam.s], z, y)
        for u, act, z, y in fam.entries()
        if act and y >= 0
    ]
    if not rows:
        return [0] * fam.s
    limit = backends.INT64_SAFE_MAX
    if all(abs(z) <= limit and y <= limit for _, z, y in rows):
        uinv, z, y = (np.array(col, dtype=np.int64) for col in zip(*rows))
        return [int(v) for v in backends.t_counts(fam.s, uinv, z, y)]
    return [t_count(fam, a) for a in range(fam.s)]


def t_second_moment(fam: IntervalFamily) -> Fraction:
    """Sum over all s classes of (T(a) - main term)^2, exact.

    Expanded as sum(T^2) - 2*m*sum(T) + s*m^2 so only the final combination
    touches rationals; the per-class counts stay integers.
    """
    if fam.s > T_SECOND_MOMENT_MAX_S:
        raise OracleScaleExceeded(
            f"t_second_moment sweeps all classes; s = {fam.s} exceeds {T_SECOND_MOMENT_MAX_S}"
        )
    counts = t_counts_all(fam)
    m = t_main_term(fam)
    sum_t = sum(counts)
    sum_t2 = sum(t * t for t in counts)
    return sum_t2 - 2 * m * sum_t + fam.s * m * m


def coprime_count(W: int, Z: int, s: int) -> tuple[int, Fraction, int]:
    """Exact count of k in (W, W+Z] coprime to s, with its sieve main term.

    Returns (exact, phi(s)*Z/s, tau(s)); the error |exact - main| never
    exceeds tau(s).
    """
    if Z < 1 or s < 1:
        raise OutOfRange("coprime_count needs Z >= 1 and s >= 1")
    exact = _coprime_scan(W, Z, s, weighted=False)
    return exact, Fraction(euler_phi(s) * Z, s), tau_count(s)


def coprime_weighted_sum(W: int, Z: int, s: int) -> tuple[int, Fraction]:
    """Exact sum of k over k in (W, W+Z] coprime to s, with its main term.

    The main term is phi(s)/(2s) times (W+Z)^2 - W^2 = Z*(2W+Z), the
    density-weighted integral of k over the window; the partial-summation
    error stays within 4*(W+Z+1)*tau(s).
    """
    if Z < 1 or s < 1 or W < 0:
        raise OutOfRange("coprime_weighted_sum needs W >= 0, Z >= 1, s >= 1")
    exact = _coprime_scan(W, Z, s, weighted=True)
    return exact, Fraction(euler_phi(s) * Z * (2 * W + Z), 2 * s)


def _coprime_scan(W, Z, s, weighted):
    total = 0
    step = 1 << 20
    for start in range(W + 1, W + Z + 1, step):
        ks = np.arange(start, min(start + step - 1, W + Z) + 1, dtype=np.int64)
        mask = np.gcd(ks, s) == 1
        total += int(ks[mask].sum()) if weighted else int(np.count_nonzero(mask))
    return total


def linear_exp_sum(Z: int, H: int, r: int, s: int) -> tuple[float, float]:
    """Magnitude of sum_{v=Z}^{Z+H-1} e(r*v/s) and the bound min(H, s/(2|r|)).

    The closed form |sin(pi*r*H/s) / sin(pi*r/s)| is evaluated with the
    integer products reduced mod 2s first, so the sine arguments stay small.
    When r = 0 (mod s) every term is 1; the magnitude is exactly H and the
    bound degenerates to H.
    """
    if H < 1 or s < 1:
        raise OutOfRange("linear_exp_sum needs H >= 1 and s >= 1")
    r_red = r % s
    if r_red == 0:
        return float(H), float(H)
    magnitude = abs(
        math.sin(math.pi * ((r * H) % (2 * s)) / s) / math.sin(math.pi * r_red / s)
    )
    if r_red > s - r_red:
        r_red = s - r_red  # distance to nearest multiple of s
    bound = min(float(H), s / (2.0 * r_red))
    return magnitude, bound
