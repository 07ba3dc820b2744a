"""Counting solutions of m^2 - n^2 = c (mod q) in boxes, exactly.

Library layout:

- numtheory: factorization, phi, tau, mu, modular inverses, modulus profiles
- counting: box counts, full-box counts, deviations, exact second moments
- transform: (x, v) change of variables, divisor strata, reduction to
  interval-family product counts
- products: product counts in residue classes with per-u intervals, sieve
  counts, exponential-sum diagnostic
- experiments: moment sweeps across moduli, exponent fits, bound reports
- cli: the `quadcong` command

Hot kernels are numba-jitted with a pure-numpy fallback; set
QUADCONG_BACKEND=numpy to force the fallback.
"""

from .counting import (
    BoxSpec,
    DeltaRecord,
    Histogram,
    a0_brute,
    a0_exact,
    count_box_brute,
    count_distribution,
    delta,
    second_moment,
    strata_moments,
    stratified_moment,
)
from .errors import (
    DegenerateFit,
    EvenModulus,
    NotADivisor,
    NotInvertible,
    OracleScaleExceeded,
    OutOfRange,
    QuadcongError,
    ReductionMismatch,
)
from .experiments import (
    MomentRecord,
    SweepConfig,
    SweepResult,
    bound_report,
    fit_exponent,
    run_sweep,
)
from .numtheory import (
    Factorization,
    ModulusProfile,
    divisors,
    euler_phi,
    factorize,
    hb_r,
    mobius,
    mod_inverse,
    modulus_profile,
    tau_count,
)
from .products import (
    IntervalFamily,
    coprime_count,
    coprime_weighted_sum,
    linear_exp_sum,
    t_count,
    t_main_term,
    t_second_moment,
)
from .transform import (
    StratumContext,
    VPoint,
    b_count,
    build_interval_family,
    count_via_xv,
    h_shift,
    lu_bounds,
    theta_parity,
    verify_reduction,
    w_main_term,
)

__version__ = "0.1.0"
