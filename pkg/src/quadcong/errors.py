"""Exception types shared across the package."""


class QuadcongError(Exception):
    """Base class for all quadcong errors."""


class EvenModulus(QuadcongError):
    """Raised when an even modulus reaches a code path that requires odd q."""


class OutOfRange(QuadcongError):
    """An argument violates its documented range."""


class OracleScaleExceeded(QuadcongError):
    """A brute-force oracle was asked to run beyond its supported scale."""


class NotADivisor(QuadcongError):
    """A stratum parameter does not divide the quantity it must divide."""


class NotInvertible(QuadcongError):
    """Modular inverse requested for a non-unit."""

    def __init__(self, a: int, s: int):
        super().__init__(f"{a} is not invertible modulo {s}")
        self.a = a
        self.s = s


class ReductionMismatch(QuadcongError):
    """Stratum count and product-family count disagree (never expected)."""

    def __init__(self, b: int, t: int, context: str = ""):
        msg = f"stratum count {b} != family count {t}"
        if context:
            msg += f" ({context})"
        super().__init__(msg)
        self.b = b
        self.t = t


class DegenerateFit(QuadcongError):
    """Too few usable points for a log-log exponent fit."""
