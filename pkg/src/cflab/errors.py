"""Shared exception types.

The CLI maps CflabError (and subclasses) to exit code 1; everything else is a bug.
"""


class CflabError(Exception):
    """Base class for all contract and domain failures raised by this package."""


class ContractViolation(CflabError):
    """An input broke a documented precondition (domain error, non-monotone prefix, ...)."""


class MaterializationLimit(CflabError):
    """An exact integer value was requested beyond the configured bit-size cap."""


class EnumerationTooLarge(CflabError):
    """A requested enumeration exceeds the configured cap."""


class UnsupportedRegime(CflabError):
    """The requested computation is outside the regime the formulas cover (e.g. B = infinity)."""


class PrecisionExhausted(CflabError):
    """Quotient extraction ran out of reliable precision before the requested depth."""

    def __init__(self, achieved: int, requested: int):
        self.achieved = achieved
        self.requested = requested
        super().__init__(
            f"only {achieved} of {requested} quotients are reliable at the working precision"
        )


class BracketError(CflabError):
    """A root search could not bracket a sign change; carries the endpoint values."""

    def __init__(self, msg: str, lo: float, hi: float, f_lo: float, f_hi: float):
        self.lo, self.hi, self.f_lo, self.f_hi = lo, hi, f_lo, f_hi
        super().__init__(f"{msg}: f({lo})={f_lo}, f({hi})={f_hi}")
