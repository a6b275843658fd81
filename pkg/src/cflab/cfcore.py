"""Exact continued-fraction arithmetic.

A point x in [0,1) has the expansion x = 1/(a_1 + 1/(a_2 + ...)) with integer
partial quotients a_n >= 1.  Convergents p_n/q_n obey

    p_n = a_n p_{n-1} + p_{n-2},   q_n = a_n q_{n-1} + q_{n-2},

seeded with p_{-1} = 1, p_0 = 0, q_{-1} = 0, q_0 = 1.  The cylinder of a
prefix (a_1 .. a_n) is the interval bounded by p_n/q_n and
(p_n + p_{n-1})/(q_n + q_{n-1}); its length is exactly 1/(q_n (q_n + q_{n-1})).

Partial-quotient sequences are represented by PQSeq objects.  Closed-form
kinds (floor of e^n, floor of n^(1/alpha), all ones) expose an analytic
log_a(n) accessor so estimators can run to large n without materializing
huge integers; exact values are materialized on demand below a configurable
bit-size cap.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
import numpy as np

from .errors import ContractViolation, MaterializationLimit

# Refuse to materialize integers bigger than this many bits unless overridden.
DEFAULT_BIT_CAP = 10**6

LOG2_E = math.log2(math.e)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ContractViolation(f"exponent parameter must be finite, got {x}")
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise ContractViolation(f"cannot interpret {x!r} as an exact rational")


def floor_rational_power(n: int, exponent: Fraction) -> int:
    """floor(n**exponent) for integer n >= 1 and positive rational exponent, exactly.

    Uses integer k-th roots: floor(n**(p/q)) = floor((n**p)**(1/q)).
    """
    if n < 1:
        raise ContractViolation(f"base must be >= 1, got {n}")
    p, q = exponent.numerator, exponent.denominator
    if p <= 0:
        raise ContractViolation(f"exponent must be positive, got {exponent}")
    root, _ = gmpy2.iroot(gmpy2.mpz(n) ** p, q)
    return int(root)


def ceil_rational_power(n: int, exponent: Fraction) -> int:
    """ceil(n**exponent) for integer n >= 1 and positive rational exponent, exactly."""
    if n < 1:
        raise ContractViolation(f"base must be >= 1, got {n}")
    p, q = exponent.numerator, exponent.denominator
    if p <= 0:
        raise ContractViolation(f"exponent must be positive, got {exponent}")
    root, exact = gmpy2.iroot(gmpy2.mpz(n) ** p, q)
    return int(root) + (0 if exact else 1)


def floor_exp(n: int, bit_cap: int = DEFAULT_BIT_CAP) -> int:
    """floor(e**n) for integer n >= 1, via a correctly-rounded big-float exp."""
    est_bits = int(n * LOG2_E) + 1
    if est_bits > bit_cap:
        raise MaterializationLimit(
            f"floor(e**{n}) needs about {est_bits} bits, above the cap of {bit_cap}"
        )
    with gmpy2.context(precision=est_bits + 64):
        return int(gmpy2.floor(gmpy2.exp(n)))


class PQSeq:
    """A partial-quotient sequence a_1, a_2, ... of integers >= 1."""

    kind = "abstract"
    # None means unbounded; finite sequences report their length.
    length: int | None = None
    # True means provably nondecreasing; None means callers must scan.
    monotone_hint: bool | None = None

    def __init__(self, bit_cap: int = DEFAULT_BIT_CAP):
        self.bit_cap = bit_cap

    def _check_index(self, n: int):
        if n < 1:
            raise ContractViolation(f"indices are 1-based, got {n}")
        if self.length is not None and n > self.length:
            raise ContractViolation(f"index {n} beyond finite length {self.length}")

    def a(self, n: int) -> int:
        raise NotImplementedError

    def log_a(self, n: int) -> float:
        """Natural log of a(n); analytic for closed forms, within 1/a(n) of log a(n)."""
        self._check_index(n)
        return math.log(self.a(n))

    def log_a_block(self, n_max: int) -> np.ndarray:
        """log_a(1..n_max) as a float array; closed forms override with vector math."""
        self._check_index(n_max)
        return np.array([self.log_a(n) for n in range(1, n_max + 1)], dtype=float)

    def first_decrease(self, n_max: int) -> int | None:
        """Smallest n in [2, n_max] with a(n) < a(n-1), or None if nondecreasing."""
        if self.monotone_hint:
            return None
        prev = self.a(1)
        for n in range(2, n_max + 1):
            cur = self.a(n)
            if cur < prev:
                return n
            prev = cur
        return None

    def describe(self) -> str:
        return self.kind


class ExplicitSeq(PQSeq):
    """A finite, explicitly listed sequence."""

    kind = "explicit"

    def __init__(self, entries, bit_cap: int = DEFAULT_BIT_CAP):
        super().__init__(bit_cap)
        self.entries = [int(v) for v in entries]
        for i, v in enumerate(self.entries, start=1):
            if v < 1:
                raise ContractViolation(f"partial quotient at index {i} is {v}, must be >= 1")
        self.length = len(self.entries)

    def a(self, n: int) -> int:
        self._check_index(n)
        return self.entries[n - 1]

    def log_a(self, n: int) -> float:
        self._check_index(n)
        return math.log(self.entries[n - 1])

    def log_a_block(self, n_max: int) -> np.ndarray:
        self._check_index(n_max)
        head = self.entries[:n_max]
        if max(head) < 2**62:
            return np.log(np.asarray(head, dtype=float))
        return np.array([math.log(v) for v in head], dtype=float)

    def describe(self) -> str:
        shown = ",".join(str(v) for v in self.entries[:8])
        more = "..." if self.length > 8 else ""
        return f"explicit[{shown}{more}]"


class ExpFloorSeq(PQSeq):
    """a_n = floor(e**n).  Analytic log_a(n) = n."""

    kind = "exp_floor"
    monotone_hint = True

    def a(self, n: int) -> int:
        self._check_index(n)
        return floor_exp(n, self.bit_cap)

    def log_a(self, n: int) -> float:
        self._check_index(n)
        return float(n)

    def log_a_block(self, n_max: int) -> np.ndarray:
        self._check_index(n_max)
        return np.arange(1, n_max + 1, dtype=float)


class PowerFloorSeq(PQSeq):
    """a_n = floor(n**(1/alpha)) for alpha > 0.  Analytic log_a(n) = log(n)/alpha."""

    kind = "power_floor"
    monotone_hint = True

    # Rational-arithmetic exactness is only practical for tame exponents; a float
    # alpha converts exactly but may have a huge denominator, in which case we
    # fall back to a guarded big-float floor.
    _EXACT_LIMIT = 2**16

    def __init__(self, alpha, bit_cap: int = DEFAULT_BIT_CAP):
        super().__init__(bit_cap)
        self.alpha = _as_fraction(alpha)
        if self.alpha <= 0:
            raise ContractViolation(f"alpha must be positive, got {alpha}")
        self._inv_alpha = 1 / self.alpha
        self._alpha_f = float(self.alpha)

    def a(self, n: int) -> int:
        self._check_index(n)
        est_bits = int(math.log2(n + 1) / self._alpha_f) + 2
        if est_bits > self.bit_cap:
            raise MaterializationLimit(
                f"floor({n}**(1/{self._alpha_f})) needs about {est_bits} bits, "
                f"above the cap of {self.bit_cap}"
            )
        inv = self._inv_alpha
        if max(inv.numerator, inv.denominator) <= self._EXACT_LIMIT:
            return floor_rational_power(n, inv)
        with gmpy2.context(precision=est_bits + 96):
            return int(gmpy2.floor(gmpy2.mpfr(n) ** gmpy2.mpfr(float(inv))))

    def log_a(self, n: int) -> float:
        self._check_index(n)
        return math.log(n) / self._alpha_f

    def log_a_block(self, n_max: int) -> np.ndarray:
        self._check_index(n_max)
        return np.log(np.arange(1, n_max + 1, dtype=float)) / self._alpha_f

    def describe(self) -> str:
        return f"power_floor(alpha={self.alpha})"


class ConstantOneSeq(PQSeq):
    """a_n = 1 for all n (the golden-ratio tail)."""

    kind = "constant_one"
    monotone_hint = True

    def a(self, n: int) -> int:
        self._check_index(n)
        return 1

    def log_a(self, n: int) -> float:
        self._check_index(n)
        return 0.0

    def log_a_block(self, n_max: int) -> np.ndarray:
        self._check_index(n_max)
        return np.zeros(n_max, dtype=float)


class ScaledSeq(PQSeq):
    """a_n = factor * base.a(n) for an integer factor >= 1.

    Covers the scale sequences s_n = M * floor(n**gamma) used by the nested
    cover constructions; not needed for plain partial-quotient work.
    """

    kind = "scaled"

    def __init__(self, base: PQSeq, factor: int, bit_cap: int = DEFAULT_BIT_CAP):
        super().__init__(bit_cap)
        if int(factor) != factor or factor < 1:
            raise ContractViolation(f"scale factor must be an integer >= 1, got {factor}")
        self.base = base
        self.factor = int(factor)
        self.length = base.length
        self.monotone_hint = base.monotone_hint
        self._log_factor = math.log(self.factor)

    def a(self, n: int) -> int:
        return self.factor * self.base.a(n)

    def log_a(self, n: int) -> float:
        return self._log_factor + self.base.log_a(n)

    def log_a_block(self, n_max: int) -> np.ndarray:
        return self._log_factor + self.base.log_a_block(n_max)

    def describe(self) -> str:
        return f"{self.factor}*{self.base.describe()}"


class SplicedSeq(PQSeq):
    """Prefix entries up to a cut index, then the tail source at matching indices."""

    kind = "spliced"

    def __init__(self, prefix_src: PQSeq, cut: int, tail_src: PQSeq,
                 bit_cap: int = DEFAULT_BIT_CAP):
        super().__init__(bit_cap)
        if cut < 0:
            raise ContractViolation(f"cut must be >= 0, got {cut}")
        if prefix_src.length is not None and cut > prefix_src.length:
            raise ContractViolation(
                f"cut {cut} beyond prefix source length {prefix_src.length}"
            )
        self.prefix_src = prefix_src
        self.cut = cut
        self.tail_src = tail_src
        self.length = tail_src.length

    def a(self, n: int) -> int:
        self._check_index(n)
        return self.prefix_src.a(n) if n <= self.cut else self.tail_src.a(n)

    def log_a(self, n: int) -> float:
        self._check_index(n)
        return self.prefix_src.log_a(n) if n <= self.cut else self.tail_src.log_a(n)

    def log_a_block(self, n_max: int) -> np.ndarray:
        self._check_index(n_max)
        if n_max <= self.cut:
            return self.prefix_src.log_a_block(n_max)
        out = self.tail_src.log_a_block(n_max)
        if self.cut > 0:
            out[: self.cut] = self.prefix_src.log_a_block(self.cut)
        return out

    def describe(self) -> str:
        return (f"splice({self.prefix_src.describe()}, cut={self.cut}, "
                f"{self.tail_src.describe()})")


class PerturbedSeq(PQSeq):
    """a_n = base.a(n) + bit_n with bits in {0, 1}; bits beyond the list are 0."""

    kind = "perturbed"

    def __init__(self, base: PQSeq, bits, bit_cap: int = DEFAULT_BIT_CAP):
        super().__init__(bit_cap)
        self.base = base
        self.bits = [int(b) for b in bits]
        for i, b in enumerate(self.bits, start=1):
            if b not in (0, 1):
                raise ContractViolation(f"perturbation bit at index {i} is {b}, must be 0 or 1")
        self.length = base.length

    def bit(self, n: int) -> int:
        return self.bits[n - 1] if n <= len(self.bits) else 0

    def a(self, n: int) -> int:
        self._check_index(n)
        return self.base.a(n) + self.bit(n)

    def log_a(self, n: int) -> float:
        self._check_index(n)
        b = self.bit(n)
        if b == 0:
            return self.base.log_a(n)
        try:
            return math.log(self.base.a(n) + 1)
        except MaterializationLimit:
            # A +1 shift moves log a_n by at most 1/a_n; past the cap that is
            # far below float resolution of the analytic value.
            base_log = self.base.log_a(n)
            return base_log + math.log1p(math.exp(-base_log)) if base_log < 700 else base_log

    def describe(self) -> str:
        return f"perturbed({self.base.describe()}, {len(self.bits)} bits)"


@dataclass
class Convergent:
    """(n, p_n, q_n) with gcd(p_n, q_n) = 1."""
    n: int
    p: int
    q: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)


@dataclass
class CylinderInterval:
    """Exact cylinder of a quotient prefix; lo < hi and length == hi - lo."""
    lo: Fraction
    hi: Fraction
    length: Fraction
    depth: int


def _quotients_arg(seq, n: int | None = None) -> list[int]:
    """Accept a PQSeq or a plain iterable of quotients; return a validated list."""
    if isinstance(seq, PQSeq):
        if n is None:
            if seq.length is None:
                raise ContractViolation("n is required for unbounded sequences")
            n = seq.length
        return [seq.a(k) for k in range(1, n + 1)]
    vals = [int(v) for v in seq]
    if n is not None:
        if n > len(vals):
            raise ContractViolation(f"requested {n} quotients but only {len(vals)} given")
        vals = vals[:n]
    for i, v in enumerate(vals, start=1):
        if v < 1:
            raise ContractViolation(f"partial quotient at index {i} is {v}, must be >= 1")
    return vals


def convergents(seq, n: int | None = None) -> list[Convergent]:
    """Convergents p_k/q_k for k = 1..n."""
    vals = _quotients_arg(seq, n)
    out = []
    p_prev, p_cur = 1, 0   # p_{-1}, p_0
    q_prev, q_cur = 0, 1   # q_{-1}, q_0
    for k, a in enumerate(vals, start=1):
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        out.append(Convergent(k, p_cur, q_cur))
    return out


def cylinder(prefix) -> CylinderInterval:
    """Exact cylinder interval of a nonempty quotient prefix."""
    vals = _quotients_arg(prefix)
    if not vals:
        raise ContractViolation("cylinder needs a nonempty prefix")
    p_prev, p_cur = 1, 0
    q_prev, q_cur = 0, 1
    for a in vals:
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
    end_a = Fraction(p_cur, q_cur)
    end_b = Fraction(p_cur + p_prev, q_cur + q_prev)
    lo, hi = (end_a, end_b) if end_a < end_b else (end_b, end_a)
    length = Fraction(1, q_cur * (q_cur + q_prev))
    assert hi - lo == length
    return CylinderInterval(lo=lo, hi=hi, length=length, depth=len(vals))


def expand(x, max_terms: int | None = None) -> ExplicitSeq:
    """Canonical continued-fraction expansion of a rational x in [0, 1).

    The greedy integer algorithm terminates for rationals and the final
    quotient is automatically >= 2 (x = 0 gives the empty expansion).
    """
    fx = _as_fraction(x)
    if not (0 <= fx < 1):
        raise ContractViolation(f"expand needs 0 <= x < 1, got {x}")
    if max_terms is not None and max_terms < 1:
        raise ContractViolation(f"max_terms must be positive, got {max_terms}")
    num, den = fx.numerator, fx.denominator
    digits: list[int] = []
    while num:
        a, rem = divmod(den, num)
        digits.append(a)
        num, den = rem, num
        if max_terms is not None and len(digits) > max_terms:
            raise ContractViolation(
                f"expansion of {fx} needs more than max_terms={max_terms} quotients"
            )
    return ExplicitSeq(digits)


def evaluate(prefix) -> Fraction:
    """Value p_n/q_n of a finite expansion; the empty expansion is 0."""
    vals = _quotients_arg(prefix)
    if not vals:
        return Fraction(0)
    cs = convergents(vals)
    return Fraction(cs[-1].p, cs[-1].q)


def gauss_map(x: Fraction) -> Fraction:
    """T(x) = 1/x - floor(1/x) on (0, 1); shifts the expansion by one quotient."""
    fx = _as_fraction(x)
    if not (0 < fx < 1):
        raise ContractViolation(f"gauss_map needs 0 < x < 1, got {x}")
    inv = 1 / fx
    return inv - (inv.numerator // inv.denominator)


def _fib_pair(k: int) -> tuple[int, int]:
    """(F_k, F_{k+1}) by fast doubling, F_0 = 0, F_1 = 1."""
    if k == 0:
        return 0, 1
    f, g = _fib_pair(k >> 1)
    c = f * (2 * g - f)
    d = f * f + g * g
    if k & 1:
        return d, c + d
    return c, d


def fibonacci(k: int) -> int:
    return _fib_pair(k)[0]


def golden_lower_bound_holds(n: int, q: int) -> bool:
    """Exact check of q >= phi**n / (2 sqrt(5)) with phi = (1 + sqrt(5))/2.

    Cross-multiplied to integers: 20 q**2 >= phi**(2n) iff
    40 q**2 - L_{2n} >= sqrt(5) F_{2n}, squared when the left side is
    nonnegative (L is the Lucas sequence).
    """
    if n < 0 or q < 1:
        raise ContractViolation("need n >= 0 and q >= 1")
    f2n, f2n1 = _fib_pair(2 * n)
    lucas = 2 * f2n1 - f2n
    lhs = 40 * q * q - lucas
    if lhs < 0:
        return False
    return lhs * lhs >= 5 * f2n * f2n


def check_convergent_invariants(seq, n: int | None = None) -> list[Convergent]:
    """Convergents plus exact checks: determinant, coprimality, growth bound.

    Raises ContractViolation naming the failing index if any invariant breaks.
    """
    vals = _quotients_arg(seq, n)
    cs = convergents(vals)
    p_prev, q_prev = 0, 1  # p_0, q_0
    for c in cs:
        det = c.p * q_prev - p_prev * c.q
        if det != (-1) ** (c.n - 1):
            raise ContractViolation(f"determinant identity fails at n={c.n}")
        if math.gcd(c.p, c.q) != 1:
            raise ContractViolation(f"p_{c.n} and q_{c.n} share a factor")
        if not golden_lower_bound_holds(c.n, c.q):
            raise ContractViolation(f"denominator growth bound fails at n={c.n}")
        p_prev, q_prev = c.p, c.q
    return cs
