"""Monte Carlo check of the digit-decay sandwich under the Gauss measure.

The invariant density is 1/((1+x) log 2); inverse-CDF sampling gives
x = 2**u - 1 for u uniform on (0,1).  The integral P(t) of the first-digit
observable a_1(x)**-t is sandwiched by partial sums of

    sum_k 1/(k**(t+1) (k+1))

scaled by 1/(2 log 2) from below and 1/log 2 from above, and time averages
along Gauss-map orbits must land between the bounds for almost every x.

Orbits are never iterated in floating point.  Each sample is an exact dyadic
rational (an odd numerator over a power of two), its digits come from integer
Euclidean division, and a running denominator recursion tells us exactly how
many digits the sample's precision supports: digits are trusted only while
the surrounding cylinder is wider than the rounding error of the sample.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
import numpy as np

from .errors import ContractViolation, PrecisionExhausted

RNG_ID = "numpy-pcg64"
DEFAULT_TRUNC = 10**6

# a**-t below ~2**-1000 cannot move a float average; skip and avoid huge pows
NEGLIGIBLE_BITS = 1000


def sample_gauss(count: int, seed: int) -> np.ndarray:
    """Float samples of the Gauss measure, for quick statistics."""
    if count < 1:
        raise ContractViolation(f"count must be >= 1, got {count}")
    u = np.random.default_rng(seed).random(count)
    return np.exp2(u) - 1.0


def dyadic_gauss_sample(seed: int, index: int, bits: int,
                        precision: int | None = None) -> Fraction:
    """Exact dyadic sample: round(2**u - 1) at the given working precision.

    u is a fixed odd-numerator dyadic with the given number of random bits,
    derived from (seed, index), so raising `precision` refines the same
    underlying point instead of drawing a new one.
    """
    if precision is None:
        precision = bits + 32
    words = (bits + 31) // 32
    state = np.random.SeedSequence([seed, index]).generate_state(words, np.uint32)
    k = 0
    for w in state:
        k = (k << 32) | int(w)
    k >>= words * 32 - bits
    u = Fraction(2 * k + 1, 1 << (bits + 1))  # strictly inside (0,1)
    with gmpy2.context(precision=precision):
        x = gmpy2.exp2(gmpy2.mpfr(u.numerator) / gmpy2.mpfr(u.denominator)) - 1
    num, den = x.as_integer_ratio()
    return Fraction(int(num), int(den))


def extract_quotients(x: Fraction, n: int,
                      precision_bits: int | None = None) -> list[int]:
    """First n partial quotients of x in (0,1), by integer Euclid.

    With precision_bits set, x is a rounded approximation accurate to
    2**-precision_bits and digits are only returned while the current
    cylinder is provably wider than that error; running out raises with the
    achieved depth.  Without it, x is taken as exact and only a terminating
    expansion can cut the digit stream short.
    """
    if n < 1:
        raise ContractViolation(f"need n >= 1, got {n}")
    if not isinstance(x, Fraction):
        x = Fraction(x)
    if not 0 < x < 1:
        raise ContractViolation(f"need 0 < x < 1, got {x}")
    num, den = x.numerator, x.denominator
    digits = []
    q, qp = 1, 0
    while len(digits) < n:
        if num == 0:
            raise PrecisionExhausted(len(digits), n)
        a, rem = divmod(den, num)
        digits.append(int(a))
        q, qp = a * q + qp, q
        # cylinder length 1/(q (q+qp)) must stay above ~2**-(precision-3)
        if precision_bits is not None and (
                q.bit_length() + (q + qp).bit_length() >= precision_bits - 3):
            if len(digits) < n:
                raise PrecisionExhausted(len(digits), n)
        num, den = rem, num
    return digits


def birkhoff_average(x, t: float, n: int,
                     precision_bits: int | None = None) -> float:
    """Time average (1/n) sum a_k(x)**-t over the first n digits."""
    if t <= 0:
        raise ContractViolation(f"need t > 0, got {t}")
    digits = extract_quotients(x, n, precision_bits)
    total = 0.0
    for a in digits:
        if a.bit_length() <= NEGLIGIBLE_BITS:
            total += float(a) ** (-t)
    return total / n


def p_bounds(t: float, trunc_k: int = DEFAULT_TRUNC,
             include_tail: bool = True) -> tuple[float, float]:
    """Sandwich for the first-digit integral P(t).

    Partial sums of 1/(k**(t+1)(k+1)) up to trunc_k scaled by 1/(2 log 2) and
    1/log 2; the upper value absorbs the series tail, below 1/(t trunc_k**t).
    Without the tail the two are in exact ratio 2.
    """
    if t <= 0:
        raise ContractViolation(f"need t > 0, got {t}")
    if trunc_k < 1:
        raise ContractViolation(f"need trunc_k >= 1, got {trunc_k}")
    k = np.arange(trunc_k, 0, -1, dtype=float)  # ascending terms for the sum
    with np.errstate(over="ignore"):
        # k**(t+1) past float range gives inf, and 1/inf = 0 is the right term
        s = float(np.sum(1.0 / (k ** (t + 1.0) * (k + 1.0))))
    lower = s / (2 * math.log(2))
    upper = s / math.log(2)
    if include_tail:
        upper += 1.0 / (t * trunc_k**t) / math.log(2)
    return lower, upper


@dataclass
class ErgodicRun:
    """One reproducible Monte Carlo run of the Birkhoff sandwich check."""
    seed: int
    sample_count: int
    orbit_length: int
    t: float
    averages: list[float]
    p_lower: float
    p_upper: float
    rng: str = RNG_ID
    trunc_k: int = DEFAULT_TRUNC
    sample_bits: int = 0
    retries: int = 0

    @property
    def grand_mean(self) -> float:
        return float(np.mean(self.averages))

    @property
    def std_error(self) -> float:
        a = np.asarray(self.averages)
        return float(a.std(ddof=1) / math.sqrt(len(a))) if len(a) > 1 else 0.0

    def to_dict(self) -> dict:
        return {
            "seed": self.seed, "sample_count": self.sample_count,
            "orbit_length": self.orbit_length, "t": self.t,
            "p_lower": self.p_lower, "p_upper": self.p_upper,
            "grand_mean": self.grand_mean, "std_error": self.std_error,
            "rng": self.rng, "trunc_k": self.trunc_k,
            "sample_bits": self.sample_bits, "retries": self.retries,
            "averages": list(self.averages),
        }


def _one_orbit(seed: int, index: int, bits: int, t: float,
               orbit_length: int) -> tuple[float, int]:
    precision = bits + 32
    retries = 0
    while True:
        x = dyadic_gauss_sample(seed, index, bits, precision)
        try:
            return birkhoff_average(x, t, orbit_length, precision), retries
        except PrecisionExhausted:
            retries += 1
            precision *= 2


def ergodic_run(t: float, sample_count: int, orbit_length: int, seed: int,
                trunc_k: int = DEFAULT_TRUNC, threads: int = 1) -> ErgodicRun:
    """Sample the Gauss measure and average the digit observable per orbit.

    Samples are exact dyadics on max(64, 4 n) random bits; a sample whose
    digits grow too fast for that precision is recomputed from the same
    random bits at doubled working precision, so runs are deterministic in
    (seed, rng identifier) regardless of thread count or retries.
    """
    if sample_count < 1:
        raise ContractViolation(f"need sample_count >= 1, got {sample_count}")
    if orbit_length < 1:
        raise ContractViolation(f"need orbit_length >= 1, got {orbit_length}")
    bits = max(64, 4 * orbit_length)
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(
                lambda i: _one_orbit(seed, i, bits, t, orbit_length),
                range(sample_count)))
    else:
        results = [_one_orbit(seed, i, bits, t, orbit_length)
                   for i in range(sample_count)]
    averages = [a for a, _ in results]
    retries = sum(r for _, r in results)
    lower, upper = p_bounds(t, trunc_k)
    return ErgodicRun(seed=seed, sample_count=sample_count,
                      orbit_length=orbit_length, t=t, averages=averages,
                      p_lower=lower, p_upper=upper, trunc_k=trunc_k,
                      sample_bits=bits, retries=retries)


def golden_conjugate_dyadic(bits: int = 4096) -> Fraction:
    """Dyadic approximation of (sqrt(5)-1)/2, whose digits are all ones."""
    return Fraction(math.isqrt(5 << (2 * bits)) - (1 << bits), 1 << (bits + 1))


def sqrt2_minus_one_dyadic(bits: int = 4096) -> Fraction:
    """Dyadic approximation of sqrt(2)-1, whose digits are all twos."""
    return Fraction(math.isqrt(2 << (2 * bits)) - (1 << bits), 1 << bits)
