"""Constrained cylinder families: counting, covers, and dimension estimators.

A constraint family fixes, for each position k, an admissible integer range
[lo_k, hi_k) for the k-th partial quotient, optionally adding the chain
condition a_1 <= a_2 <= ... <= a_n.  Three kinds recur:

  * banded families with a_k in [k s_k, (k+1) s_k) for a scale sequence s;
  * chained families bounded above by floor(k**(alpha+eps)) with per-index
    floors a_j >= j**(alpha-eps);
  * the same without the floors.

The number of nondecreasing n-tuples with values in [1, L] is the binomial
C(n+L-1, n); constrained variants are counted exactly by a prefix-sum
recurrence over values.  Dimension readings come from two directions: a
Falconer-style lower bound driven by branching counts and gap sizes, and a
critical-exponent proxy s* solving sum |I|^s = 1 over a generation of
cylinders, by bisection on exact lengths when the family is small enough and
from log-domain count/length bounds otherwise.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from .cfcore import PQSeq, ceil_rational_power, floor_rational_power
from .errors import (BracketError, ContractViolation, EnumerationTooLarge)
from .estimates import TailEstimate, tail_estimate

DEFAULT_ENUM_CAP = 10**8
DEFAULT_LENGTH_CAP = 10**6
BISECT_TOL = 1e-4

LOG_2PI = math.log(2 * math.pi)


# -- families ------------------------------------------------------------------

@dataclass
class ConstraintFamily:
    """Per-position digit ranges, with an optional nondecreasing-chain condition."""
    name: str
    range_fn: Callable[[int], tuple[int, int]]
    monotone: bool = False

    def range(self, k: int) -> tuple[int, int]:
        lo, hi = self.range_fn(k)
        if lo < 1:
            raise ContractViolation(f"{self.name}: lo_{k} = {lo} < 1")
        return lo, hi

    def widths(self, n: int) -> list[int]:
        return [max(0, hi - lo) for lo, hi in (self.range(k) for k in range(1, n + 1))]


def d_family(s_spec: PQSeq) -> ConstraintFamily:
    """Digits in [k s_k, (k+1) s_k); consecutive ranges are disjoint and rising."""
    def rng(k: int) -> tuple[int, int]:
        s = s_spec.a(k)
        return k * s, (k + 1) * s
    return ConstraintFamily(f"banded[{s_spec.describe()}]", rng)


def _as_exact(x, what: str) -> Fraction:
    try:
        return Fraction(x)
    except (TypeError, ValueError):
        raise ContractViolation(f"{what} must be rational, got {x!r}")


def c_family(alpha, eps, k: int) -> ConstraintFamily:
    """Chained digits <= floor(k**(alpha+eps)) with floors a_j >= j**(alpha-eps).

    Bounds are exact integer powers, so the family is the same set of tuples
    whatever floating format the caller started from.
    """
    alpha, eps = _as_exact(alpha, "alpha"), _as_exact(eps, "eps")
    if k < 1:
        raise ContractViolation(f"generation must be >= 1, got {k}")
    if eps <= 0 or alpha < 1:
        raise ContractViolation(f"need alpha >= 1 and eps > 0, got {alpha}, {eps}")
    hi = floor_rational_power(k, alpha + eps) + 1
    low_exp = alpha - eps

    def rng(j: int) -> tuple[int, int]:
        if j > k:
            raise ContractViolation(f"family built for generation {k}, asked for {j}")
        lo = 1 if low_exp <= 0 else ceil_rational_power(j, low_exp)
        return max(1, lo), hi

    return ConstraintFamily(f"chained[{alpha}+-{eps}, k={k}]", rng, monotone=True)


def c_tilde_family(alpha, eps, k: int) -> ConstraintFamily:
    """Chained digits <= floor(k**(alpha+eps)), no per-index floors."""
    alpha, eps = _as_exact(alpha, "alpha"), _as_exact(eps, "eps")
    if k < 1:
        raise ContractViolation(f"generation must be >= 1, got {k}")
    if eps <= 0:
        raise ContractViolation(f"need eps > 0, got {eps}")
    hi = floor_rational_power(k, alpha + eps) + 1

    def rng(j: int) -> tuple[int, int]:
        if j > k:
            raise ContractViolation(f"family built for generation {k}, asked for {j}")
        return 1, hi

    return ConstraintFamily(f"chained-free[{alpha}+-{eps}, k={k}]", rng, monotone=True)


def uniform_family(digits, monotone: bool = False) -> ConstraintFamily:
    """Digits drawn from a fixed contiguous set [lo, hi) at every position."""
    lo, hi = int(digits[0]), int(digits[-1]) + 1
    if list(digits) != list(range(lo, hi)):
        raise ContractViolation("uniform family needs a contiguous digit set")
    return ConstraintFamily(f"uniform[{lo},{hi - 1}]", lambda k: (lo, hi),
                            monotone=monotone)


# -- counting ------------------------------------------------------------------

def count_monotone(n: int, L: int) -> int:
    """Number of nondecreasing n-tuples with values in [1, L]: C(n+L-1, n)."""
    if n < 1 or L < 1:
        raise ContractViolation(f"need n >= 1 and L >= 1, got n={n}, L={L}")
    return math.comb(n + L - 1, n)


def count_family(f: ConstraintFamily, n: int) -> int:
    """Exact tuple count at generation n.

    Free families multiply widths; chained families run the prefix-sum
    recurrence over values, exact in big integers.
    """
    if n < 1:
        raise ContractViolation(f"generation must be >= 1, got {n}")
    ranges = [f.range(k) for k in range(1, n + 1)]
    if any(hi <= lo for lo, hi in ranges):
        return 0
    if not f.monotone:
        out = 1
        for lo, hi in ranges:
            out *= hi - lo
        return out
    v_max = max(hi for _, hi in ranges) - 1
    # counts[v] = number of admissible chains so far ending at value v+1
    counts = [0] * v_max
    lo, hi = ranges[0]
    for v in range(lo, hi):
        counts[v - 1] = 1
    for lo, hi in ranges[1:]:
        acc = 0
        nxt = [0] * v_max
        for v in range(1, v_max + 1):
            acc += counts[v - 1]
            if lo <= v < hi:
                nxt[v - 1] = acc
        counts = nxt
    return sum(counts)


def enumerate_family(f: ConstraintFamily, n: int,
                     cap: int = DEFAULT_ENUM_CAP) -> Iterator[tuple[int, ...]]:
    """Yield the admissible tuples at generation n in lexicographic order."""
    if n < 1:
        raise ContractViolation(f"generation must be >= 1, got {n}")
    total = count_family(f, n)
    if total > cap:
        raise EnumerationTooLarge(
            f"{f.name} has {total} tuples at generation {n}, cap is {cap}; "
            f"use the analytic count/length bounds instead")
    ranges = [f.range(k) for k in range(1, n + 1)]

    def walk(depth: int, prev: int, prefix: tuple[int, ...]):
        if depth == n:
            yield prefix
            return
        lo, hi = ranges[depth]
        if f.monotone:
            lo = max(lo, prev)
        for v in range(lo, hi):
            yield from walk(depth + 1, v, prefix + (v,))

    return walk(0, 1, ())


# -- cover reports ---------------------------------------------------------------

@dataclass
class CoverReport:
    """Count and length data for one generation of a cylinder cover.

    Exact per-cylinder log lengths are retained when the family was small
    enough to enumerate; otherwise only the analytic bounds are available and
    weighted sums come as a bracket.
    """
    generation: int
    log_count: float
    log_min_len: float
    log_max_len: float
    count: int | None = None
    log_lengths: np.ndarray | None = None

    def __post_init__(self):
        if self.log_min_len > self.log_max_len + 1e-12:
            raise ContractViolation(
                f"log_min_len {self.log_min_len} > log_max_len {self.log_max_len}")

    def log_weighted_sum(self, s: float) -> float:
        """log sum |I|^s over the generation, from exact lengths."""
        if self.log_lengths is None:
            raise ContractViolation(
                "exact lengths not retained; use log_weighted_bounds")
        return _logsumexp(s * self.log_lengths)

    def log_weighted_bounds(self, s: float) -> tuple[float, float]:
        """Bracket for log sum |I|^s: count times the extreme lengths."""
        if s < 0:
            raise ContractViolation(f"s must be >= 0, got {s}")
        return (self.log_count + s * self.log_min_len,
                self.log_count + s * self.log_max_len)

    def to_dict(self) -> dict:
        out = {
            "generation": self.generation,
            "log_count": self.log_count,
            "log_min_len": self.log_min_len,
            "log_max_len": self.log_max_len,
        }
        if self.count is not None:
            out["count"] = str(self.count)  # may exceed double precision
        return out


def _logsumexp(a: np.ndarray) -> float:
    m = float(np.max(a))
    if not math.isfinite(m):
        return m
    return m + math.log(float(np.exp(a - m).sum()))


def enumerated_cover(f: ConstraintFamily, n: int,
                     cap: int = DEFAULT_LENGTH_CAP) -> CoverReport:
    """Enumerate generation n and record the exact cylinder lengths.

    The denominator recursion is carried along the search tree, so each leaf
    costs one multiply; length of the leaf cylinder is 1/(q (q + q')).
    """
    total = count_family(f, n)
    if total > cap:
        raise EnumerationTooLarge(
            f"{f.name}: {total} exact lengths at generation {n} exceed the cap {cap}")
    if total == 0:
        raise ContractViolation(f"{f.name} is empty at generation {n}")
    ranges = [f.range(k) for k in range(1, n + 1)]
    logs = np.empty(total)
    pos = 0

    def walk(depth: int, prev: int, q: int, qp: int):
        nonlocal pos
        lo, hi = ranges[depth]
        if f.monotone:
            lo = max(lo, prev)
        for v in range(lo, hi):
            q2, qp2 = v * q + qp, q
            if depth + 1 == n:
                logs[pos] = -(math.log(q2) + math.log(q2 + qp2))
                pos += 1
            else:
                walk(depth + 1, v, q2, qp2)

    walk(0, 1, 1, 0)
    return CoverReport(generation=n, log_count=math.log(total),
                       log_min_len=float(logs.min()), log_max_len=float(logs.max()),
                       count=total, log_lengths=logs)


@dataclass
class AnalyticLevels:
    """Per-generation log counts and log length bounds, 1-indexed arrays."""
    name: str
    log_count: np.ndarray
    log_min_len: np.ndarray
    log_max_len: np.ndarray

    def report(self, n: int) -> CoverReport:
        if not 1 <= n <= len(self.log_count):
            raise ContractViolation(f"generation {n} outside 1..{len(self.log_count)}")
        i = n - 1
        return CoverReport(generation=n, log_count=float(self.log_count[i]),
                           log_min_len=float(self.log_min_len[i]),
                           log_max_len=float(self.log_max_len[i]))


def d_family_levels(s_spec: PQSeq, n_max: int) -> AnalyticLevels:
    """Closed-form count and length bounds for the banded family.

    Count is prod s_k.  Digits sit in [k s_k, (k+1) s_k), so the denominator
    is at least prod k s_k and at most prod (k+1) s_k, giving
        length <= prod (k s_k)^-2        (length <= 1/q^2)
        length >= (1/2) prod ((k+1) s_k)^-2   (length >= 1/(2 q^2), q <= prod(a_k + 1)).
    """
    log_s = s_spec.log_a_block(n_max)
    ks = np.arange(1, n_max + 1, dtype=float)
    log_count = np.cumsum(log_s)
    log_max = -2.0 * np.cumsum(np.log(ks) + log_s)
    log_min = -math.log(2) - 2.0 * np.cumsum(np.log(ks + 1) + log_s)
    return AnalyticLevels(f"banded[{s_spec.describe()}]", log_count, log_min, log_max)


# -- Stirling and count bounds ---------------------------------------------------

def stirling_bounds(n: int) -> tuple[float, float]:
    """Log-domain sandwich sqrt(2 pi) n^(n+1/2) e^-n <= n! <= e n^(n+1/2) e^-n."""
    if n < 1:
        raise ContractViolation(f"need n >= 1, got {n}")
    body = (n + 0.5) * math.log(n) - n
    return 0.5 * LOG_2PI + body, 1.0 + body


def ck_count_bound(k: int, alpha: float, eps: float) -> float:
    """Log of the Stirling-form ceiling 2^k (k!)^(a+e-1) (e^k/sqrt(2 pi k))^(a+e)."""
    _check_ck_args(k, alpha, eps)
    ae = alpha + eps
    return (k * math.log(2) + (ae - 1) * math.lgamma(k + 1)
            + ae * (k - 0.5 * math.log(2 * math.pi * k)))


def ck_count_bound_direct(k: int, alpha: float, eps: float) -> float:
    """Log of the direct ceiling 2^k k^(k(a+e)) / k!."""
    _check_ck_args(k, alpha, eps)
    return (k * math.log(2) + k * (alpha + eps) * math.log(k)
            - math.lgamma(k + 1))


def _check_ck_args(k: int, alpha: float, eps: float):
    if k < 1:
        raise ContractViolation(f"need k >= 1, got {k}")
    if alpha < 1 or not 0 < eps < alpha:
        raise ContractViolation(
            f"bounds hold for alpha >= 1, 0 < eps < alpha; got {alpha}, {eps}")


# -- gaps and the Falconer estimator ----------------------------------------------

def gap_epsilon(s_spec: PQSeq, n: int) -> float:
    """log of the level-n gap floor: -log 8 - 2 sum_{k<=n} log((k+1) s_k)."""
    return float(gap_epsilon_block(s_spec, n)[-1])


def gap_epsilon_block(s_spec: PQSeq, n_max: int) -> np.ndarray:
    if n_max < 1:
        raise ContractViolation(f"need n >= 1, got {n_max}")
    for k in range(1, n_max + 1):
        v = s_spec.a(k)
        if v < 3:
            raise ContractViolation(f"s({k}) = {v} < 3")
        if s_spec.monotone_hint and v >= 3:
            break
    log_s = s_spec.log_a_block(n_max)
    ks = np.arange(1, n_max + 1, dtype=float)
    return -math.log(8) - 2.0 * np.cumsum(np.log(ks + 1) + log_s)


def falconer_lower_bound(m, log_eps, window: int | None = None) -> TailEstimate:
    """Running lower bound log(m_1..m_n) / -log(m_{n+1} eps_{n+1}).

    m holds the per-level branching counts of a nested construction, log_eps
    the log gap floors; tail_inf is the dimension reading.
    """
    m = np.asarray(list(m), dtype=float)
    log_eps = np.asarray(list(log_eps), dtype=float)
    if len(m) != len(log_eps):
        raise ContractViolation(f"length mismatch: {len(m)} counts, {len(log_eps)} gaps")
    if len(m) < 2:
        raise ContractViolation("need at least two levels")
    if (m < 2).any():
        bad = int(np.argmax(m < 2)) + 1
        raise ContractViolation(f"m({bad}) = {m[bad - 1]:g} < 2")
    if (np.diff(log_eps) >= 0).any():
        bad = int(np.argmax(np.diff(log_eps) >= 0)) + 2
        raise ContractViolation(f"gap floors must strictly decrease; level {bad}")
    denom = -(np.log(m[1:]) + log_eps[1:])
    if (denom <= 0).any():
        bad = int(np.argmax(denom <= 0)) + 2
        raise ContractViolation(f"m*eps must be < 1 from level 2 on; level {bad}")
    vals = np.cumsum(np.log(m))[:-1] / denom
    return tail_estimate(np.arange(1, len(m)), vals, window)


# -- critical exponent -------------------------------------------------------------

@dataclass
class CriticalReport:
    """Stabilized critical-exponent reading with its honest bracket."""
    s_star: float
    bracket: tuple[float, float]
    generation: int
    mode: str
    history: list = field(default_factory=list)


def _bisect_root(fn, generation: int) -> tuple[float, tuple[float, float]]:
    """Root of a decreasing fn on s >= 0, to absolute tolerance BISECT_TOL."""
    f0 = fn(0.0)
    if f0 < 0:
        raise BracketError("weighted sum below 1 already at s=0",
                           0.0, 1.0, f0, fn(1.0))
    if f0 == 0:
        return 0.0, (0.0, 0.0)
    lo, hi = 0.0, 1.0
    while fn(hi) >= 0:
        lo, hi = hi, hi * 2
        if hi > 64:
            raise BracketError("weighted sum never drops below 1",
                               lo, hi, fn(lo), fn(hi))
    while hi - lo > BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if fn(mid) >= 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), (lo, hi)


def critical_exponent(source, n_max: int,
                      cap: int = DEFAULT_LENGTH_CAP) -> CriticalReport:
    """Critical exponent s* with sum |I|^s* = 1 at generation n_max.

    A ConstraintFamily is enumerated with exact lengths and bisected; an
    AnalyticLevels source instead brackets s* between the roots of the two
    log-domain bounds:
        log_count + s log_max_len <= log sum |I|^s <= log_count + s log_min_len
    so the bracket is [log_count/-log_min_len, log_count/-log_max_len].
    """
    if n_max < 1:
        raise ContractViolation(f"generation must be >= 1, got {n_max}")
    history = []
    if isinstance(source, AnalyticLevels):
        for n in range(1, n_max + 1):
            rep = source.report(n)
            if rep.log_count < 0:
                raise BracketError("empty generation", 0.0, 0.0, -math.inf, -math.inf)
            lo = rep.log_count / -rep.log_min_len
            hi = rep.log_count / -rep.log_max_len
            history.append((n, lo, hi))
        n, lo, hi = history[-1]
        return CriticalReport(0.5 * (lo + hi), (lo, hi), n, "analytic", history)
    if isinstance(source, ConstraintFamily):
        for n in range(1, n_max + 1):
            rep = enumerated_cover(source, n, cap=cap)
            s_n, bracket = _bisect_root(rep.log_weighted_sum, n)
            history.append((n, s_n))
        return CriticalReport(s_n, bracket, n_max, "enumerated", history)
    raise ContractViolation(f"cannot read levels from {type(source).__name__}")
