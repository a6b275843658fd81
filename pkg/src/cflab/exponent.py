"""Convergence exponent of a partial-quotient sequence.

For a sequence (a_n) the convergence exponent is

    tau = inf { s >= 0 : sum_n a_n**(-s) < infinity },

zero for bounded sequences whose series always diverges only at s = 0, and
for nondecreasing unbounded sequences equal to limsup log n / log a_n.  The
estimators here work entirely through the log_a accessor so closed-form
sequences never materialize huge integers.  Infinite tau (bounded sequences,
e.g. all ones) is reported through the divergent regime of TailEstimate, not
as an arithmetic value.
"""

import math

import numpy as np

from .cfcore import (ConstantOneSeq, ExpFloorSeq, PerturbedSeq, PowerFloorSeq,
                     PQSeq, SplicedSeq)
from .errors import ContractViolation
from .estimates import TailEstimate, tail_estimate

__all__ = [
    "tau_series_sum", "tau_monotone_estimate", "liminf_ratio_estimate",
    "construct_tau", "perturb", "splice", "lambda_membership_report",
    "TailEstimate",
]


def _check_n(seq: PQSeq, n: int):
    if n < 1:
        raise ContractViolation(f"N must be >= 1, got {n}")
    if seq.length is not None and n > seq.length:
        raise ContractViolation(f"N={n} beyond the sequence's finite length {seq.length}")


def tau_series_sum(seq: PQSeq, s: float, n_max: int) -> float:
    """log of sum_{n<=N} a_n**(-s), accumulated stably in the log domain."""
    if s < 0:
        raise ContractViolation(f"series exponent must be >= 0, got {s}")
    _check_n(seq, n_max)
    terms = -s * seq.log_a_block(n_max)
    peak = float(terms.max())
    return peak + math.log(np.exp(terms - peak).sum())


def tau_monotone_estimate(seq: PQSeq, n_max: int, window: int | None = None,
                          burn_in: int = 0) -> TailEstimate:
    """Running log n / log a_n for a nondecreasing sequence; tail_sup is the estimate.

    Indices with log a_n <= 0 (quotient 1) and indices up to burn_in are
    excluded from the running values.  A sequence with no usable indices
    (all ones) reports the infinite-exponent regime via the divergence flag.
    """
    _check_n(seq, n_max)
    bad = seq.first_decrease(n_max)
    if bad is not None:
        raise ContractViolation(f"sequence decreases at index {bad}; estimator needs nondecreasing input")
    logs = seq.log_a_block(n_max)
    n = np.arange(1, n_max + 1, dtype=float)
    keep = (logs > 0) & (n > burn_in)
    ratios = np.log(n[keep]) / logs[keep]
    return tail_estimate(n[keep].astype(np.int64), ratios, window,
                         empty_is_divergent=True)


def liminf_ratio_estimate(seq: PQSeq, n_max: int, window: int | None = None,
                          burn_in: int = 1) -> TailEstimate:
    """Running log a_n / log n for n >= 2; tail_inf is the liminf reading.

    No monotonicity requirement.  The reciprocal of the liminf reading is the
    exponent for sequences where the ratio formula applies.
    """
    _check_n(seq, n_max)
    if n_max < 2:
        raise ContractViolation("need N >= 2 for ratio estimates")
    logs = seq.log_a_block(n_max)
    n = np.arange(1, n_max + 1, dtype=float)
    keep = n > max(1, burn_in)
    ratios = logs[keep] / np.log(n[keep])
    return tail_estimate(n[keep].astype(np.int64), ratios, window)


def construct_tau(alpha) -> PQSeq:
    """A sequence whose convergence exponent is alpha.

    alpha = 0 gives a_n = floor(e**n); finite alpha > 0 gives
    a_n = floor(n**(1/alpha)); alpha = inf gives the all-ones sequence.
    """
    if alpha == math.inf:
        return ConstantOneSeq()
    if isinstance(alpha, float) and not math.isfinite(alpha):
        raise ContractViolation(f"alpha must be >= 0 or inf, got {alpha}")
    if alpha < 0:
        raise ContractViolation(f"alpha must be >= 0, got {alpha}")
    if alpha == 0:
        return ExpFloorSeq()
    return PowerFloorSeq(alpha)


def perturb(base: PQSeq, bits) -> PerturbedSeq:
    """Add a 0/1 bit sequence to a base sequence; the exponent is unchanged."""
    return PerturbedSeq(base, bits)


def splice(prefix_src: PQSeq, cut: int, tail_src: PQSeq) -> SplicedSeq:
    """Replace the first `cut` entries of tail_src with those of prefix_src.

    The exponent only depends on the tail, so any finite splice preserves it.
    """
    return SplicedSeq(prefix_src, cut, tail_src)


def lambda_membership_report(seq: PQSeq, n_max: int) -> dict:
    """Consistency report for membership in the nondecreasing-sequence set.

    Returns the largest prefix length over which the sequence is nondecreasing
    and the indices where it strictly increases.  Finite data can only certify
    consistency up to n_max, never membership.
    """
    _check_n(seq, n_max)
    monotone_up_to = n_max
    decreased = False
    growth_witnesses: list[int] = []
    prev = seq.a(1)
    for n in range(2, n_max + 1):
        cur = seq.a(n)
        if cur < prev and not decreased:
            monotone_up_to = n - 1
            decreased = True
        if cur > prev:
            growth_witnesses.append(n)
        prev = cur
    return {
        "checked_up_to": n_max,
        "monotone_up_to": monotone_up_to,
        "growth_witnesses": growth_witnesses,
    }
