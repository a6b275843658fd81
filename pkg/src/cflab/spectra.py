"""Dimension spectra of exponent level sets and growth-constrained sets.

Closed forms implemented here:

  * level sets of the convergence exponent over [0,1): dimension 1/2 for
    every finite exponent, 1 for the infinite exponent;
  * the same level sets inside the nondecreasing-sequence set: (1 - alpha)/2
    on [0, 1], zero beyond;
  * sets with a_n >= n**alpha for all n: zero below alpha = 1, then
    (alpha - 1)/(2 alpha);
  * sets with a_n >= n**alpha infinitely often: 1 at alpha = 0, else 1/2;
  * sets with a_n >= phi(n) for all n: 1/(B + 1) where
    log B = limsup log phi(n)/n (all-n version) or
    log B = limsup log log phi(n)/n (infinitely-often, doubly exponential phi).

The xi quantity parametrizes the dimension 1/(2 + xi) of nested families
with n s_n <= a_n < (n+1) s_n; its running quotient is

    (2 log (n+1)! + log s_{n+1}) / log(s_1 s_2 ... s_n),

accumulated as sums of logs.  The auxiliary T-sequence
T_j = sup_{n>=j} exp(phi(n) (B+eps)**(j-n)) is kept in the doubly-log domain
(log log T_j) so exponentially growing phi survives depth 10**3.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cfcore import PQSeq
from .errors import ContractViolation, UnsupportedRegime
from .estimates import TailEstimate, tail_estimate

__all__ = [
    "SpectrumPoint", "dim_level_full", "dim_level_lambda", "dim_e", "dim_f",
    "intersection_trichotomy", "PhiSpec", "phi_power", "phi_exponential",
    "phi_explicit", "phi_tower", "phi_stretched", "phi_from_log",
    "xi_limit", "dim_from_xi", "b_growth", "b_hirst", "dim_from_b",
    "TSeq", "t_sequence", "dim_banded_estimate", "ephi_figure_table",
]


# -- closed-form spectra ------------------------------------------------------

@dataclass
class SpectrumPoint:
    alpha: object          # Fraction, float, or math.inf
    dim: object            # Fraction when alpha is exact, else float
    regime: str


def _norm_alpha(alpha):
    """Normalize to (value, exact); exact inputs keep Fraction arithmetic."""
    if alpha == math.inf:
        return math.inf, True
    if isinstance(alpha, (int, Fraction)):
        val = Fraction(alpha)
    elif isinstance(alpha, float):
        if not math.isfinite(alpha) or alpha < 0:
            raise ContractViolation(f"alpha must be >= 0 or inf, got {alpha}")
        return alpha, False
    elif isinstance(alpha, str):
        val = Fraction(alpha)
    else:
        raise ContractViolation(f"cannot interpret alpha={alpha!r}")
    if val < 0:
        raise ContractViolation(f"alpha must be >= 0, got {alpha}")
    return val, True


def _half(exact: bool):
    return Fraction(1, 2) if exact else 0.5


def dim_level_full(alpha) -> SpectrumPoint:
    """Dimension of the level set {x : exponent = alpha} over all of [0,1)."""
    a, exact = _norm_alpha(alpha)
    if a == math.inf:
        return SpectrumPoint(a, Fraction(1) if exact else 1.0, "infinite exponent")
    if isinstance(a, float) and a < 0 or a < 0:
        raise ContractViolation(f"alpha must be >= 0, got {alpha}")
    return SpectrumPoint(a, _half(exact), "finite exponent")


def dim_level_lambda(alpha) -> SpectrumPoint:
    """Dimension of the level set restricted to nondecreasing sequences."""
    a, exact = _norm_alpha(alpha)
    if a == math.inf or a > 1:
        return SpectrumPoint(a, Fraction(0) if exact else 0.0, "above one")
    dim = (1 - a) / 2
    return SpectrumPoint(a, dim, "unit interval")


def dim_e(alpha) -> SpectrumPoint:
    """Dimension of {a_n >= n**alpha for all n}."""
    a, exact = _norm_alpha(alpha)
    if a == math.inf:
        return SpectrumPoint(a, _half(True), "limit")
    if a < 1:
        return SpectrumPoint(a, Fraction(0) if exact else 0.0, "below one")
    dim = (a - 1) / (2 * a)
    return SpectrumPoint(a, dim, "at least one")


def dim_f(alpha) -> SpectrumPoint:
    """Dimension of {a_n >= n**alpha infinitely often}."""
    a, exact = _norm_alpha(alpha)
    if a == 0:
        return SpectrumPoint(a, Fraction(1) if exact else 1.0, "zero")
    return SpectrumPoint(a, _half(exact), "positive")


def intersection_trichotomy(alpha) -> dict:
    """Compare dim E(alpha) against dim Lambda + dim F(alpha) - 1.

    Returns the two sides, the relation ('<', '=', '>'), and checks the
    strict inequality dim E(alpha) < min(1/2, dim F(alpha)).
    """
    a, exact = _norm_alpha(alpha)
    if a == math.inf:
        raise ContractViolation("trichotomy is stated for finite alpha")
    e = dim_e(a).dim
    f = dim_f(a).dim
    lam = _half(exact)
    rhs = lam + f - 1
    relation = "<" if e < rhs else ("=" if e == rhs else ">")
    strict = e < min(lam, f)
    return {
        "alpha": a,
        "dim_e": e,
        "codim_sum": rhs,
        "relation": relation,
        "strictly_below_min": strict,
    }


# -- growth laws phi ------------------------------------------------------------

class PhiSpec:
    """A positive growth function phi(n), accessed through its logarithm.

    log_phi_block(N) returns log phi(1..N); loglog_phi_block(N) returns
    log log phi(1..N) and requires phi(n) > 1.  Both must be cheap for large N,
    so constructors supply vectorized closed forms.
    """

    def __init__(self, label: str, log_fn, loglog_fn=None, length: int | None = None):
        self.label = label
        self._log_fn = log_fn
        self._loglog_fn = loglog_fn
        self.length = length

    def _check(self, n_max: int):
        if n_max < 1:
            raise ContractViolation(f"N must be >= 1, got {n_max}")
        if self.length is not None and n_max > self.length:
            raise ContractViolation(f"N={n_max} beyond explicit length {self.length}")

    def log_phi_block(self, n_max: int) -> np.ndarray:
        self._check(n_max)
        return np.asarray(self._log_fn(np.arange(1, n_max + 1, dtype=float)), dtype=float)

    def log_phi(self, n: int) -> float:
        return float(self.log_phi_block(n)[-1]) if n <= 4 else float(
            self._log_fn(np.array([float(n)]))[0])

    def loglog_phi_block(self, n_max: int) -> np.ndarray:
        self._check(n_max)
        ns = np.arange(1, n_max + 1, dtype=float)
        if self._loglog_fn is not None:
            return np.asarray(self._loglog_fn(ns), dtype=float)
        logs = self.log_phi_block(n_max)
        if (logs <= 0).any():
            bad = int(np.argmax(logs <= 0)) + 1
            raise ContractViolation(f"phi({bad}) <= 1, log log phi undefined")
        return np.log(logs)

    def check_nondecreasing(self, n_max: int):
        logs = self.log_phi_block(n_max)
        with np.errstate(invalid="ignore"):
            diffs = np.diff(logs)
        bad = np.nonzero(diffs < -1e-12)[0]  # nan (inf to inf) is not a decrease
        if len(bad):
            raise ContractViolation(f"phi decreases at n={int(bad[0]) + 2}")

    def hypothesis_flags(self, n_max: int) -> dict:
        """Desk checks of the growth hypotheses used by the phi spectra."""
        logs = self.log_phi_block(n_max)
        ns = np.arange(1, n_max + 1, dtype=float)
        with np.errstate(invalid="ignore"):
            diffs = np.diff(logs)
        # nan from inf-to-inf steps compares False, so it never flags a decrease
        nondecreasing = len(logs) < 2 or not (diffs < -1e-12).any()
        # phi(n)/log n -> infinity: compare the tail of log phi - log log n
        # against its early values.
        r = logs[1:] - np.log(np.log(ns[1:] + 1e-300))
        grows = len(r) < 4 or float(r[-1]) > float(r[: max(1, len(r) // 4)].max())
        return {"nondecreasing": bool(nondecreasing),
                "phi_over_log_grows": bool(grows)}


def phi_power(c, gamma) -> PhiSpec:
    """phi(n) = c * n**gamma, c > 0."""
    c, gamma = float(c), float(gamma)
    if c <= 0:
        raise ContractViolation(f"coefficient must be positive, got {c}")
    return PhiSpec(f"{c:g}*n^{gamma:g}", lambda n: math.log(c) + gamma * np.log(n))


def phi_exponential(a, b) -> PhiSpec:
    """phi(n) = a * b**n with a > 0, b > 1."""
    a, b = float(a), float(b)
    if a <= 0 or b <= 1:
        raise ContractViolation(f"need a > 0 and b > 1, got a={a}, b={b}")
    return PhiSpec(f"{a:g}*{b:g}^n", lambda n: math.log(a) + n * math.log(b))


def phi_explicit(values) -> PhiSpec:
    vals = np.asarray([float(v) for v in values], dtype=float)
    if (vals <= 0).any():
        raise ContractViolation("explicit phi values must be positive")
    logs = np.log(vals)
    return PhiSpec(f"explicit[{len(vals)}]",
                   lambda n: logs[n.astype(int) - 1], length=len(vals))


def phi_tower(a, b) -> PhiSpec:
    """phi(n) = a**(b**n) with a > 1, b > 1 (doubly exponential)."""
    a, b = float(a), float(b)
    if a <= 1 or b <= 1:
        raise ContractViolation(f"need a > 1 and b > 1, got a={a}, b={b}")
    log_a, log_b = math.log(a), math.log(b)

    def log_fn(n):
        with np.errstate(over="ignore"):
            return np.exp(n * log_b) * log_a  # overflows to inf harmlessly

    return PhiSpec(f"{a:g}^({b:g}^n)", log_fn,
                   loglog_fn=lambda n: n * log_b + math.log(log_a))


def phi_stretched(c, gamma) -> PhiSpec:
    """phi(n) = exp(c * n**gamma) with c > 0, gamma > 0."""
    c, gamma = float(c), float(gamma)
    if c <= 0 or gamma <= 0:
        raise ContractViolation(f"need c > 0 and gamma > 0, got c={c}, gamma={gamma}")
    return PhiSpec(f"e^({c:g}*n^{gamma:g})", lambda n: c * n**gamma,
                   loglog_fn=lambda n: math.log(c) + gamma * np.log(n))


def phi_from_log(label: str, log_fn, loglog_fn=None) -> PhiSpec:
    """Escape hatch for growth laws outside the named forms (vectorized log)."""
    return PhiSpec(label, log_fn, loglog_fn=loglog_fn)


# -- xi and the banded-family dimension ---------------------------------------

def _check_s_floor(s_spec: PQSeq, n_max: int, floor: int = 3):
    """Exact check s(n) >= floor, using the monotone hint to stop early."""
    for n in range(1, n_max + 1):
        v = s_spec.a(n)
        if v < floor:
            raise ContractViolation(f"s({n}) = {v} < {floor}")
        if v >= floor and s_spec.monotone_hint:
            return


def xi_limit(s_spec: PQSeq, n_max: int, window: int | None = None) -> TailEstimate:
    """Running xi quotient for a scale sequence s; tail_sup is the xi reading.

    The implied dimension of the banded family is 1/(2 + xi); see dim_from_xi.
    """
    if n_max < 2:
        raise ContractViolation(f"need N >= 2, got {n_max}")
    if s_spec.length is not None and n_max + 1 > s_spec.length:
        raise ContractViolation(f"need s up to index {n_max + 1}")
    _check_s_floor(s_spec, n_max + 1)
    log_s = s_spec.log_a_block(n_max + 1)
    ns = np.arange(1, n_max + 2, dtype=float)
    log_fact = np.cumsum(np.log(ns))            # log (k!)
    denom = np.cumsum(log_s)[:n_max]            # log (s_1 ... s_n)
    numer = 2 * log_fact[1:n_max + 1] + log_s[1:n_max + 1]
    vals = numer / denom
    return tail_estimate(np.arange(1, n_max + 1), vals, window)


def dim_from_xi(xi_hat: float) -> float:
    """Dimension 1/(2 + xi); zero when the xi estimate diverged."""
    if xi_hat == math.inf:
        return 0.0
    if xi_hat < 0:
        raise ContractViolation(f"xi must be >= 0, got {xi_hat}")
    return 1.0 / (2.0 + xi_hat)


def dim_banded_estimate(s_spec: PQSeq, n_max: int, window: int | None = None) -> TailEstimate:
    """Running liminf quotient log(s_1..s_n) / (2 log(s_1..s_n) + log s_{n+1}).

    Direct dimension evaluator for the banded families s_n <= a_n < c s_n
    (any band width c >= 2); tail_inf is the reading.  Requires s_n >= 3.
    """
    if n_max < 2:
        raise ContractViolation(f"need N >= 2, got {n_max}")
    _check_s_floor(s_spec, n_max + 1)
    log_s = s_spec.log_a_block(n_max + 1)
    cum = np.cumsum(log_s)[:n_max]
    vals = cum / (2 * cum + log_s[1:n_max + 1])
    return tail_estimate(np.arange(1, n_max + 1), vals, window)


# -- B readings for phi-constrained sets --------------------------------------

def b_growth(phi: PhiSpec, n_max: int, window: int | None = None) -> TailEstimate:
    """Running log phi(n) / n; tail_sup reads log B, dimension is 1/(B+1)."""
    phi.check_nondecreasing(n_max)
    logs = phi.log_phi_block(n_max)
    ns = np.arange(1, n_max + 1, dtype=float)
    if not np.isfinite(logs).all():
        raise UnsupportedRegime(
            f"log phi overflows for {phi.label}; the all-n spectrum needs the "
            f"infinitely-often reading (b_hirst) for doubly exponential growth")
    return tail_estimate(ns.astype(np.int64), logs / ns, window)


def b_hirst(phi: PhiSpec, n_max: int, window: int | None = None) -> TailEstimate:
    """Running log log phi(n) / n for the infinitely-often spectrum (phi > 1)."""
    phi.check_nondecreasing(min(n_max, 64))  # direct log check; loglog handles the rest
    ll = phi.loglog_phi_block(n_max)
    ns = np.arange(1, n_max + 1, dtype=float)
    return tail_estimate(ns.astype(np.int64), ll / ns, window)


def dim_from_b(log_b_hat: float, diverged: bool = False) -> float:
    """Dimension 1/(B + 1) from a log B reading; divergent B gives zero."""
    if diverged or log_b_hat == math.inf:
        return 0.0
    b = math.exp(log_b_hat)
    if b < 1:
        raise UnsupportedRegime(f"B = {b} < 1 is outside the growth hypothesis")
    return 1.0 / (b + 1.0)


# -- the T-sequence ------------------------------------------------------------

@dataclass
class TSeq:
    """T_j = sup_{n>=j} exp(phi(n) (B+eps)^(j-n)), stored as log log T_j.

    The defining inequalities T_j <= T_{j+1} and T_{j+1} <= T_j**(B+eps)
    become, in the stored domain,
        loglog_t[j] <= loglog_t[j+1]   and
        loglog_t[j+1] <= loglog_t[j] + log(B+eps).
    """
    eps: float
    b_used: float
    loglog_t: np.ndarray         # index j-1 holds log log T_j
    liminf_ratio: TailEstimate   # running T_j reading of exp(log log T_j - log phi(j))
    horizon: int                 # largest search horizon certified
    notes: dict = field(default_factory=dict)

    def log_t(self, j: int) -> float:
        """log T_j as a float; +inf when past float range."""
        v = self.loglog_t[j - 1]
        return math.inf if v > 709 else math.exp(v)

    def first_monotonicity_violation(self) -> int | None:
        lam = self.loglog_t
        slack = 1e-9 + 1e-12 * np.abs(lam[:-1])
        bad = np.nonzero(lam[1:] < lam[:-1] - slack)[0]
        return int(bad[0]) + 1 if len(bad) else None

    def first_growth_violation(self) -> int | None:
        lam = self.loglog_t
        step = math.log(self.b_used + self.eps)
        slack = 1e-9 + 1e-12 * np.abs(lam[:-1])
        bad = np.nonzero(lam[1:] > lam[:-1] + step + slack)[0]
        return int(bad[0]) + 1 if len(bad) else None


def t_sequence(phi: PhiSpec, eps: float = 0.1, n_max: int = 1000,
               b: float | None = None, horizon_cap: int = 200000,
               window: int | None = None) -> TSeq:
    """Compute log log T_j for j = 1..N.

    The sup over n >= j is searched with the certified stopping rule: once
    log phi(n) <= n log(B + eps/2), every later term is below the linear
    envelope j log(B+eps) - n (log(B+eps) - log(B+eps/2)), so the search stops
    as soon as that envelope falls below the best term found.  B defaults to
    the b_growth reading at the same N.
    """
    if eps <= 0:
        raise ContractViolation(f"eps must be positive, got {eps}")
    if b is None:
        est = b_growth(phi, n_max)
        if est.diverged:
            raise UnsupportedRegime(
                f"log B reading diverges for {phi.label}; T-sequence needs finite B")
        b = math.exp(est.tail_sup)
    if b < 1:
        raise UnsupportedRegime(f"B = {b} < 1 is outside the growth hypothesis")
    step = math.log(b + eps)
    step_half = math.log(b + eps / 2)
    gap = step - step_half   # > 0

    # Lazily extended block of log phi values.
    block = phi.log_phi_block(min(2 * n_max + 16,
                                  phi.length or (2 * n_max + 16)))

    def ensure(m: int) -> np.ndarray:
        nonlocal block
        while len(block) < m:
            if phi.length is not None and len(block) >= phi.length:
                raise ContractViolation(
                    f"explicit phi too short: the sup search needs values past n={phi.length}")
            block = phi.log_phi_block(min(2 * len(block),
                                          phi.length or (2 * len(block))))
        return block

    lam = np.empty(n_max)
    horizon = 0
    chunk = 256
    for j in range(1, n_max + 1):
        best = -math.inf
        n0 = j
        certified = None
        while certified is None:
            if n0 - j > horizon_cap:
                raise UnsupportedRegime(
                    f"sup search for j={j} exceeded the horizon cap {horizon_cap}; "
                    f"phi may grow too fast for B={b:.6g}, eps={eps}")
            n1 = min(n0 + chunk, j + horizon_cap + 1)
            arr = ensure(n1)
            ns = np.arange(n0, n1, dtype=float)
            f = arr[n0 - 1:n1 - 1] + (j - ns) * step
            run = np.maximum.accumulate(f)
            if best > -math.inf:
                run = np.maximum(run, best)
            env = j * step - ns * gap
            ok = (arr[n0 - 1:n1 - 1] <= ns * step_half) & (env < run)
            hit = np.nonzero(ok)[0]
            if len(hit):
                certified = n0 + int(hit[0])
                best = float(run[hit[0]])
            else:
                best = float(run[-1])
                n0 = n1
        lam[j - 1] = best
        horizon = max(horizon, certified - j)

    ratios = np.exp(lam - block[:n_max])
    liminf = tail_estimate(np.arange(1, n_max + 1), ratios, window)
    return TSeq(eps=eps, b_used=b, loglog_t=lam, liminf_ratio=liminf,
                horizon=horizon)


# -- summary table -------------------------------------------------------------

def default_phi_family() -> list[PhiSpec]:
    return [
        phi_power(1, 2),
        phi_power(1, 3),
        phi_exponential(1, 2),
        phi_exponential(2, 3),
        phi_stretched(1, 2),
    ]


def ephi_figure_table(specs: list[PhiSpec] | None = None, n_max: int = 1000) -> list[dict]:
    """One row per growth law: the log B reading and the implied dimension."""
    rows = []
    for spec in specs if specs is not None else default_phi_family():
        flags = spec.hypothesis_flags(n_max)
        try:
            est = b_growth(spec, n_max)
            diverged = est.diverged
            log_b = est.tail_sup
        except UnsupportedRegime:
            diverged, log_b = True, math.inf
        dim = dim_from_b(log_b, diverged)
        rows.append({
            "label": spec.label,
            "log_b": None if diverged else log_b,
            "b": None if diverged else math.exp(log_b),
            "dim": dim,
            "diverged": diverged,
            **flags,
        })
    return rows
