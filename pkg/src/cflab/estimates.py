"""Finite-sample readings of limsup/liminf quantities.

Every estimator in this package produces a running sequence of values indexed
by n.  A TailEstimate reports the sup and inf of the final trailing window
(default: the last half of the samples) as the limsup/liminf readings, plus a
drift diagnostic: if the mean over the final window exceeds the mean over the
preceding window of the same size by more than drift_tol, the run is flagged
as divergent rather than pretending the tail settled.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation

DEFAULT_DRIFT_TOL = 0.05


@dataclass
class TailEstimate:
    indices: np.ndarray          # sample indices n
    values: np.ndarray           # running estimate at each index
    window: int                  # size of the trailing window actually used
    tail_sup: float
    tail_inf: float
    diverged: bool = False
    drift: float = 0.0           # window-mean increase used for the divergence flag
    notes: dict = field(default_factory=dict)

    @property
    def final(self) -> float:
        return float(self.values[-1]) if len(self.values) else math.nan

    def pairs(self):
        """(index, running value) pairs."""
        return list(zip(self.indices.tolist(), self.values.tolist()))


def tail_estimate(indices, values, window: int | None = None,
                  drift_tol: float = DEFAULT_DRIFT_TOL,
                  empty_is_divergent: bool = False) -> TailEstimate:
    """Build a TailEstimate from a running sequence.

    window is a sample count; None means half the samples (at least 1).
    An empty running sequence is only legal when empty_is_divergent is set,
    in which case the estimate reports the divergent regime (sup = +inf).
    """
    idx = np.asarray(indices, dtype=np.int64)
    vals = np.asarray(values, dtype=float)
    if idx.shape != vals.shape:
        raise ContractViolation("indices and values must have matching shapes")
    m = len(vals)
    if m == 0:
        if not empty_is_divergent:
            raise ContractViolation("no running values to estimate from")
        return TailEstimate(indices=idx, values=vals, window=0,
                            tail_sup=math.inf, tail_inf=math.inf,
                            diverged=True, drift=math.inf,
                            notes={"empty": True})
    if window is None:
        window = max(1, m // 2)
    if window < 1 or window > m:
        raise ContractViolation(f"window must be in [1, {m}], got {window}")
    tail = vals[m - window:]
    prev = vals[max(0, m - 2 * window): m - window]
    drift = float(tail.mean() - prev.mean()) if len(prev) else 0.0
    return TailEstimate(
        indices=idx,
        values=vals,
        window=window,
        tail_sup=float(tail.max()),
        tail_inf=float(tail.min()),
        diverged=drift > drift_tol,
        drift=drift,
    )
