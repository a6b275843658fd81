"""Acceptance gate: one check per shipped guarantee, one printed line each.

Every test prints `criterion NN: PASS/FAIL - detail` before asserting, so the
scoreboard survives in the report whatever the outcome.  Criterion 6 is
expected red at this depth: the xi quotient converges like 1/log N, so the
N = 10**4 readings for the two slowest scale families sit outside the stated
tolerances.  The test states the requirement faithfully and fails honestly;
the tracking notes carry the convergence analysis.
"""

import itertools
import math
import random
import time
from fractions import Fraction
from math import isqrt

import numpy as np

from cflab.cfcore import (ExplicitSeq, PowerFloorSeq, ScaledSeq, convergents,
                          check_convergent_invariants, cylinder, evaluate,
                          expand)
from cflab.covers import (c_family, ck_count_bound, ck_count_bound_direct,
                          count_family, count_monotone, falconer_lower_bound,
                          gap_epsilon_block, stirling_bounds)
from cflab.ergodic import ergodic_run
from cflab.exponent import construct_tau, tau_monotone_estimate
from cflab.spectra import (dim_e, dim_f, dim_from_b, dim_from_xi,
                           dim_level_full, dim_level_lambda, b_growth,
                           b_hirst, intersection_trichotomy, phi_exponential,
                           phi_power, phi_stretched, phi_tower, t_sequence,
                           xi_limit)


def line(num: int, ok: bool, detail: str) -> bool:
    print(f"criterion {num:02d}: {'PASS' if ok else 'FAIL'} - {detail}")
    return ok


def test_criterion_01_exact_arithmetic_suite():
    t0 = time.perf_counter()
    rng = random.Random(101)
    for _ in range(1000):
        n = rng.randrange(1, 31)
        prefix = [rng.randrange(1, 11) for _ in range(n)]
        cs = check_convergent_invariants(ExplicitSeq(prefix), n)
        c = cylinder(prefix)
        q, qp = cs[-1].q, cs[-2].q if n > 1 else 1
        assert c.length == c.hi - c.lo == Fraction(1, q * (q + qp))
    dt = time.perf_counter() - t0
    ok = dt < 5.0
    assert line(1, ok, f"determinant/gcd/growth/length on 1000 prefixes ({dt:.2f}s)")


def test_criterion_02_round_trip():
    t0 = time.perf_counter()
    rng = random.Random(202)
    for _ in range(10**4):
        q = rng.randrange(2, 10**6 + 1)
        p = rng.randrange(1, q)
        x = Fraction(p, q)
        assert evaluate(expand(x).entries) == x
    dt = time.perf_counter() - t0
    ok = dt < 5.0
    assert line(2, ok, f"expand/evaluate identity on 10^4 rationals ({dt:.2f}s)")


def test_criterion_03_counting_oracle():
    for n in range(1, 9):
        for L in range(1, 9):
            brute = sum(1 for _ in itertools.combinations_with_replacement(range(L), n))
            assert count_monotone(n, L) == brute
    for n in range(2, 21):
        for L in range(2, 21):
            assert count_monotone(n, L) == count_monotone(n, L - 1) + count_monotone(n - 1, L)
    assert line(3, True, "stars-and-bars count matches brute force and the Pascal recurrence")


def test_criterion_04_stirling_sandwich():
    n_max = 10**4
    ref = np.cumsum(np.log(np.arange(1, n_max + 1, dtype=float)))
    ok = True
    for n in range(1, n_max + 1):
        lo, hi = stirling_bounds(n)
        if not (lo - 1e-12 <= ref[n - 1] <= hi + 1e-12):
            ok = False
            break
    assert line(4, ok, f"log-domain factorial sandwich holds for n = 1..{n_max}")


def test_criterion_05_tau_estimator_convergence():
    results = []
    for alpha in (0.5, 1.0, 2.0):
        est = tau_monotone_estimate(construct_tau(Fraction(alpha)), 10**6)
        results.append((alpha, est.tail_sup, abs(est.tail_sup - alpha) <= 0.1))
    est0 = tau_monotone_estimate(construct_tau(0), 10**4)
    results.append((0.0, est0.tail_sup, est0.tail_sup <= 0.01))
    ok = all(r[2] for r in results)
    detail = ", ".join(f"alpha={a:g}: {v:.4f}" for a, v, _ in results)
    assert line(5, ok, detail)


def test_criterion_06_xi_limit():
    # s_n = 3 floor(n**(alpha-1)): xi -> 2/(alpha-1), dimension (alpha-1)/(2 alpha).
    # Convergence is logarithmic; see the module docstring for why this is red.
    parts = []
    ok = True
    for alpha, inv in ((2, Fraction(1)), (3, Fraction(1, 2)), (5, Fraction(1, 4))):
        s = ScaledSeq(PowerFloorSeq(inv), 3)
        est = xi_limit(s, 10**4)
        want_xi = 2.0 / (alpha - 1)
        want_dim = (alpha - 1) / (2.0 * alpha)
        got_dim = dim_from_xi(est.tail_sup)
        ok_xi = abs(est.tail_sup - want_xi) <= 0.05
        ok_dim = abs(got_dim - want_dim) <= 0.01
        ok = ok and ok_xi and ok_dim
        parts.append(f"alpha={alpha}: xi {est.tail_sup:.5f}/{want_xi:g}"
                     f"{'' if ok_xi else '(off)'} dim {got_dim:.5f}/{want_dim:g}"
                     f"{'' if ok_dim else '(off)'}")
    assert line(6, ok, "; ".join(parts))


def test_criterion_07_cross_route_agreement():
    n = 10**3
    ok = True
    diffs = []
    for alpha, inv in ((2, Fraction(1)), (3, Fraction(1, 2)), (5, Fraction(1, 4))):
        s = ScaledSeq(PowerFloorSeq(inv), 3)
        m = [s.a(k) - 1 for k in range(1, n + 2)]
        fal = falconer_lower_bound(m, gap_epsilon_block(s, n + 1)).tail_inf
        via_xi = dim_from_xi(xi_limit(s, n).tail_sup)
        diffs.append((alpha, abs(fal - via_xi)))
        ok = ok and abs(fal - via_xi) <= 0.02
    detail = ", ".join(f"alpha={a}: |diff| {d:.5f}" for a, d in diffs)
    assert line(7, ok, detail)


def test_criterion_08_b_limits():
    d1 = dim_from_b(b_growth(phi_exponential(2, 3), 10**3).tail_sup)
    d2 = dim_from_b(b_growth(phi_power(1, 2), 10**3).tail_sup)
    d3 = dim_from_b(b_hirst(phi_tower(2, 3), 10**3).tail_sup)
    ok = (abs(d1 - 0.25) <= 1e-3 and abs(d2 - 0.5) <= 1e-2 and abs(d3 - 0.25) <= 1e-3)
    assert line(8, ok, f"2*3^n: {d1:.5f}, n^2: {d2:.5f}, 2^(3^n) via loglog: {d3:.5f}")


def test_criterion_09_t_sequence_suite():
    ok = True
    lims = []
    for spec in (phi_power(1, 2), phi_exponential(2, 3), phi_stretched(2, 0.5)):
        ts = t_sequence(spec, eps=0.1, n_max=10**3)
        ok = ok and ts.first_monotonicity_violation() is None
        ok = ok and ts.first_growth_violation() is None
        lim = ts.liminf_ratio.tail_inf
        lims.append(f"{spec.label}: {lim:.4f}")
        ok = ok and 1.0 <= lim <= 1.01
    assert line(9, ok, "; ".join(lims))


def test_criterion_10_count_bounds():
    ok = True
    for k in range(1, 7):
        for alpha in (1, 2):
            cnt = count_family(c_family(alpha, Fraction(1, 2), k), k)
            direct = ck_count_bound_direct(k, alpha, 0.5)
            stirling_form = ck_count_bound(k, alpha, 0.5)
            ok = ok and math.log(cnt) <= direct <= stirling_form
    assert line(10, ok, "enumerated chained counts below both analytic ceilings (k <= 6)")


def test_criterion_11_ergodic_sandwich():
    t0 = time.perf_counter()
    ok = True
    parts = []
    for t in (0.5, 1.0, 2.0):
        run = ergodic_run(t, sample_count=10**4, orbit_length=10**3, seed=424242)
        lo = run.p_lower - 3 * run.std_error
        hi = run.p_upper + 3 * run.std_error
        inside = lo <= run.grand_mean <= hi
        ok = ok and inside
        parts.append(f"t={t:g}: mean {run.grand_mean:.5f} in [{lo:.5f}, {hi:.5f}]")
    again = ergodic_run(1.0, sample_count=10**4, orbit_length=10**3, seed=424242)
    rerun = ergodic_run(1.0, sample_count=10**4, orbit_length=10**3, seed=424242)
    ok = ok and again.averages == rerun.averages
    dt = time.perf_counter() - t0
    ok = ok and dt < 60.0
    assert line(11, ok, "; ".join(parts) + f"; deterministic rerun ({dt:.1f}s)")


def test_criterion_12_spectrum_formulas():
    grid = [Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3), math.inf]
    want_full = [Fraction(1, 2)] * 4 + [Fraction(1)]
    want_lam = [Fraction(1, 2), Fraction(1, 4), Fraction(0), Fraction(0), Fraction(0)]
    want_e = [Fraction(0), Fraction(0), Fraction(0), Fraction(1, 3), Fraction(1, 2)]
    want_f = [Fraction(1)] + [Fraction(1, 2)] * 4
    ok = True
    for a, wf, wl, we, wff in zip(grid, want_full, want_lam, want_e, want_f):
        ok = ok and dim_level_full(a).dim == wf
        ok = ok and dim_level_lambda(a).dim == wl
        ok = ok and dim_e(a).dim == we
        ok = ok and dim_f(a).dim == wff
    labels = []
    for k in range(50):
        alpha = Fraction(k, 10)
        rel = intersection_trichotomy(alpha)["relation"]
        want = "<" if k == 0 else ("=" if k <= 10 else ">")
        labels.append(rel == want)
    ok = ok and all(labels)
    assert line(12, ok, "boundary values exact for all four spectra; 50 trichotomy labels match")
