import math
import random
from fractions import Fraction

import pytest

from cflab.cfcore import (ConstantOneSeq, ExpFloorSeq, ExplicitSeq,
                          PerturbedSeq, PowerFloorSeq, ScaledSeq, SplicedSeq,
                          ceil_rational_power, check_convergent_invariants,
                          convergents, cylinder, evaluate, expand, fibonacci,
                          floor_exp, floor_rational_power, gauss_map,
                          golden_lower_bound_holds)
from cflab.errors import ContractViolation, MaterializationLimit


def test_expand_examples():
    assert expand(Fraction(0)).entries == []
    assert expand(Fraction(1, 2)).entries == [2]
    assert expand(Fraction(3, 7)).entries == [2, 3]
    # 1/(2+1/3) = 3/7
    assert Fraction(1, 2 + Fraction(1, 3)) == Fraction(3, 7)


def test_expand_domain():
    with pytest.raises(ContractViolation):
        expand(Fraction(3, 2))
    with pytest.raises(ContractViolation):
        expand(Fraction(-1, 2))


def test_expand_canonical_last_quotient():
    random.seed(5)
    for _ in range(300):
        q = random.randrange(2, 10**6)
        p = random.randrange(1, q)
        digits = expand(Fraction(p, q)).entries
        if digits:
            assert digits[-1] >= 2


def test_expand_max_terms():
    with pytest.raises(ContractViolation):
        expand(Fraction(3, 7), max_terms=1)


def test_round_trip_small():
    random.seed(11)
    for _ in range(2000):
        q = random.randrange(1, 10**6)
        p = random.randrange(0, q)
        x = Fraction(p, q)
        assert evaluate(expand(x).entries) == x


def test_convergents_examples():
    convs = convergents(ExplicitSeq([1, 1, 1, 1, 1]), 5)
    assert [c.q for c in convs] == [1, 2, 3, 5, 8]
    one = convergents(ExplicitSeq([2]), 1)[0]
    assert (one.p, one.q) == (1, 2)
    prefix = ExplicitSeq([(i * 7) % 9 + 1 for i in range(30)])
    c = convergents(prefix, 30)
    assert c[-1].p * c[-2].q - c[-2].p * c[-1].q == -1


def test_convergent_invariants_random_prefixes():
    random.seed(3)
    for _ in range(300):
        n = random.randrange(1, 31)
        seq = ExplicitSeq([random.randrange(1, 11) for _ in range(n)])
        check_convergent_invariants(seq, n)


def test_cylinder_examples():
    c = cylinder([1])
    assert (c.lo, c.hi, c.length) == (Fraction(1, 2), Fraction(1), Fraction(1, 2))
    c = cylinder([2])
    assert (c.lo, c.hi, c.length) == (Fraction(1, 3), Fraction(1, 2), Fraction(1, 6))
    c = cylinder([1, 1])
    assert (c.lo, c.hi, c.length) == (Fraction(1, 2), Fraction(2, 3), Fraction(1, 6))


def test_cylinder_empty_prefix_rejected():
    with pytest.raises(ContractViolation):
        cylinder([])


def test_cylinder_length_is_endpoint_difference():
    random.seed(17)
    for _ in range(200):
        n = random.randrange(1, 31)
        prefix = [random.randrange(1, 11) for _ in range(n)]
        c = cylinder(prefix)
        convs = convergents(ExplicitSeq(prefix), n)
        q, qp = convs[-1].q, convs[-2].q if n > 1 else 1
        assert c.length == c.hi - c.lo == Fraction(1, q * (q + qp))


def test_gauss_map_examples():
    assert gauss_map(Fraction(1, 2)) == 0
    assert gauss_map(Fraction(2, 5)) == Fraction(1, 2)
    y = gauss_map(Fraction(3, 7))
    assert y == Fraction(1, 3)
    assert expand(y).entries == [3]


def test_gauss_map_shift_property():
    random.seed(23)
    for _ in range(100):
        q = random.randrange(3, 10**5)
        p = random.randrange(1, q)
        x = Fraction(p, q)
        digits = expand(x).entries
        k = random.randrange(0, len(digits))
        y = x
        for _ in range(k):
            y = gauss_map(y)
        assert expand(y).entries == digits[k:]


def test_gauss_map_domain():
    with pytest.raises(ContractViolation):
        gauss_map(Fraction(0))


def test_fibonacci_and_golden_bound():
    assert [fibonacci(k) for k in range(1, 8)] == [1, 1, 2, 3, 5, 8, 13]
    ones = ExplicitSeq([1] * 200)
    convs = convergents(ones, 200)
    for c in convs:
        assert c.q == fibonacci(c.n + 1)
        assert golden_lower_bound_holds(c.n, c.q)
    # the bound is not vacuous: it fails for a too-small q
    assert not golden_lower_bound_holds(30, 100)


def test_floor_sequences():
    assert [ExpFloorSeq().a(n) for n in range(1, 6)] == [2, 7, 20, 54, 148]
    half = PowerFloorSeq(Fraction(1, 2))  # floor(n^2)
    assert [half.a(n) for n in range(1, 5)] == [1, 4, 9, 16]
    two = PowerFloorSeq(Fraction(2))  # floor(sqrt(n))
    assert [two.a(n) for n in range(1, 10)] == [1, 1, 1, 2, 2, 2, 2, 2, 3]
    assert ConstantOneSeq().a(10**9) == 1


def test_floor_rational_power_exact():
    assert floor_rational_power(8, Fraction(1, 3)) == 2
    assert floor_rational_power(7, Fraction(1, 3)) == 1
    assert ceil_rational_power(8, Fraction(1, 3)) == 2
    assert ceil_rational_power(9, Fraction(1, 3)) == 3
    assert ceil_rational_power(2, Fraction(3, 2)) == 3  # 2^1.5 = 2.828...
    # large exact check: floor(10^30 ** (2/3)) = 10^20
    assert floor_rational_power(10**30, Fraction(2, 3)) == 10**20


def test_floor_exp_matches_logs():
    for n in range(1, 40):
        v = floor_exp(n)
        assert math.log(v) <= n + 1e-12 and math.log(v + 1) > n - 1e-9


def test_materialization_cap():
    seq = ExpFloorSeq(bit_cap=64)
    with pytest.raises(MaterializationLimit):
        seq.a(100)
    # log accessor keeps working far beyond the cap
    assert seq.log_a(10**6) == 10**6


def test_log_a_floor_discrepancy_bound():
    half = PowerFloorSeq(Fraction(1, 2))
    exp = ExpFloorSeq()
    for n in range(2, 60):
        for seq in (half, exp):
            a = seq.a(n)
            assert abs(seq.log_a(n) - math.log(a)) <= 1.0 / a + 1e-12


def test_explicit_rejects_bad_entries():
    with pytest.raises(ContractViolation):
        ExplicitSeq([1, 0, 2])


def test_scaled_seq():
    s = ScaledSeq(PowerFloorSeq(Fraction(1, 2)), 3)
    assert [s.a(n) for n in range(1, 5)] == [3, 12, 27, 48]
    assert abs(s.log_a(4) - math.log(48)) <= 1.0 / 16 + 1e-12
    with pytest.raises(ContractViolation):
        ScaledSeq(PowerFloorSeq(Fraction(1, 2)), 0)


def test_spliced_and_perturbed_entries():
    sp = SplicedSeq(ExplicitSeq([9, 9]), 2, ExpFloorSeq())
    assert [sp.a(n) for n in range(1, 5)] == [9, 9, 20, 54]
    pe = PerturbedSeq(ExplicitSeq([1, 2, 3, 4]), [1, 0, 1])
    assert [pe.a(n) for n in range(1, 5)] == [2, 2, 4, 4]
    with pytest.raises(ContractViolation):
        PerturbedSeq(ExplicitSeq([1, 2]), [2])
