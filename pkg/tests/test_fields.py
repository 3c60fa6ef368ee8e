from fractions import Fraction
from random import Random

import pytest
from hypothesis import given, settings, strategies as st

from dynext import Field, FieldMismatchError, ModP, UsageError, is_prime

QQ = Field.rationals()
BIG_P = 2147483647  # Mersenne prime, comfortably above 2^20
FP = Field.prime(BIG_P)
F7 = Field.prime(7, allow_small=True)


def test_rational_examples():
    assert Fraction(1, 2) + Fraction(1, 3) == Fraction(5, 6)
    half = QQ.fraction(2, 4)
    assert half.numerator == 1 and half.denominator == 2


def test_prime_field_inverse():
    assert F7.inv(F7.of(3)) == F7.of(5)
    assert F7.of(3) * F7.of(5) == F7.one()


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        QQ.inv(QQ.zero())
    with pytest.raises(ZeroDivisionError):
        FP.inv(FP.zero())
    with pytest.raises(ZeroDivisionError):
        FP.of(3) / FP.zero()


def test_mixed_field_operands_rejected():
    with pytest.raises(FieldMismatchError):
        ModP(1, 7) + ModP(1, 11)
    with pytest.raises(FieldMismatchError):
        FP.of(ModP(1, 7))
    with pytest.raises(FieldMismatchError):
        QQ.of(ModP(1, 7))


def test_primality():
    assert is_prime(2) and is_prime(1000003) and is_prime(BIG_P)
    assert not is_prime(1) and not is_prime(0) and not is_prime(-7)
    assert not is_prime(1000001)  # 101 * 9901
    with pytest.raises(UsageError):
        Field.prime(1000001, allow_small=True)


def test_prime_size_floor():
    with pytest.raises(UsageError):
        Field.prime(1000003)
    assert Field.prime(1000003, allow_small=True).characteristic == 1000003


def test_random_scalar_determinism():
    a = [QQ.random_scalar(10, Random(42)) for _ in range(1)]
    seq1 = [QQ.random_scalar(10, rng) for rng in [Random(42)]][0]
    rng1, rng2 = Random(7), Random(7)
    s1 = [QQ.random_scalar(10, rng1) for _ in range(50)]
    s2 = [QQ.random_scalar(10, rng2) for _ in range(50)]
    assert s1 == s2
    p1 = [FP.random_scalar(10, Random(7)) for _ in range(5)]
    p2 = [FP.random_scalar(10, Random(7)) for _ in range(5)]
    assert p1 == p2


def test_random_scalar_bound_one():
    rng = Random(3)
    vals = {QQ.random_scalar(1, rng) for _ in range(200)}
    assert vals <= {Fraction(-1), Fraction(0), Fraction(1)}
    assert len(vals) == 3


def test_random_scalar_spread():
    rng = Random(0)
    vals = {QQ.random_scalar(10, rng) for _ in range(10_000)}
    assert len(vals) >= 15  # 21 possible values; near-uniform sampling


scalars_q = st.fractions(max_numerator=10**6, max_denominator=10**4)
scalars_p = st.integers(min_value=0, max_value=BIG_P - 1).map(lambda v: ModP(v, BIG_P))


@settings(max_examples=60, deadline=None, derandomize=True)
@given(a=scalars_q, b=scalars_q, c=scalars_q)
def test_field_axioms_rationals(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + (-a) == 0
    if a:
        assert a * QQ.inv(a) == 1


@settings(max_examples=60, deadline=None, derandomize=True)
@given(a=scalars_p, b=scalars_p, c=scalars_p)
def test_field_axioms_prime(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a - a) == ModP(0, BIG_P)
    if a:
        assert a * a.inverse() == ModP(1, BIG_P)


def test_scalar_canonical_forms():
    # rationals: reduced, positive denominator (Fraction guarantees both)
    x = Fraction(-4, -6)
    assert (x.numerator, x.denominator) == (2, 3)
    # residues: canonical range
    assert ModP(-1, 7).value == 6
    assert ModP(15, 7).value == 1
