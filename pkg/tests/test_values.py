import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from banakh.values import (SurdValue, ZERO, rat, format_rat, is_prime,
                           primes_from, rational_between, sqrt_brackets)


SMALL_PRIMES = [2, 3, 5, 7, 11, 13]

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=16)
coeff_maps = st.dictionaries(st.sampled_from(SMALL_PRIMES), rationals,
                             max_size=3)


def surds():
    return st.builds(SurdValue, rationals, coeff_maps)


def as_float(v: SurdValue) -> float:
    return float(v.rational_part) + sum(
        float(c) * math.sqrt(p) for p, c in v.surd_coeffs.items())


# -- construction and normal form -------------------------------------------


def test_zero_coefficients_are_dropped():
    v = SurdValue(3, {2: 0, 3: Fraction(1, 2)})
    assert v.primes() == {3}
    assert v.coefficient(2) == 0


def test_nonprime_index_rejected():
    with pytest.raises(ValueError):
        SurdValue(0, {4: 1})
    with pytest.raises(ValueError):
        SurdValue(0, {1: 1})


def test_rational_only_helpers():
    v = SurdValue(Fraction(7, 3))
    assert v.is_rational() and v.as_rational() == Fraction(7, 3)
    w = SurdValue.sqrt(2)
    assert not w.is_rational()
    with pytest.raises(ValueError):
        w.as_rational()
    assert ZERO.is_zero() and not w.is_zero()


def test_rat_rejects_floats():
    # floats would silently smuggle binary rounding into exact arithmetic
    with pytest.raises(TypeError):
        rat(0.5)
    assert rat("7/2") == Fraction(7, 2)


def test_format_rat():
    assert format_rat(Fraction(4, 2)) == "2"
    assert format_rat(Fraction(-3, 7)) == "-3/7"


# -- arithmetic --------------------------------------------------------------


@given(surds(), surds())
def test_addition_matches_componentwise(a, b):
    s = a + b
    assert s.rational_part == a.rational_part + b.rational_part
    for p in a.primes() | b.primes():
        assert s.coefficient(p) == a.coefficient(p) + b.coefficient(p)
    # normal form: no stored zero coefficient
    assert all(c != 0 for c in s.surd_coeffs.values())


@given(surds(), surds())
def test_subtraction_is_inverse_of_addition(a, b):
    assert (a + b) - b == a
    assert a - a == ZERO


@given(surds(), rationals)
def test_scalar_multiplication(a, q):
    prod = a * q
    assert prod.rational_part == a.rational_part * q
    if q != 0:
        assert prod.primes() == a.primes()
    else:
        assert prod.is_zero()
    assert q * a == prod


def test_product_of_irrationals_rejected():
    with pytest.raises(TypeError):
        SurdValue.sqrt(2) * SurdValue.sqrt(3)
    # rational SurdValue factors are fine either side
    assert SurdValue.sqrt(2) * SurdValue(3) == SurdValue(0, {2: 3})
    assert SurdValue(3) * SurdValue.sqrt(2) == SurdValue(0, {2: 3})


@given(surds())
def test_reflected_ops(a):
    assert 1 + a == a + 1
    assert 5 - a == SurdValue(5) - a
    assert -a == ZERO - a


# -- ordering and sign -------------------------------------------------------


def test_sign_on_rationals():
    assert SurdValue(Fraction(1, 1000)).sign() == 1
    assert SurdValue(0).sign() == 0
    assert SurdValue(-3).sign() == -1


def test_sign_on_classic_surd_identities():
    # sqrt(2) + sqrt(3) > sqrt(5):  3.146... vs 2.236...
    assert SurdValue(0, {2: 1, 3: 1, 5: -1}).sign() == 1
    # 7 - 5*sqrt(2) < 0 by a whisker (5*sqrt(2) = 7.071...)
    assert SurdValue(7, {2: -5}).sign() == -1
    # 99/70 is a convergent of sqrt(2) from above
    assert (SurdValue(Fraction(99, 70)) - SurdValue.sqrt(2)).sign() == 1
    assert (SurdValue(Fraction(140, 99)) - SurdValue.sqrt(2)).sign() == -1


@given(surds(), surds())
@settings(max_examples=300)
def test_trichotomy(a, b):
    lt, eq, gt = a < b, a == b, a > b
    assert [lt, eq, gt].count(True) == 1
    assert eq == ((b - a).sign() == 0)
    assert lt == ((b - a).sign() == 1)


@given(surds(), surds())
def test_order_agrees_with_float_when_separated(a, b):
    fa, fb = as_float(a), as_float(b)
    if abs(fa - fb) > 1e-6:
        assert (a < b) == (fa < fb)


@given(surds())
def test_equality_is_structural_and_hash_consistent(a):
    twin = SurdValue(a.rational_part, dict(a.surd_coeffs))
    assert a == twin and hash(a) == hash(twin)


# -- certified bounds --------------------------------------------------------


@given(st.sampled_from(SMALL_PRIMES), st.integers(min_value=4, max_value=60))
def test_sqrt_brackets_certify(p, scale):
    lo, hi = sqrt_brackets(p, scale)
    assert lo * lo <= p < hi * hi
    assert hi - lo == Fraction(1, 2 ** scale)


@given(surds(), st.integers(min_value=8, max_value=40))
def test_value_brackets_contain_float(a, scale):
    lo, hi = a.brackets(scale)
    assert lo <= hi
    f = as_float(a)
    assert float(lo) - 1e-6 <= f <= float(hi) + 1e-6


def test_brackets_reproducible_after_comparisons():
    # comparisons may refine internal caches; public brackets must not move
    a = SurdValue(1, {2: Fraction(1, 3), 5: Fraction(-1, 7)})
    first = a.brackets(16)
    _ = a < SurdValue(1)
    _ = a.sign()
    assert a.brackets(16) == first


def test_sign_of_tiny_surd_difference():
    # sqrt(2) - 665857/470832 is about -1.6e-12; interval refinement must
    # still land the exact sign
    v = SurdValue(Fraction(-665857, 470832), {2: 1})
    assert v.sign() == -1
    assert (-v).sign() == 1


# -- rational proportionality -----------------------------------------------


def test_ratio_to_cases():
    r2 = SurdValue.sqrt(2)
    assert (3 * r2).ratio_to(r2) == 3
    assert r2.ratio_to(3 * r2) == Fraction(1, 3)
    assert SurdValue(6).ratio_to(SurdValue(4)) == Fraction(3, 2)
    assert r2.ratio_to(SurdValue.sqrt(3)) is None
    assert (r2 + 1).ratio_to(r2) is None
    assert ZERO.ratio_to(ZERO) == 1
    assert ZERO.ratio_to(r2) == 0
    assert r2.ratio_to(ZERO) is None


@given(surds(), st.fractions(min_value=Fraction(1, 9),
                             max_value=9, max_denominator=9))
def test_ratio_roundtrip(a, q):
    if a.is_zero():
        return
    assert (a * q).ratio_to(a) == q


# -- helpers -----------------------------------------------------------------


def test_rational_between_lands_strictly_inside():
    lo = SurdValue.sqrt(2)
    hi = SurdValue(Fraction(3, 2))
    mid = rational_between(lo, hi)
    assert (SurdValue(mid) - lo).sign() == 1
    assert (hi - SurdValue(mid)).sign() == 1


def test_primes_from_skips_composites():
    gen = primes_from(90)
    assert [next(gen) for _ in range(3)] == [97, 101, 103]
    assert is_prime(2) and not is_prime(1) and not is_prime(91)
