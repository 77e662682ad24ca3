"""Tests for truncated p-adic arithmetic."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from iset.errors import DomainError
from iset.padic import (
    PAdicInteger,
    PAdicNorm,
    PAdicRational,
    embed_rational,
    int_valuation,
    is_prime,
    padic_add,
    padic_distance,
    padic_mul,
    padic_norm,
    padic_sub,
)

PRIMES = [2, 3, 5, 257]


def random_value(rng, p, precision, allow_negative_valuation=True):
    lo = -6 if allow_negative_valuation else 0
    v = rng.randrange(lo, 10)
    u = rng.randrange(1, p**precision)
    while u % p == 0:
        u = rng.randrange(1, p**precision)
    return PAdicRational(p, v, PAdicInteger(p, precision, u))


class TestPrimality:
    def test_known(self):
        assert is_prime(2) and is_prime(3) and is_prime(257) and is_prime(65537)
        assert not is_prime(1) and not is_prime(0) and not is_prime(-7)
        assert not is_prime(1025) and not is_prime(561)  # 561 is a Carmichael number

    def test_composite_rejected(self):
        with pytest.raises(DomainError):
            embed_rational(1, 2, 4, 4)


class TestEmbed:
    def test_zero(self):
        x = embed_rational(0, 1, 3, 8)
        assert x.is_zero
        assert padic_norm(x).is_zero

    def test_one_third(self):
        x = embed_rational(1, 3, 3, 8)
        assert x.valuation == -1
        assert x.digits == (1, 0, 0, 0, 0, 0, 0, 0)

    def test_one_half_base_three(self):
        x = embed_rational(1, 2, 3, 4)
        assert x.valuation == 0
        assert x.digits == (2, 1, 1, 1)
        # independent check: the digit expansion times 2 is 1 mod 3^4
        value = sum(d * 3**k for k, d in enumerate(x.digits))
        assert 2 * value % 81 == 1

    def test_zero_denominator(self):
        with pytest.raises(DomainError):
            embed_rational(1, 0, 3, 4)

    def test_unreduced_input_accepted(self):
        assert embed_rational(2, 6, 3, 8) == embed_rational(1, 3, 3, 8)

    def test_negative(self):
        # -1 = ...222 base 3
        x = embed_rational(-1, 1, 3, 4)
        assert x.digits == (2, 2, 2, 2)


class TestNorm:
    def test_nine(self):
        assert padic_norm(embed_rational(9, 1, 3, 8)).value == Fraction(1, 9)

    def test_zero(self):
        n = padic_norm(PAdicRational.zero(3))
        assert n.is_zero and n.value == 0

    def test_non_integer_at_least_p(self):
        n = padic_norm(embed_rational(1, 3, 3, 8))
        assert n.value == 3
        assert n.exponent == -1

    def test_ordering(self):
        small = PAdicNorm(3, 5)
        big = PAdicNorm(3, -1)
        zero = PAdicNorm(3, None)
        assert zero < small < big


class TestAddMul:
    def test_identity(self):
        x = embed_rational(7, 4, 5, 6)
        assert padic_add(x, PAdicRational.zero(5)) == x
        assert padic_mul(x, embed_rational(1, 1, 5, 6)) == x

    def test_carry(self):
        x = embed_rational(1, 1, 5, 6)
        y = embed_rational(4, 1, 5, 6)
        s = padic_add(x, y)
        assert s.valuation == 1
        assert s.digits[0] == 1

    def test_thirds_sum_to_one(self):
        a = embed_rational(1, 3, 3, 8)
        b = embed_rational(2, 3, 3, 8)
        s = padic_add(a, b)
        assert s == embed_rational(1, 1, 3, s.precision)

    def test_three_times_third(self):
        x = embed_rational(3, 1, 3, 6)
        y = embed_rational(1, 3, 3, 6)
        assert padic_mul(x, y) == embed_rational(1, 1, 3, 6)

    def test_two_times_three(self):
        z = padic_mul(embed_rational(2, 1, 3, 6), embed_rational(3, 1, 3, 6))
        assert z.valuation == 1 and z.digits[0] == 2

    def test_mismatched_primes(self):
        with pytest.raises(DomainError):
            padic_add(embed_rational(1, 1, 3, 4), embed_rational(1, 1, 5, 4))
        with pytest.raises(DomainError):
            padic_distance(embed_rational(1, 1, 3, 4), embed_rational(1, 1, 5, 4))

    def test_cancellation_to_zero(self):
        x = embed_rational(7, 2, 3, 6)
        assert padic_sub(x, x).is_zero


class TestDistance:
    def test_self_distance_zero(self):
        x = embed_rational(22, 7, 3, 10)
        assert padic_distance(x, x).is_zero

    def test_one_and_four(self):
        d = padic_distance(embed_rational(1, 1, 3, 8), embed_rational(4, 1, 3, 8))
        assert d.value == Fraction(1, 3)

    def test_deep_agreement(self):
        d = padic_distance(
            embed_rational(1, 1, 3, 8), embed_rational(1 + 3**5, 1, 3, 8)
        )
        assert d.exponent == 5


class TestRationalOracle:
    """Cross-check against exact Fraction arithmetic via re-embedding."""

    @settings(max_examples=200, deadline=None)
    @given(
        a=st.integers(-50, 50),
        b=st.integers(1, 50),
        c=st.integers(-50, 50),
        d=st.integers(1, 50),
        p=st.sampled_from([2, 3, 5]),
    )
    def test_add_matches_fractions(self, a, b, c, d, p):
        q1, q2 = Fraction(a, b), Fraction(c, d)
        k = 12
        x = PAdicRational.from_fraction(q1, p, k)
        y = PAdicRational.from_fraction(q2, p, k)
        s = padic_add(x, y)
        expected = PAdicRational.from_fraction(q1 + q2, p, k)
        if expected.is_zero:
            assert s.is_zero
        else:
            assert s.valuation == expected.valuation
            n = min(s.precision, expected.precision)
            assert s.digits[:n] == expected.digits[:n]

    @settings(max_examples=200, deadline=None)
    @given(
        a=st.integers(-50, 50).filter(lambda n: n != 0),
        b=st.integers(1, 50),
        c=st.integers(-50, 50).filter(lambda n: n != 0),
        d=st.integers(1, 50),
        p=st.sampled_from([2, 3, 5]),
    )
    def test_mul_matches_fractions(self, a, b, c, d, p):
        q1, q2 = Fraction(a, b), Fraction(c, d)
        k = 12
        z = padic_mul(
            PAdicRational.from_fraction(q1, p, k), PAdicRational.from_fraction(q2, p, k)
        )
        expected = PAdicRational.from_fraction(q1 * q2, p, k)
        assert z.valuation == expected.valuation
        assert z.digits[: z.precision] == expected.digits[: z.precision]


class TestInvariants:
    @settings(max_examples=300, deadline=None)
    @given(data=st.data(), p=st.sampled_from(PRIMES))
    def test_ultrametric(self, data, p):
        rng = random.Random(data.draw(st.integers(0, 2**32)))
        x, y, z = (random_value(rng, p, 16) for _ in range(3))
        dxz = padic_distance(x, z)
        dxy = padic_distance(x, y)
        dyz = padic_distance(y, z)
        assert dxz.value <= max(dxy.value, dyz.value)
        if dxy.value != dyz.value:
            assert dxz.value == max(dxy.value, dyz.value)

    @settings(max_examples=300, deadline=None)
    @given(data=st.data(), p=st.sampled_from(PRIMES))
    def test_multiplicativity(self, data, p):
        rng = random.Random(data.draw(st.integers(0, 2**32)))
        x, y = (random_value(rng, p, 12) for _ in range(2))
        assert padic_norm(padic_mul(x, y)).exponent == (
            padic_norm(x).exponent + padic_norm(y).exponent
        )

    @settings(max_examples=200, deadline=None)
    @given(
        a=st.integers(-300, 300).filter(lambda n: n != 0),
        b=st.integers(1, 300),
        p=st.sampled_from([3, 5, 17]),
    )
    def test_integer_criterion(self, a, b, p):
        x = embed_rational(a, b, p, 8)
        q = Fraction(a, b)
        n = padic_norm(x)
        if q.denominator % p == 0:
            assert n.value >= p
            assert not x.is_integer()
        else:
            assert n.value <= 1
            assert x.is_integer()

    @settings(max_examples=200, deadline=None)
    @given(
        a=st.integers(-200, 200).filter(lambda n: n != 0),
        b=st.integers(1, 200),
        p=st.sampled_from([2, 3, 5]),
        k=st.integers(2, 10),
        extra=st.integers(1, 10),
    )
    def test_truncation_consistency(self, a, b, p, k, extra):
        coarse = embed_rational(a, b, p, k)
        fine = embed_rational(a, b, p, k + extra)
        assert coarse.valuation == fine.valuation
        assert fine.digits[:k] == coarse.digits


class TestDigits:
    def test_digit_range_enforced(self):
        with pytest.raises(DomainError):
            PAdicInteger.from_digits((0, 3), 3)

    def test_roundtrip(self):
        x = PAdicInteger.from_digits((2, 1, 0, 2), 3)
        assert x.digits == (2, 1, 0, 2)
        assert x.residue == 2 + 3 + 2 * 27

    def test_carry_canonical(self):
        x = PAdicInteger.from_int(5, 3, 4) + PAdicInteger.from_int(5, 3, 4)
        assert x.digits == (1, 0, 1, 0)  # 10 = 101 base 3

    def test_valuation_helper(self):
        assert int_valuation(729, 3) == 6
        with pytest.raises(DomainError):
            int_valuation(0, 3)
