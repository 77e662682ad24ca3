"""Exact truncated p-adic arithmetic.

Numbers are represented by a prime ``p``, an explicit precision ``K``
(number of retained base-p digits), and exact integer data. Nothing in
this module is ever stored as a float: norms are exact powers of p,
digits are exact integers, and all operations are pure functions on
immutable values, so everything here is safe to share across threads.

A nonzero p-adic rational is ``p**v * u`` where ``v`` is the valuation
and ``u`` is a unit (first digit nonzero) known modulo ``p**K``. The
value zero is a distinguished state with no valuation. Truncation is
explicit: results computed at a higher precision agree with lower
precision results on the retained digits.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd

from .errors import DomainError

__all__ = [
    "PAdicInteger",
    "PAdicRational",
    "PAdicNorm",
    "is_prime",
    "check_prime",
    "int_valuation",
    "embed_rational",
    "padic_norm",
    "padic_add",
    "padic_sub",
    "padic_mul",
    "padic_distance",
]

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test, memoized.

    Exact for all n < 3.3e24 (covers every prime this package meets).

    >>> is_prime(257), is_prime(1025)
    (True, False)
    """
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_prime(p: int) -> None:
    """Raise DomainError unless p is prime."""
    if not is_prime(p):
        raise DomainError(f"p must be prime, got {p}")


def int_valuation(n: int, p: int) -> int:
    """Exponent of p in a nonzero integer n.

    >>> int_valuation(729, 3)
    6
    """
    if n == 0:
        raise DomainError("valuation of zero is undefined")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class PAdicInteger:
    """A p-adic integer truncated to ``precision`` digits.

    Stored canonically as the residue modulo ``prime**precision``;
    digits are derived on demand and are therefore always fully
    carry-propagated, least significant first.
    """

    prime: int
    precision: int
    residue: int

    def __post_init__(self):
        check_prime(self.prime)
        if self.precision < 1:
            raise DomainError(f"precision must be >= 1, got {self.precision}")
        object.__setattr__(self, "residue", self.residue % self.modulus)

    @property
    def modulus(self) -> int:
        return self.prime**self.precision

    @classmethod
    def from_int(cls, n: int, p: int, precision: int) -> "PAdicInteger":
        return cls(p, precision, n)

    @classmethod
    def from_digits(cls, digits, p: int) -> "PAdicInteger":
        digits = tuple(digits)
        if not digits:
            raise DomainError("at least one digit required")
        for d in digits:
            if not 0 <= d < p:
                raise DomainError(f"digit {d} out of range [0, {p})")
        residue = 0
        for d in reversed(digits):
            residue = residue * p + d
        return cls(p, len(digits), residue)

    @cached_property
    def digits(self) -> tuple[int, ...]:
        """Digits a_0..a_{K-1}, least significant first, each in [0, p)."""
        out = []
        r = self.residue
        for _ in range(self.precision):
            r, d = divmod(r, self.prime)
            out.append(d)
        return tuple(out)

    def is_zero(self) -> bool:
        """True when the value is 0 modulo p**precision."""
        return self.residue == 0

    def valuation(self) -> int | None:
        """p-exponent of the residue, or None when zero at this window."""
        if self.residue == 0:
            return None
        return int_valuation(self.residue, self.prime)

    def as_rational(self) -> "PAdicRational":
        """Split p**v * unit; precision of the unit shrinks by v."""
        if self.residue == 0:
            return PAdicRational.zero(self.prime)
        v = int_valuation(self.residue, self.prime)
        unit = PAdicInteger(self.prime, self.precision - v, self.residue // self.prime**v)
        return PAdicRational(self.prime, v, unit)

    def _check_same(self, other: "PAdicInteger") -> None:
        if self.prime != other.prime:
            raise DomainError(f"mismatched primes: {self.prime} vs {other.prime}")

    def __add__(self, other: "PAdicInteger") -> "PAdicInteger":
        self._check_same(other)
        k = min(self.precision, other.precision)
        return PAdicInteger(self.prime, k, self.residue + other.residue)

    def __sub__(self, other: "PAdicInteger") -> "PAdicInteger":
        self._check_same(other)
        k = min(self.precision, other.precision)
        return PAdicInteger(self.prime, k, self.residue - other.residue)

    def __mul__(self, other: "PAdicInteger") -> "PAdicInteger":
        self._check_same(other)
        k = min(self.precision, other.precision)
        return PAdicInteger(self.prime, k, self.residue * other.residue)

    def __neg__(self) -> "PAdicInteger":
        return PAdicInteger(self.prime, self.precision, -self.residue)

    def __repr__(self) -> str:
        return f"PAdicInteger(p={self.prime}, digits={self.digits})"


@dataclass(frozen=True)
class PAdicNorm:
    """An exact p-adic norm: zero, or p**(-exponent).

    Never stored as an inexact real. ``exponent is None`` encodes the
    zero norm. Comparisons go through exact Fractions so norms of
    different primes still order correctly.
    """

    prime: int
    exponent: int | None

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    @property
    def value(self) -> Fraction:
        if self.exponent is None:
            return Fraction(0)
        e = self.exponent
        return Fraction(1, self.prime**e) if e >= 0 else Fraction(self.prime ** (-e))

    def __float__(self) -> float:
        return float(self.value)

    def __lt__(self, other: "PAdicNorm") -> bool:
        return self.value < other.value

    def __le__(self, other: "PAdicNorm") -> bool:
        return self.value <= other.value

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class PAdicRational:
    """p**valuation times a unit, or the distinguished zero.

    Zero carries no valuation and no unit (both are None). A negative
    valuation means the value is not a p-adic integer.
    """

    prime: int
    valuation: int | None
    unit: PAdicInteger | None

    def __post_init__(self):
        check_prime(self.prime)
        if (self.valuation is None) != (self.unit is None):
            raise DomainError("zero must have neither valuation nor unit")
        if self.unit is not None:
            if self.unit.prime != self.prime:
                raise DomainError("unit prime does not match")
            if self.unit.residue % self.prime == 0:
                raise DomainError("unit must have nonzero first digit")

    @classmethod
    def zero(cls, p: int) -> "PAdicRational":
        return cls(p, None, None)

    @classmethod
    def from_int(cls, n: int, p: int, precision: int) -> "PAdicRational":
        return embed_rational(n, 1, p, precision)

    @classmethod
    def from_fraction(cls, q: Fraction, p: int, precision: int) -> "PAdicRational":
        return embed_rational(q.numerator, q.denominator, p, precision)

    @property
    def is_zero(self) -> bool:
        return self.valuation is None

    @property
    def precision(self) -> int | None:
        """Number of retained unit digits (None for zero)."""
        return None if self.unit is None else self.unit.precision

    @property
    def digits(self) -> tuple[int, ...]:
        return () if self.unit is None else self.unit.digits

    def is_integer(self) -> bool:
        """True when the value lies in the p-adic integers (norm <= 1)."""
        return self.is_zero or self.valuation >= 0

    def __add__(self, other):
        return padic_add(self, other)

    def __sub__(self, other):
        return padic_sub(self, other)

    def __mul__(self, other):
        return padic_mul(self, other)

    def __neg__(self) -> "PAdicRational":
        if self.is_zero:
            return self
        return PAdicRational(self.prime, self.valuation, -self.unit)

    def __repr__(self) -> str:
        if self.is_zero:
            return f"PAdicRational(p={self.prime}, 0)"
        return f"PAdicRational(p={self.prime}, v={self.valuation}, digits={self.digits})"


def embed_rational(numerator: int, denominator: int, p: int, precision: int) -> PAdicRational:
    """Embed a/b into the p-adic rationals, truncated to ``precision`` unit digits.

    The valuation is v_p(a) - v_p(b); the unit is recovered with a
    modular inverse, so the result is exact modulo p**precision.

    >>> x = embed_rational(1, 2, 3, 4)   # 1/2 = ...1112 base 3
    >>> x.valuation, x.digits
    (0, (2, 1, 1, 1))
    """
    check_prime(p)
    if denominator == 0:
        raise DomainError("zero denominator")
    if precision < 1:
        raise DomainError(f"precision must be >= 1, got {precision}")
    if numerator == 0:
        return PAdicRational.zero(p)
    g = gcd(numerator, denominator)
    a, b = numerator // g, denominator // g
    if b < 0:
        a, b = -a, -b
    va = int_valuation(a, p)
    vb = int_valuation(b, p)
    a_unit = a // p**va
    b_unit = b // p**vb
    modulus = p**precision
    residue = a_unit * pow(b_unit, -1, modulus) % modulus
    return PAdicRational(p, va - vb, PAdicInteger(p, precision, residue))


def padic_norm(x: PAdicRational) -> PAdicNorm:
    """|x|_p = p**(-valuation); exactly zero for the zero value.

    A rational that is not a p-adic integer has negative valuation and
    hence norm >= p.
    """
    return PAdicNorm(x.prime, x.valuation)


def _check_pair(x: PAdicRational, y: PAdicRational) -> None:
    if x.prime != y.prime:
        raise DomainError(f"mismatched primes: {x.prime} vs {y.prime}")


def _combine(x: PAdicRational, y: PAdicRational, sign: int) -> PAdicRational:
    p = x.prime
    v = min(x.valuation, y.valuation)
    # absolute precision: each operand is known modulo p**(valuation+K)
    window = min(x.valuation + x.precision, y.valuation + y.precision) - v
    if window < 1:
        return PAdicRational.zero(p)
    modulus = p**window
    s = (
        x.unit.residue * p ** (x.valuation - v)
        + sign * y.unit.residue * p ** (y.valuation - v)
    ) % modulus
    if s == 0:
        return PAdicRational.zero(p)
    w = int_valuation(s, p)
    unit = PAdicInteger(p, window - w, s // p**w)
    return PAdicRational(p, v + w, unit)


def padic_add(x: PAdicRational, y: PAdicRational) -> PAdicRational:
    """Truncated sum at the weaker of the two absolute precisions.

    Digit cancellation shortens the retained window; a sum whose every
    retained digit cancels is indistinguishable from zero at this
    precision and is returned as zero.
    """
    _check_pair(x, y)
    if x.is_zero:
        return y
    if y.is_zero:
        return x
    return _combine(x, y, 1)


def padic_sub(x: PAdicRational, y: PAdicRational) -> PAdicRational:
    _check_pair(x, y)
    if y.is_zero:
        return x
    if x.is_zero:
        return -y
    return _combine(x, y, -1)


def padic_mul(x: PAdicRational, y: PAdicRational) -> PAdicRational:
    """Product; valuations add, so |xy|_p = |x|_p * |y|_p holds exactly."""
    _check_pair(x, y)
    if x.is_zero or y.is_zero:
        return PAdicRational.zero(x.prime)
    k = min(x.precision, y.precision)
    unit = PAdicInteger(x.prime, k, x.unit.residue * y.unit.residue)
    return PAdicRational(x.prime, x.valuation + y.valuation, unit)


def padic_distance(x: PAdicRational, y: PAdicRational) -> PAdicNorm:
    """Ultrametric distance |x - y|_p.

    Zero when the operands agree on every digit of the shared window
    (identity of indiscernibles holds up to the truncation).
    """
    _check_pair(x, y)
    return padic_norm(padic_sub(x, y))
