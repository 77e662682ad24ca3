"""Dyadic admissibility, the spherical cosine rule, and exact rationality decisions.

The admissible cosines at level N are the dyadic rationals m/2**N in
[-1, 1]. Given two admissible sides and an apex phase angle f*pi, the
cosine rule produces the third side in the closed form

    r1 + sqrt(r2) * cos(f*pi),   r1 = c_ac*c_bc,  r2 = (1-c_ac**2)(1-c_bc**2)

and the rationality of that value is decidable: cos(f*pi) for rational
f is rational only at 0, +-1/2, +-1, and cos**2(f*pi) is rational only
for a handful of further fractions, so the decision reduces to exact
perfect-square tests. No tolerances are involved anywhere; the interval
evaluator exists only to cross-check the symbolic verdicts.

The exhaustive search over a level-N grid confirms that no
non-degenerate admissible triple exists for dyadic phases strictly
between 0 and 1/2, while the phase 1/2 product family does exist.

All functions are pure; the search visits a deterministic grid and its
report does not depend on evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from mpmath.ctx_iv import MPIntervalContext

from .budget import BUDGET_ENV_VAR, resolve_budget
from .errors import BudgetError, DomainError

__all__ = [
    "DEFAULT_SEARCH_BUDGET",
    "BUDGET_ENV_VAR",
    "DyadicRational",
    "PhaseAngle",
    "AlgebraicCosine",
    "TripleRecord",
    "SearchReport",
    "in_Q2N",
    "is_dyadic",
    "cos_phase_rationality",
    "third_side",
    "is_rational",
    "admissible_third_side",
    "incompatibility_search",
    "snap_cosine",
    "snap_phase",
    "angular_snap_error",
    "default_budget",
    "interval_cospi",
    "mpf_tuple_to_fraction",
]

DEFAULT_SEARCH_BUDGET = 5_000_000


def default_budget() -> int:
    """Search budget: ISET_BUDGET from the environment, or the built-in default."""
    return resolve_budget(None, DEFAULT_SEARCH_BUDGET)


def mpf_tuple_to_fraction(t) -> Fraction:
    """Exact rational value of a raw mpmath mpf tuple (sign, man, exp, bc)."""
    sign, man, exp, _ = t
    man = int(man)
    if man == 0:
        return Fraction(0)
    fr = Fraction(man << exp) if exp >= 0 else Fraction(man, 1 << -exp)
    return -fr if sign else fr


def _interval_context(prec: int) -> MPIntervalContext:
    ctx = MPIntervalContext()
    ctx.prec = prec
    return ctx


def interval_cospi(f: Fraction, prec: int = 150) -> tuple[Fraction, Fraction]:
    """Certified rational enclosure of cos(f*pi)."""
    ctx = _interval_context(prec)
    x = ctx.pi * ctx.mpf(f.numerator) / ctx.mpf(f.denominator)
    lo, hi = ctx.cos(x)._mpi_
    return mpf_tuple_to_fraction(lo), mpf_tuple_to_fraction(hi)


@dataclass(frozen=True)
class DyadicRational:
    """m / 2**level in canonical form (m odd, or m = 0 with level 0)."""

    numerator: int
    level: int

    def __post_init__(self):
        if self.level < 0:
            raise DomainError(f"level must be >= 0, got {self.level}")
        num, lev = self.numerator, self.level
        if num == 0:
            lev = 0
        else:
            while num % 2 == 0 and lev > 0:
                num //= 2
                lev -= 1
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "level", lev)

    @classmethod
    def from_fraction(cls, q: Fraction) -> "DyadicRational":
        q = Fraction(q)
        den = q.denominator
        if den & (den - 1) != 0:
            raise DomainError(f"{q} is not a dyadic rational")
        return cls(q.numerator, den.bit_length() - 1)

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.level)

    def representable_at(self, n: int) -> bool:
        """True when the value is some m/2**n, i.e. level <= n."""
        return self.level <= n

    def __str__(self) -> str:
        return str(self.value)


def is_dyadic(q: Fraction) -> bool:
    den = Fraction(q).denominator
    return den & (den - 1) == 0


def in_Q2N(q: Fraction, n: int) -> bool:
    """Membership in the level-N admissibility grid.

    True iff q = m/2**N for an integer m and |q| <= 1, i.e. the reduced
    denominator divides 2**N and the magnitude fits the cosine range.
    """
    if n < 0:
        raise DomainError(f"level must be >= 0, got {n}")
    q = Fraction(q)
    if abs(q) > 1:
        return False
    den = q.denominator
    return den & (den - 1) == 0 and den.bit_length() - 1 <= n


@dataclass(frozen=True)
class PhaseAngle:
    """An angle f*pi with exact rational f in [0, 1]."""

    fraction: Fraction

    def __post_init__(self):
        object.__setattr__(self, "fraction", Fraction(self.fraction))
        if not 0 <= self.fraction <= 1:
            raise DomainError(f"phase fraction {self.fraction} outside [0, 1]")

    @property
    def is_dyadic(self) -> bool:
        return is_dyadic(self.fraction)

    @property
    def radians(self) -> float:
        return float(self.fraction) * math.pi

    def __str__(self) -> str:
        return f"{self.fraction}*pi"


def _cos_table(f: Fraction) -> Fraction | None:
    """cos(f*pi) for f in [0,1] when rational (Niven's theorem), else None."""
    den = f.denominator
    if den == 1:
        return Fraction(1) if f == 0 else Fraction(-1)
    if den == 2:
        return Fraction(0)
    if den == 3:
        return Fraction(1, 2) if f == Fraction(1, 3) else Fraction(-1, 2)
    return None


@lru_cache(maxsize=8192)
def _phase_profile(f: Fraction) -> tuple[Fraction | None, Fraction | None, int]:
    """(cos value if rational, cos**2 value if rational, sign of cos)."""
    c = _cos_table(f)
    if c is not None:
        csq = c * c
    else:
        g = 2 * f
        if g > 1:
            g = 2 - g
        c2 = _cos_table(g)
        csq = None if c2 is None else (1 + c2) / 2
    if f < Fraction(1, 2):
        sign = 1
    elif f == Fraction(1, 2):
        sign = 0
    else:
        sign = -1
    return c, csq, sign


def cos_phase_rationality(phase: PhaseAngle) -> Fraction | None:
    """Exact value of cos(phase) when rational, None when provably irrational.

    For rational multiples of pi the only rational cosines are
    0, +-1/2, +-1; a dyadic phase therefore has rational cosine only at
    fractions 0, 1/2 and 1.
    """
    return _phase_profile(phase.fraction)[0]


def sqrt_fraction(q: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None."""
    if q < 0:
        raise DomainError(f"square root of negative rational {q}")
    if q == 0:
        return Fraction(0)
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class AlgebraicCosine:
    """The third-side value r1 + sqrt(r2) * cos(phase), held exactly."""

    r1: Fraction
    r2: Fraction
    phase: PhaseAngle

    def __post_init__(self):
        object.__setattr__(self, "r1", Fraction(self.r1))
        object.__setattr__(self, "r2", Fraction(self.r2))
        if self.r2 < 0:
            raise DomainError(f"r2 must be >= 0, got {self.r2}")

    def value_interval(self, prec: int = 150) -> tuple[Fraction, Fraction]:
        """Certified rational enclosure of the represented value."""
        ctx = _interval_context(prec)
        r1 = ctx.mpf(self.r1.numerator) / ctx.mpf(self.r1.denominator)
        r2 = ctx.mpf(self.r2.numerator) / ctx.mpf(self.r2.denominator)
        f = self.phase.fraction
        ang = ctx.pi * ctx.mpf(f.numerator) / ctx.mpf(f.denominator)
        v = r1 + ctx.sqrt(r2) * ctx.cos(ang)
        lo, hi = v._mpi_
        return mpf_tuple_to_fraction(lo), mpf_tuple_to_fraction(hi)

    def value_float(self) -> float:
        lo, hi = self.value_interval(prec=80)
        return float((lo + hi) / 2)


def third_side(cos_ac: Fraction, cos_bc: Fraction, phase: PhaseAngle) -> AlgebraicCosine:
    """Apply the spherical cosine rule with exact carriers.

    cos_ab = cos_ac*cos_bc + sin_ac*sin_bc*cos(phase); the square-root
    factor is kept under the radical, never evaluated numerically.
    """
    cos_ac, cos_bc = Fraction(cos_ac), Fraction(cos_bc)
    for c in (cos_ac, cos_bc):
        if abs(c) > 1:
            raise DomainError(f"cosine {c} outside [-1, 1]")
    r1 = cos_ac * cos_bc
    r2 = (1 - cos_ac * cos_ac) * (1 - cos_bc * cos_bc)
    return AlgebraicCosine(r1, r2, phase)


def _decide(r1: Fraction, r2: Fraction, profile) -> Fraction | None:
    """Exact rationality of r1 + sqrt(r2)*cos(phase) given the phase profile."""
    if r2 == 0:
        return r1
    c, csq, sign = profile
    if c is not None:
        if c == 0:
            return r1
        s = sqrt_fraction(r2)
        return None if s is None else r1 + s * c
    if csq is not None:
        # cos is irrational but cos**2 = csq is rational: the radical part
        # is +-sqrt(r2*csq), rational exactly when that product is a square
        s = sqrt_fraction(r2 * csq)
        if s is None:
            return None
        return r1 + s if sign > 0 else r1 - s
    # cos**2 irrational: sqrt(r2)*cos rational would force cos**2 rational
    return None


def is_rational(a: AlgebraicCosine) -> Fraction | None:
    """Sound and complete rationality decision for a third-side value.

    Returns the exact rational value, or None when the value is
    provably irrational. Complete for every rational phase fraction.
    """
    return _decide(a.r1, a.r2, _phase_profile(a.phase.fraction))


def admissible_third_side(
    cos_ac: Fraction, cos_bc: Fraction, phase: PhaseAngle, n: int
) -> bool:
    """Whether the triple closes on the level-N admissibility grid.

    Preconditions: both input cosines and the phase fraction must
    themselves lie on the grid.
    """
    cos_ac, cos_bc = Fraction(cos_ac), Fraction(cos_bc)
    for name, q in (("cos_ac", cos_ac), ("cos_bc", cos_bc), ("phase", phase.fraction)):
        if not in_Q2N(q, n):
            raise DomainError(f"{name}={q} is not in Q2({n})")
    v = is_rational(third_side(cos_ac, cos_bc, phase))
    return v is not None and in_Q2N(v, n)


@dataclass(frozen=True)
class TripleRecord:
    """One catalogued triple from the exhaustive search."""

    cos_ac: Fraction
    cos_bc: Fraction
    phase_fraction: Fraction
    value: Fraction
    degenerate: bool
    admissible: bool

    @property
    def verdict(self) -> str:
        if self.degenerate:
            return "degenerate"
        return "admissible" if self.admissible else "rational-off-grid"


@dataclass(frozen=True)
class SearchReport:
    """Outcome of an exhaustive level-N triple enumeration."""

    level: int
    phase_lo: Fraction
    phase_hi: Fraction
    include_upper: bool
    count_searched: int
    admissible_triples: tuple[TripleRecord, ...]
    degenerate_triples: tuple[TripleRecord, ...]
    rational_off_grid: tuple[TripleRecord, ...]

    def records(self) -> list[TripleRecord]:
        out = list(self.admissible_triples)
        out += list(self.degenerate_triples)
        out += list(self.rational_off_grid)
        return sorted(out, key=lambda r: (r.phase_fraction, r.cos_ac, r.cos_bc))

    def summary(self) -> dict:
        return {
            "level": self.level,
            "phase_lo": str(self.phase_lo),
            "phase_hi": str(self.phase_hi),
            "include_upper": self.include_upper,
            "count_searched": self.count_searched,
            "admissible": len(self.admissible_triples),
            "degenerate": len(self.degenerate_triples),
            "rational_off_grid": len(self.rational_off_grid),
        }


def incompatibility_search(
    n: int,
    phase_lo: Fraction = Fraction(0),
    phase_hi: Fraction = Fraction(1, 2),
    include_upper: bool = False,
    budget: int | None = None,
) -> SearchReport:
    """Classify every level-N triple with a dyadic phase in the given range.

    Enumerates all cos_ac, cos_bc = m/2**N in [-1, 1] and all dyadic
    phase fractions j/2**N strictly inside (phase_lo, phase_hi), plus
    the upper endpoint when include_upper is set. Each triple gets the
    exact rationality decision; rational values are catalogued with
    their grid admissibility. On the default open range the expected
    admissible non-degenerate catalogue is empty.
    """
    if n < 1:
        raise DomainError(f"level must be >= 1, got {n}")
    phase_lo, phase_hi = Fraction(phase_lo), Fraction(phase_hi)
    if not 0 <= phase_lo < phase_hi <= 1:
        raise DomainError(f"bad phase range ({phase_lo}, {phase_hi})")
    limit = resolve_budget(budget, DEFAULT_SEARCH_BUDGET)

    m = 1 << n
    phases = [
        Fraction(j, m)
        for j in range(1, m + 1)
        if phase_lo < Fraction(j, m) < phase_hi
        or (include_upper and Fraction(j, m) == phase_hi)
    ]
    cos_values = [Fraction(k, m) for k in range(-m, m + 1)]
    planned = len(phases) * len(cos_values) ** 2
    if planned > limit:
        raise BudgetError(
            f"search at N={n} needs {planned} triples, budget is {limit}",
            searched=0,
            budget=limit,
        )

    sin_sq = [1 - c * c for c in cos_values]
    admissible: list[TripleRecord] = []
    degenerate: list[TripleRecord] = []
    off_grid: list[TripleRecord] = []
    for f in phases:
        profile = _phase_profile(f)
        fast_irrational = profile[0] is None and profile[1] is None
        for i, ca in enumerate(cos_values):
            ua = sin_sq[i]
            for j, cb in enumerate(cos_values):
                ub = sin_sq[j]
                deg = ua == 0 or ub == 0
                if fast_irrational and not deg:
                    # same theorem as the final branch of _decide: nonzero
                    # rational r2 with irrational cos**2 stays irrational
                    continue
                v = _decide(ca * cb, ua * ub, profile)
                if v is None:
                    continue
                rec = TripleRecord(ca, cb, f, v, deg, in_Q2N(v, n))
                if deg:
                    degenerate.append(rec)
                elif rec.admissible:
                    admissible.append(rec)
                else:
                    off_grid.append(rec)
    return SearchReport(
        level=n,
        phase_lo=phase_lo,
        phase_hi=phase_hi,
        include_upper=include_upper,
        count_searched=planned,
        admissible_triples=tuple(admissible),
        degenerate_triples=tuple(degenerate),
        rational_off_grid=tuple(off_grid),
    )


def _round_half_toward_zero(scaled: Fraction) -> int:
    floor = scaled.numerator // scaled.denominator
    rem = scaled - floor
    if rem > Fraction(1, 2):
        return floor + 1
    if rem < Fraction(1, 2):
        return floor
    return floor if floor >= 0 else floor + 1


def snap_cosine(target: Fraction, n: int) -> DyadicRational:
    """Nearest m/2**N to the target cosine, ties toward zero.

    The snap error never exceeds 2**-(N+1).
    """
    target = Fraction(target)
    if abs(target) > 1:
        raise DomainError(f"cosine {target} outside [-1, 1]")
    if n < 0:
        raise DomainError(f"level must be >= 0, got {n}")
    m = _round_half_toward_zero(target * (1 << n))
    return DyadicRational(m, n)


def snap_phase(target_fraction: Fraction, n: int) -> PhaseAngle:
    """Nearest dyadic phase fraction at level N, same contract as snap_cosine."""
    target = Fraction(target_fraction)
    if not 0 <= target <= 1:
        raise DomainError(f"phase fraction {target} outside [0, 1]")
    if n < 0:
        raise DomainError(f"level must be >= 0, got {n}")
    m = _round_half_toward_zero(target * (1 << n))
    return PhaseAngle(Fraction(m, 1 << n))


def angular_snap_error(theta: float, n: int) -> float:
    """|arccos(snap(cos theta)) - theta| for a physical angle in (0, pi)."""
    c = Fraction(math.cos(theta))
    if c > 1:
        c = Fraction(1)
    elif c < -1:
        c = Fraction(-1)
    snapped = float(snap_cosine(c, n).value)
    return abs(math.acos(snapped) - theta)
