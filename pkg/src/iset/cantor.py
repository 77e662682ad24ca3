"""The Cantor set C(p), its p-adic parametrisation, and two notions of distance.

C(p) is built by splitting each interval into 2p-1 equal parts and
removing every second one, keeping the p odd-position closed
subintervals, so endpoints always survive. Base-p digit strings map
onto C(p) by

    (a_0, a_1, ...)  ->  sum of 2*a_k / (2p-1)**(k+1)

which sends the p-adic integers onto the set; for p=2 this is the
classical bijection between dyadic integers and the middle-thirds set.
Two distances live on C(p): the Euclidean gap between coordinates, and
the p-adic norm of the preimage difference. A perturbation of a
preimage keeps the image on C(p) exactly when it is a p-adic integer;
the two cases are tagged geometrically constrained and unconstrained.

Everything except the dimension logarithm is exact rational
arithmetic. All values are immutable; construct_iterate at large depth
allocates one tuple per interval, guarded by an explicit budget.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .budget import resolve_budget
from .errors import BudgetError, DomainError
from .padic import (
    PAdicInteger,
    PAdicNorm,
    PAdicRational,
    check_prime,
    int_valuation,
)

__all__ = [
    "DEFAULT_INTERVAL_BUDGET",
    "CantorConstruction",
    "CantorPoint",
    "Membership",
    "PerturbationTag",
    "PerturbationClass",
    "OffSetWitness",
    "construct_iterate",
    "cantor_encode",
    "cantor_membership",
    "cantor_distance",
    "euclidean_distance",
    "classify_perturbation",
    "off_set_witness",
    "hausdorff_dimension",
    "hausdorff_dimension_bits",
]

DEFAULT_INTERVAL_BUDGET = 1 << 20


def _check_geometry_params(p: int, depth: int) -> None:
    if p < 2:
        raise DomainError(f"p must be >= 2, got {p}")
    if depth < 0:
        raise DomainError(f"depth must be >= 0, got {depth}")


@dataclass(frozen=True)
class CantorConstruction:
    """Finite iterate C_k(p): p**depth closed intervals of width (2p-1)**-depth."""

    p: int
    depth: int

    def __post_init__(self):
        _check_geometry_params(self.p, self.depth)

    @property
    def subdivision(self) -> int:
        return 2 * self.p - 1

    @property
    def interval_count(self) -> int:
        return self.p**self.depth

    @property
    def interval_width(self) -> Fraction:
        return Fraction(1, self.subdivision**self.depth)

    def intervals(self, budget: int | None = None):
        return construct_iterate(self.p, self.depth, budget=budget)


def construct_iterate(
    p: int, depth: int, budget: int | None = None
) -> list[tuple[Fraction, Fraction]]:
    """Kept intervals of C_depth(p) in ascending order, as exact rational pairs.

    Splits each interval into 2p-1 parts and keeps positions 1, 3, ...,
    2p-1 (1-indexed), so 0 and 1 always survive. Raises BudgetError if
    the p**depth interval count exceeds the budget (ISET_BUDGET or the
    built-in default when not given).
    """
    _check_geometry_params(p, depth)
    limit = resolve_budget(budget, DEFAULT_INTERVAL_BUDGET)
    if p**depth > limit:
        raise BudgetError(
            f"{p}**{depth} intervals exceed budget {limit}", searched=0, budget=limit
        )
    n = 2 * p - 1
    intervals = [(Fraction(0), Fraction(1))]
    for _ in range(depth):
        refined = []
        for lo, hi in intervals:
            w = (hi - lo) / n
            for j in range(0, n, 2):
                refined.append((lo + j * w, lo + (j + 1) * w))
        intervals = refined
    return intervals


@dataclass(frozen=True)
class CantorPoint:
    """A point of C(p) at finite depth, addressed by digits and by coordinate.

    The coordinate is the exact partial sum of the digit map and equals
    the left endpoint of the depth-K interval the address selects.
    """

    p: int
    address: tuple[int, ...]
    coordinate: Fraction

    @property
    def depth(self) -> int:
        return len(self.address)

    def preimage_residue(self) -> int:
        """The truncated p-adic integer the point encodes."""
        r = 0
        for d in reversed(self.address):
            r = r * self.p + d
        return r


def _coordinate_from_digits(digits, p: int) -> Fraction:
    n = 2 * p - 1
    k = len(digits)
    num = 0
    scale = n ** (k - 1)
    for d in digits:
        num += 2 * d * scale
        scale //= n
    return Fraction(num, n**k)


def cantor_encode(x: PAdicInteger | PAdicRational) -> CantorPoint:
    """Map a truncated p-adic integer onto C(p).

    coordinate = sum of 2*a_k/(2p-1)**(k+1) over the retained digits.
    Rejects inputs with negative valuation: those have no image on the
    set.
    """
    if isinstance(x, PAdicRational):
        if x.is_zero:
            return CantorPoint(x.prime, (0,), Fraction(0))
        if x.valuation < 0:
            raise DomainError("cannot encode a value with negative valuation")
        digits = (0,) * x.valuation + x.unit.digits
        return CantorPoint(x.prime, digits, _coordinate_from_digits(digits, x.prime))
    digits = x.digits
    return CantorPoint(x.prime, digits, _coordinate_from_digits(digits, x.prime))


class MembershipStatus(enum.Enum):
    INSIDE_AT_DEPTH = "inside_at_depth"
    EXCLUDED_AT_DEPTH = "excluded_at_depth"


@dataclass(frozen=True)
class Membership:
    """Outcome of the depth-k membership walk for a rational coordinate."""

    status: MembershipStatus
    depth: int
    excluded_at: int | None = None
    address: tuple[int, ...] | None = None

    @property
    def inside(self) -> bool:
        return self.status is MembershipStatus.INSIDE_AT_DEPTH


def cantor_membership(q: Fraction, p: int, depth: int) -> Membership:
    """First refinement level at which q falls into a removed gap, if any.

    Walks the base-(2p-1) expansion of q with integer arithmetic only.
    Removed subintervals are open, so shared endpoints stay inside.
    """
    _check_geometry_params(p, depth)
    q = Fraction(q)
    if not 0 <= q <= 1:
        raise DomainError(f"coordinate {q} outside [0, 1]")
    n = 2 * p - 1
    num, den = q.numerator, q.denominator
    digits = []
    a = num
    for level in range(1, depth + 1):
        d, rem = divmod(a * n, den)
        if d % 2 == 1:
            if rem == 0:
                # q is the right endpoint of kept subinterval d-1
                d -= 1
                rem = den
            else:
                return Membership(
                    MembershipStatus.EXCLUDED_AT_DEPTH, depth, excluded_at=level
                )
        digits.append(d // 2)
        a = rem
    return Membership(MembershipStatus.INSIDE_AT_DEPTH, depth, address=tuple(digits))


def cantor_distance(y1: CantorPoint, y2: CantorPoint) -> PAdicNorm:
    """Invariant-set distance: p-adic norm of the preimage difference.

    Requires prime p (the norm is not multiplicative otherwise); the
    comparison uses the shared digit window of the two addresses.
    """
    if y1.p != y2.p:
        raise DomainError(f"mismatched p: {y1.p} vs {y2.p}")
    p = y1.p
    check_prime(p)
    k = min(y1.depth, y2.depth)
    diff = (y1.preimage_residue() - y2.preimage_residue()) % p**k
    if diff == 0:
        return PAdicNorm(p, None)
    return PAdicNorm(p, int_valuation(diff, p))


def euclidean_distance(y1: CantorPoint, y2: CantorPoint) -> Fraction:
    """Distance between the two coordinates in the embedding interval."""
    if y1.p != y2.p:
        raise DomainError(f"mismatched p: {y1.p} vs {y2.p}")
    return abs(y1.coordinate - y2.coordinate)


class PerturbationTag(enum.Enum):
    GEOMETRICALLY_CONSTRAINED = "geometrically_constrained"
    GEOMETRICALLY_UNCONSTRAINED = "geometrically_unconstrained"


@dataclass(frozen=True)
class PerturbationClass:
    """Classification of a preimage perturbation by its p-adic size.

    Constrained perturbations are p-adic integers (norm <= 1): the
    perturbed image stays on C(p). Anything with p dividing the reduced
    denominator has norm >= p and throws the image off the set.
    """

    tag: PerturbationTag
    d_magnitude: PAdicNorm

    @property
    def constrained(self) -> bool:
        return self.tag is PerturbationTag.GEOMETRICALLY_CONSTRAINED


def classify_perturbation(
    x: PAdicRational | PAdicInteger | None,
    delta: Fraction,
    p: int,
    precision: int,
) -> PerturbationClass:
    """Classify the perturbation x -> x + delta of a p-adic preimage.

    The verdict depends only on delta: it is constrained exactly when
    its reduced denominator is coprime to p. x is accepted for prime
    validation and call-site symmetry with the encode path.
    """
    check_prime(p)
    if precision < 1:
        raise DomainError(f"precision must be >= 1, got {precision}")
    if x is not None and getattr(x, "prime", p) != p:
        raise DomainError("perturbed value has a different prime")
    delta = Fraction(delta)
    if delta == 0:
        return PerturbationClass(
            PerturbationTag.GEOMETRICALLY_CONSTRAINED, PAdicNorm(p, None)
        )
    v = int_valuation(delta.numerator, p) - int_valuation(delta.denominator, p)
    tag = (
        PerturbationTag.GEOMETRICALLY_CONSTRAINED
        if v >= 0
        else PerturbationTag.GEOMETRICALLY_UNCONSTRAINED
    )
    return PerturbationClass(tag, PAdicNorm(p, v))


@dataclass(frozen=True)
class OffSetWitness:
    """A pair that is Euclidean-close yet far in the invariant-set metric.

    base stays on C(p); the perturbed coordinate sits in a removed gap
    one level below the base depth, at Euclidean offset below
    (2p-1)**-depth, while the perturbing rational has p-adic norm >= p.
    """

    base: CantorPoint
    delta: Fraction
    perturbed_coordinate: Fraction
    membership: Membership
    perturbation: PerturbationClass

    @property
    def euclidean_offset(self) -> Fraction:
        return abs(self.delta)

    @property
    def d_magnitude(self) -> PAdicNorm:
        return self.perturbation.d_magnitude


def off_set_witness(x: PAdicInteger) -> OffSetWitness:
    """Construct an explicit small-Euclidean, large-D perturbation of x.

    Steps the image into the first removed gap below depth K using a
    rational offset with p in its denominator. Demonstrates that a
    Euclidean-small move need not be small in the invariant-set metric.
    """
    p, k = x.prime, x.precision
    base = cantor_encode(x)
    gap = Fraction(1, (2 * p - 1) ** (k + 1))
    # lands strictly inside the removed gap (gap, 2*gap) next to the base point
    delta = gap * Fraction(2 * p + 1, 2 * p)
    coordinate = base.coordinate + delta
    cls = classify_perturbation(x.as_rational(), delta, p, k)
    membership = cantor_membership(coordinate, p, k + 1)
    return OffSetWitness(base, delta, coordinate, membership, cls)


def hausdorff_dimension(p: int, digits: int = 30) -> mpmath.mpf:
    """log p / log(2p-1): kept count over subdivision count.

    Monotone increasing in p and tends to 1 as p grows. Computed with
    mpmath at the declared decimal precision; the only inexact value in
    this module.
    """
    if p < 2:
        raise DomainError(f"p must be >= 2, got {p}")
    with mpmath.workdps(digits):
        return mpmath.log(p) / mpmath.log(2 * p - 1)


def hausdorff_dimension_bits(n_bits: int, digits: int = 30) -> mpmath.mpf:
    """The dimension in its bit-count form log(2**N) / log(2**(N+1) - 1).

    Reported alongside hausdorff_dimension(2**N + 1): the two differ by
    O(1/2**N) and share the N/(N+1) limit, but are not identical.
    """
    if n_bits < 1:
        raise DomainError(f"bit count must be >= 1, got {n_bits}")
    with mpmath.workdps(digits):
        return mpmath.log(mpmath.mpf(2) ** n_bits) / mpmath.log(
            mpmath.mpf(2) ** (n_bits + 1) - 1
        )
