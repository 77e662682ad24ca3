"""Bell and CHSH machinery on the dyadic admissibility grid.

Correlations follow the convention Corr(a, b) = cos(theta_ab), the
cosine of the relative orientation angle; a flag flips the sign for
cross-checks against the textbook singlet convention.

The four-correlation CHSH combination A demands all four setting pairs
jointly. Under the invariant-set rule, once one pair of settings is
realized, the two single-swap counterfactual pairs do not correspond to
admissible states, so A is undefined; the rule is syntactic on setting
counterfactuals. What an experiment estimates instead is A', assembled
from four separate sub-experiments whose correlations each sit on the
level-N grid (snapped within instrument resolution), and A' may exceed
2.

Monte Carlo sub-experiments draw i.i.d. outcome pairs from the unique
exchangeable distribution on {-1,+1}^2 with uniform marginals and the
given correlation: P(A=a, B=b) = (1 + a*b*c)/4. Each sub-experiment
gets its own deterministically derived seed stream, so reports are
bit-identical for identical (config, n, seed) regardless of execution
order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .trig import (
    PhaseAngle,
    cos_phase_rationality,
    in_Q2N,
    interval_cospi,
    snap_cosine,
)

__all__ = [
    "DEFAULT_SEED",
    "Orientation",
    "CosineValue",
    "PairSpec",
    "ExperimentConfig",
    "AStatus",
    "CorrelationRecord",
    "BellCheck",
    "ChshReport",
    "correlation_exact",
    "correlation_on_invariant_set",
    "pair_on_invariant_set",
    "instrument_resolution",
    "chsh_A",
    "chsh_A_prime",
    "bell_original_lhs",
    "simulate_subexperiment",
    "run_chsh_experiment",
]

DEFAULT_SEED = 7


@dataclass(frozen=True)
class Orientation:
    """A measuring orientation: an exact rational multiple of pi in [0, 2)."""

    fraction: Fraction

    def __post_init__(self):
        object.__setattr__(self, "fraction", Fraction(self.fraction) % 2)

    def relative_fraction(self, other: "Orientation") -> Fraction:
        """Relative angle as a fraction of pi, folded into [0, 1]."""
        g = abs(self.fraction - other.fraction) % 2
        return 2 - g if g > 1 else g

    def __str__(self) -> str:
        return f"{self.fraction}*pi"


@dataclass(frozen=True)
class CosineValue:
    """cos of a relative angle: exact rational, or a certified enclosure."""

    fraction_of_pi: Fraction
    exact: Fraction | None
    lo: Fraction
    hi: Fraction

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def midpoint(self) -> Fraction:
        return self.exact if self.exact is not None else (self.lo + self.hi) / 2

    def __float__(self) -> float:
        return float(self.midpoint())


def correlation_exact(
    a: Orientation, b: Orientation, singlet: bool = False
) -> CosineValue:
    """Corr(a, b) = cos(theta_ab), exact when rational, else an enclosure.

    The enclosure is certified with width below 1e-30. ``singlet``
    flips the sign, for cross-checks against the textbook -cos
    convention.
    """
    g = a.relative_fraction(b)
    c = cos_phase_rationality(PhaseAngle(g))
    if c is not None:
        value = -c if singlet else c
        return CosineValue(g, value, value, value)
    lo, hi = interval_cospi(g)
    if hi - lo > Fraction(1, 10**30):
        lo, hi = interval_cospi(g, prec=300)
    if singlet:
        lo, hi = -hi, -lo
    return CosineValue(g, None, lo, hi)


def correlation_on_invariant_set(c: CosineValue | Fraction, n: int) -> bool:
    """True iff the correlation is a rational on the level-N grid.

    For enclosed irrational values, certifies that no grid point lies
    inside the enclosure before answering False.
    """
    if isinstance(c, CosineValue):
        if c.is_exact:
            return in_Q2N(c.exact, n)
        scale = 1 << n
        if math.floor(c.hi * scale) >= math.ceil(c.lo * scale):
            raise DomainError(
                f"enclosure too wide to certify grid membership at N={n}"
            )
        return False
    return in_Q2N(Fraction(c), n)


def pair_on_invariant_set(a: Orientation, b: Orientation, n: int) -> bool:
    """Whether the pair of orientations is admissible at level N as-is."""
    return correlation_on_invariant_set(correlation_exact(a, b), n)


def instrument_resolution(n: int) -> float:
    """Default angular resolution (radians) of the measuring instruments.

    Matches the angular snap bound: orientations can be nudged by this
    much to land their cosines on the level-N grid.
    """
    return 2.0 ** (-(n - 1) / 2)


@dataclass(frozen=True)
class PairSpec:
    """One sub-experiment: a setting pair and its admissible correlation.

    ``cosine`` is the exact pre-snap value; ``correlation`` is the
    effective one used by the experiment, equal to the snapped cosine
    (realizable within instrument resolution) unless the exact value
    already sits on the grid.
    """

    label: str
    alice: Orientation
    bob: Orientation
    cosine: CosineValue
    correlation: Fraction
    snapped: bool

    @classmethod
    def build(
        cls, label: str, alice: Orientation, bob: Orientation, n: int, snap: bool = True
    ) -> "PairSpec":
        c = correlation_exact(alice, bob)
        if c.is_exact and in_Q2N(c.exact, n):
            return cls(label, alice, bob, c, c.exact, False)
        if snap:
            return cls(label, alice, bob, c, snap_cosine(c.midpoint(), n).value, True)
        return cls(label, alice, bob, c, c.midpoint(), False)

    def on_invariant_set(self, n: int) -> bool:
        return in_Q2N(self.correlation, n)


@dataclass(frozen=True)
class ExperimentConfig:
    """A CHSH configuration: binary orientations per side, level, realized pair."""

    a1: Orientation
    a2: Orientation
    b1: Orientation
    b2: Orientation
    n_level: int
    realized_pair: tuple[int, int] = (1, 1)
    snap: bool = True
    use_is_rule: bool = True

    def __post_init__(self):
        if self.realized_pair not in {(1, 1), (1, 2), (2, 1), (2, 2)}:
            raise DomainError(f"realized pair {self.realized_pair} out of range")
        if self.n_level < 0:
            raise DomainError(f"level must be >= 0, got {self.n_level}")

    @classmethod
    def standard(cls, n_level: int, **kwargs) -> "ExperimentConfig":
        """The quantum-optimal geometry: 0, pi/2 vs pi/4, 3pi/4."""
        return cls(
            a1=Orientation(Fraction(0)),
            a2=Orientation(Fraction(1, 2)),
            b1=Orientation(Fraction(1, 4)),
            b2=Orientation(Fraction(3, 4)),
            n_level=n_level,
            **kwargs,
        )

    def orientation(self, side: str, index: int) -> Orientation:
        return getattr(self, f"{side}{index}")

    def pair(self, i: int, j: int) -> PairSpec:
        return PairSpec.build(
            f"a{i}b{j}",
            self.orientation("a", i),
            self.orientation("b", j),
            self.n_level,
            snap=self.snap,
        )

    def four_pairs(self) -> tuple[PairSpec, PairSpec, PairSpec, PairSpec]:
        return (self.pair(1, 1), self.pair(1, 2), self.pair(2, 1), self.pair(2, 2))

    def angles_dict(self) -> dict[str, str]:
        return {k: str(self.orientation(k[0], int(k[1]))) for k in ("a1", "a2", "b1", "b2")}


@dataclass(frozen=True)
class AStatus:
    """The four-way CHSH quantity: undefined with diagnostics, or a value."""

    defined: bool
    value: Fraction | None
    off_set_pairs: tuple[str, ...]
    realized_off_set: bool

    def describe(self) -> str:
        if self.defined:
            return f"Value({self.value})"
        return f"Undefined(off_invariant_set={list(self.off_set_pairs)})"


def chsh_A(config: ExperimentConfig) -> AStatus:
    """Evaluate the joint CHSH quantity under the invariant-set rule.

    With the rule active the result is always Undefined: given the
    realized setting pair, the two single-swap counterfactual pairs are
    off the invariant set, and the four-way combination demands them.
    The arithmetic value |c11 - c12| + |c21 + c22| is produced only
    when the config explicitly disables the rule, for comparison runs.
    A realized pair that is itself inadmissible at level N is reported
    as a distinct diagnostic.
    """
    i, j = config.realized_pair
    realized = config.pair(i, j)
    realized_off = not realized.on_invariant_set(config.n_level)
    if config.use_is_rule:
        k = 2 if i == 1 else 1
        m = 2 if j == 1 else 1
        off_pairs = (f"a{k}b{j}", f"a{i}b{m}")
        if realized_off:
            off_pairs = (realized.label,) + off_pairs
        return AStatus(False, None, off_pairs, realized_off)
    c11, c12, c21, c22 = (p.correlation for p in config.four_pairs())
    return AStatus(True, abs(c11 - c12) + abs(c21 + c22), (), realized_off)


def _check_primed_partner(
    primed: Orientation, unprimed: Orientation, resolution: float, what: str
) -> None:
    g = primed.relative_fraction(unprimed)
    if float(g) * math.pi > resolution + 1e-15:
        raise DomainError(
            f"{what} differs from its partner by {float(g) * math.pi:.3g} rad, "
            f"more than the instrument resolution {resolution:.3g}"
        )


def chsh_A_prime(
    sub11: PairSpec,
    sub12: PairSpec,
    sub21: PairSpec,
    sub22: PairSpec,
    n: int,
    resolution: float | None = None,
) -> Fraction:
    """A' = |c(a1,b1) - c(a1',b2)| + |c(a2,b1') + c(a2,b2)| from four records.

    Each sub-experiment must be admissible at level N, and the primed
    settings must equal their unprimed partners within the instrument
    resolution (default: the angular snap bound).
    """
    res = instrument_resolution(n) if resolution is None else resolution
    off = [s.label for s in (sub11, sub12, sub21, sub22) if not s.on_invariant_set(n)]
    if off:
        raise DomainError(f"sub-experiment pairs off the invariant set at N={n}: {off}")
    _check_primed_partner(sub12.alice, sub11.alice, res, "a1' in sub-experiment 2")
    _check_primed_partner(sub21.bob, sub11.bob, res, "b1' in sub-experiment 3")
    return abs(sub11.correlation - sub12.correlation) + abs(
        sub21.correlation + sub22.correlation
    )


@dataclass(frozen=True)
class BellCheck:
    """Both sides of the three-correlation inequality, evaluated exactly."""

    lhs: Fraction
    rhs: Fraction

    @property
    def satisfied(self) -> bool:
        return self.lhs <= self.rhs


def bell_original_lhs(ab: PairSpec, ac: PairSpec, bc: PairSpec, n: int) -> BellCheck:
    """|Corr(a,b) - Corr(a,c)| vs 1 + Corr(b,c) from three sub-experiments."""
    off = [s.label for s in (ab, ac, bc) if not s.on_invariant_set(n)]
    if off:
        raise DomainError(f"sub-experiment pairs off the invariant set at N={n}: {off}")
    return BellCheck(abs(ab.correlation - ac.correlation), 1 + bc.correlation)


@dataclass(frozen=True)
class CorrelationRecord:
    """Monte Carlo estimate of one sub-experiment's correlation."""

    label: str
    n_trials: int
    sum_products: int
    estimate: Fraction
    exact_correlation: Fraction
    standard_error: float
    alice_plus: int

    def __post_init__(self):
        if abs(self.estimate) > 1:
            raise DomainError("estimate outside [-1, 1]")
        if (self.sum_products - self.n_trials) % 2 != 0:
            raise DomainError("sum of +-1 products must match trial-count parity")


def simulate_subexperiment(
    spec: PairSpec, n_trials: int, seed
) -> CorrelationRecord:
    """Draw n i.i.d. outcome pairs with the spec's exact correlation.

    P(A=a, B=b) = (1 + a*b*c)/4: uniform marginals, product mean c.
    ``seed`` may be an int, SeedSequence or Generator; results are
    deterministic for a given seed.
    """
    if n_trials < 1:
        raise DomainError(f"n_trials must be >= 1, got {n_trials}")
    c = float(spec.correlation)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    alice = rng.integers(0, 2, n_trials, dtype=np.int8) * 2 - 1
    same = rng.random(n_trials) < (1.0 + c) / 2.0
    bob = np.where(same, alice, -alice)
    sum_products = int((alice * bob.astype(np.int64)).sum())
    estimate = Fraction(sum_products, n_trials)
    stderr = math.sqrt(max(0.0, 1.0 - float(estimate) ** 2) / n_trials)
    return CorrelationRecord(
        label=spec.label,
        n_trials=n_trials,
        sum_products=sum_products,
        estimate=estimate,
        exact_correlation=spec.correlation,
        standard_error=stderr,
        alice_plus=int((alice > 0).sum()),
    )


@dataclass(frozen=True)
class ChshReport:
    """Full evaluation of a CHSH configuration.

    A_status is Undefined (with the off-set pairs listed) whenever the
    invariant-set rule is active; A' is always a finite exact rational,
    with a Monte Carlo estimate when trials were run.
    """

    n_level: int
    angles: dict[str, str]
    realized_pair: tuple[int, int]
    a_status: AStatus
    a_prime_exact: Fraction
    violation: bool
    n_trials: int
    seed: int
    a_prime_mc: float | None = None
    mc_stderr: float | None = None
    records: tuple[CorrelationRecord, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        """JSON-ready dictionary; exact values as fraction strings."""
        return {
            "n_level": self.n_level,
            "angles": self.angles,
            "realized_pair": list(self.realized_pair),
            "a_status": (
                {"status": "value", "value": str(self.a_status.value)}
                if self.a_status.defined
                else {
                    "status": "undefined",
                    "off_invariant_set": list(self.a_status.off_set_pairs),
                }
            ),
            "a_prime_exact": str(self.a_prime_exact),
            "a_prime_float": float(self.a_prime_exact),
            "violation": self.violation,
            "n_trials": self.n_trials,
            "seed": self.seed,
            "a_prime_mc": self.a_prime_mc,
            "mc_stderr": self.mc_stderr,
            "correlations": [
                {
                    "pair": r.label,
                    "n": r.n_trials,
                    "sum_products": r.sum_products,
                    "estimate": str(r.estimate),
                    "estimate_float": float(r.estimate),
                    "exact": str(r.exact_correlation),
                    "stderr": r.standard_error,
                    "alice_plus": r.alice_plus,
                }
                for r in self.records
            ],
        }


def run_chsh_experiment(
    config: ExperimentConfig, n_trials: int = 0, seed: int = DEFAULT_SEED
) -> ChshReport:
    """Assemble the A/A' report for a configuration.

    Runs four independent sub-experiments when n_trials > 0, each on a
    deterministically derived child seed, so the report is bit
    identical for identical inputs.
    """
    specs = config.four_pairs()
    status = chsh_A(config)
    a_prime = chsh_A_prime(*specs, config.n_level)
    a_prime_mc = None
    stderr = None
    records: tuple[CorrelationRecord, ...] = ()
    if n_trials > 0:
        children = np.random.SeedSequence(seed).spawn(4)
        recs = [
            simulate_subexperiment(spec, n_trials, np.random.default_rng(child))
            for spec, child in zip(specs, children)
        ]
        e11, e12, e21, e22 = (float(r.estimate) for r in recs)
        a_prime_mc = abs(e11 - e12) + abs(e21 + e22)
        stderr = math.sqrt(sum(r.standard_error**2 for r in recs))
        records = tuple(recs)
    return ChshReport(
        n_level=config.n_level,
        angles=config.angles_dict(),
        realized_pair=config.realized_pair,
        a_status=status,
        a_prime_exact=a_prime,
        violation=a_prime > 2,
        n_trials=n_trials,
        seed=seed,
        a_prime_mc=a_prime_mc,
        mc_stderr=stderr,
        records=records,
    )
