"""Tests for dyadic admissibility, the cosine rule and the rationality decision."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from iset.errors import BudgetError, DomainError
from iset.trig import (
    AlgebraicCosine,
    DyadicRational,
    PhaseAngle,
    admissible_third_side,
    angular_snap_error,
    cos_phase_rationality,
    in_Q2N,
    incompatibility_search,
    interval_cospi,
    is_dyadic,
    is_rational,
    snap_cosine,
    snap_phase,
    sqrt_fraction,
    third_side,
)

F = Fraction


class TestDyadic:
    def test_canonical(self):
        d = DyadicRational(4, 4)
        assert (d.numerator, d.level) == (1, 2)
        assert DyadicRational(0, 7) == DyadicRational(0, 0)

    def test_from_fraction(self):
        d = DyadicRational.from_fraction(F(181, 256))
        assert d.level == 8 and d.numerator == 181
        with pytest.raises(DomainError):
            DyadicRational.from_fraction(F(1, 3))

    def test_membership(self):
        assert in_Q2N(F(1, 2), 4)
        assert not in_Q2N(F(3, 5), 64)
        assert in_Q2N(F(181, 256), 8)
        assert not in_Q2N(F(181, 256), 7)
        assert not in_Q2N(F(3, 2), 4)  # magnitude above 1
        assert is_dyadic(F(7, 8)) and not is_dyadic(F(1, 6))


class TestPhaseRationality:
    @pytest.mark.parametrize(
        "f,expected",
        [
            (F(0), F(1)),
            (F(1), F(-1)),
            (F(1, 2), F(0)),
            (F(1, 3), F(1, 2)),
            (F(2, 3), F(-1, 2)),
        ],
    )
    def test_rational_cases(self, f, expected):
        assert cos_phase_rationality(PhaseAngle(f)) == expected

    @pytest.mark.parametrize("f", [F(1, 4), F(3, 4), F(1, 8), F(1, 5), F(1, 6), F(5, 16)])
    def test_irrational_cases(self, f):
        assert cos_phase_rationality(PhaseAngle(f)) is None

    @settings(max_examples=200, deadline=None)
    @given(num=st.integers(0, 64), den=st.integers(1, 64))
    def test_matches_numeric(self, num, den):
        if num > den:
            num = num % (den + 1)
        f = F(num, den)
        claimed = cos_phase_rationality(PhaseAngle(f))
        actual = math.cos(math.pi * float(f))
        if claimed is not None:
            assert abs(actual - float(claimed)) < 1e-12
        else:
            # Niven: the only rational cosines are 0, +-1/2, +-1
            for q in (0.0, 0.5, -0.5, 1.0, -1.0):
                assert abs(actual - q) > 1e-9

    def test_out_of_range_phase(self):
        with pytest.raises(DomainError):
            PhaseAngle(F(3, 2))


class TestThirdSide:
    def test_orthogonal_degenerate(self):
        a = third_side(F(0), F(0), PhaseAngle(F(1, 2)))
        assert is_rational(a) == 0

    def test_quarter(self):
        a = third_side(F(1, 2), F(1, 2), PhaseAngle(F(1, 2)))
        assert (a.r1, a.r2) == (F(1, 4), F(9, 16))
        assert is_rational(a) == F(1, 4)

    def test_non_dyadic_counterexample(self):
        # rational sides with phase pi/3 CAN close rationally: 17/25
        a = third_side(F(3, 5), F(3, 5), PhaseAngle(F(1, 3)))
        assert is_rational(a) == F(17, 25)

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            third_side(F(3, 2), F(0), PhaseAngle(F(1, 2)))

    def test_value_in_unit_range(self):
        for ca, cb, f in [(F(1, 2), F(-3, 4), F(1, 8)), (F(7, 8), F(7, 8), F(3, 8))]:
            lo, hi = third_side(ca, cb, PhaseAngle(f)).value_interval()
            assert F(-1) <= lo <= hi <= F(1)


class TestIsRational:
    def test_zero_radical(self):
        a = AlgebraicCosine(F(3, 4), F(0), PhaseAngle(F(1, 8)))
        assert is_rational(a) == F(3, 4)

    def test_sqrt_two_over_two(self):
        a = third_side(F(0), F(0), PhaseAngle(F(1, 4)))
        assert is_rational(a) is None

    def test_rational_cos_square_branch(self):
        # sqrt(3/4)*cos(pi/6) = 3/4, exercising the cos^2 case with sign
        a = third_side(F(0), F(1, 2), PhaseAngle(F(1, 6)))
        assert is_rational(a) == F(3, 4)
        b = third_side(F(0), F(1, 2), PhaseAngle(F(5, 6)))
        assert is_rational(b) == F(-3, 4)

    def test_rational_cos_branch_irrational_sqrt(self):
        a = third_side(F(1, 2), F(0), PhaseAngle(F(1, 3)))
        assert is_rational(a) is None  # sqrt(3/4) irrational

    def test_sqrt_fraction(self):
        assert sqrt_fraction(F(9, 16)) == F(3, 4)
        assert sqrt_fraction(F(1, 2)) is None
        assert sqrt_fraction(F(0)) == 0
        with pytest.raises(DomainError):
            sqrt_fraction(F(-1))

    @settings(max_examples=300, deadline=None)
    @given(
        na=st.integers(-8, 8),
        nb=st.integers(-8, 8),
        pj=st.integers(0, 16),
        pd=st.sampled_from([2, 3, 4, 6, 8, 16]),
    )
    def test_verdict_consistent_with_interval(self, na, nb, pj, pd):
        ca, cb = F(na, 8), F(nb, 8)
        f = F(pj % (pd + 1), pd)
        a = third_side(ca, cb, PhaseAngle(f))
        v = is_rational(a)
        lo, hi = a.value_interval()
        if v is not None:
            assert lo <= v <= hi
            assert hi - lo < F(1, 10**30)
        else:
            # certified away from every dyadic of level <= 64
            scale = 1 << 64
            assert math.floor(hi * scale) < math.ceil(lo * scale)


class TestAdmissible:
    def test_orthogonal_phase_exception(self):
        assert admissible_third_side(F(1, 2), F(1, 2), PhaseAngle(F(1, 2)), 4)

    def test_sqrt2_rejected(self):
        assert not admissible_third_side(F(0), F(0), PhaseAngle(F(1, 4)), 4)

    def test_open_interval_phase_rejected(self):
        assert not admissible_third_side(F(1, 2), F(1, 2), PhaseAngle(F(1, 8)), 8)

    def test_precondition(self):
        with pytest.raises(DomainError):
            admissible_third_side(F(1, 3), F(0), PhaseAngle(F(1, 4)), 4)
        with pytest.raises(DomainError):
            admissible_third_side(F(1, 2), F(0), PhaseAngle(F(1, 3)), 4)


class TestSearch:
    def test_n2_empty(self):
        rep = incompatibility_search(2)
        assert rep.admissible_triples == ()
        assert rep.count_searched == (2**3 + 1) ** 2 * (2**1 - 1)

    def test_n1_vacuous(self):
        rep = incompatibility_search(1)
        assert rep.count_searched == 0
        assert rep.admissible_triples == ()

    def test_half_phase_family_nonempty(self):
        rep = incompatibility_search(2, include_upper=True)
        values = {
            (r.cos_ac, r.cos_bc, r.phase_fraction) for r in rep.admissible_triples
        }
        assert (F(1, 2), F(1, 2), F(1, 2)) in values

    def test_degenerate_catalogued(self):
        rep = incompatibility_search(2)
        assert rep.degenerate_triples
        assert all(r.degenerate and r.admissible for r in rep.degenerate_triples)
        # every degenerate triple has a unit cosine on one side
        assert all(
            abs(r.cos_ac) == 1 or abs(r.cos_bc) == 1 for r in rep.degenerate_triples
        )

    def test_search_matches_decision_procedure(self):
        # independent re-classification of the full N=2 grid
        n = 2
        rep = incompatibility_search(n)
        m = 1 << n
        catalogued = {
            (r.cos_ac, r.cos_bc, r.phase_fraction): r.value for r in rep.records()
        }
        seen = 0
        for j in range(1, 2 ** (n - 1)):
            f = PhaseAngle(F(j, m))
            for a in range(-m, m + 1):
                for b in range(-m, m + 1):
                    ca, cb = F(a, m), F(b, m)
                    v = is_rational(third_side(ca, cb, f))
                    key = (ca, cb, f.fraction)
                    if v is None:
                        assert key not in catalogued
                    else:
                        seen += 1
                        assert catalogued[key] == v
        assert seen == len(catalogued)

    def test_budget(self):
        with pytest.raises(BudgetError) as err:
            incompatibility_search(10, budget=100)
        assert err.value.budget == 100

    def test_env_budget(self, monkeypatch):
        monkeypatch.setenv("ISET_BUDGET", "50")
        with pytest.raises(BudgetError):
            incompatibility_search(4)
        monkeypatch.setenv("ISET_BUDGET", "junk")
        with pytest.raises(DomainError):
            incompatibility_search(2)


class TestSnap:
    def test_already_dyadic(self):
        assert snap_cosine(F(1, 2), 10).value == F(1, 2)

    def test_sqrt2_over_2_decimal(self):
        assert snap_cosine(F(7071, 10000), 10).value == F(181, 256)

    def test_endpoint(self):
        assert snap_cosine(F(1), 3).value == 1
        assert snap_cosine(F(-1), 3).value == -1

    def test_tie_toward_zero(self):
        assert snap_cosine(F(3, 4), 1).value == F(1, 2)
        assert snap_cosine(F(-3, 4), 1).value == F(-1, 2)

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            snap_cosine(F(11, 10), 4)

    def test_snap_phase(self):
        assert snap_phase(F(1, 3), 4).fraction == F(5, 16)
        assert snap_phase(F(1, 2), 1).fraction == F(1, 2)
        assert snap_phase(F(0), 6).fraction == 0

    @settings(max_examples=300, deadline=None)
    @given(
        num=st.integers(-10**6, 10**6),
        den=st.integers(1, 10**6),
        n=st.integers(0, 24),
    )
    def test_snap_error_bound(self, num, den, n):
        t = F(num, den)
        if abs(t) > 1:
            t = F(num % (den + 1), den + 1) if den else F(0)
        d = snap_cosine(t, n)
        assert abs(d.value - t) <= F(1, 2 ** (n + 1))

    @settings(max_examples=100, deadline=None)
    @given(num=st.integers(-64, 64), den=st.integers(64, 80), n=st.integers(0, 6))
    def test_snap_matches_bruteforce(self, num, den, n):
        t = F(num, den)
        best = min(
            (F(m, 2**n) for m in range(-(2**n), 2**n + 1)),
            key=lambda q: (abs(q - t), abs(q)),
        )
        assert snap_cosine(t, n).value == best

    def test_error_non_increasing_in_level(self):
        t = F(7071, 10000)
        errs = [abs(snap_cosine(t, n).value - t) for n in range(0, 20)]
        assert all(a >= b for a, b in zip(errs, errs[1:]))


class TestAngularError:
    def test_bound_smoke(self):
        n = 8
        worst = max(
            angular_snap_error(theta, n)
            for theta in [k * math.pi / 500 for k in range(1, 500)]
        )
        assert worst <= 2 * 2 ** (-(n - 1) / 2)


class TestInterval:
    def test_cospi_enclosure(self):
        lo, hi = interval_cospi(F(1, 4))
        # 20-digit decimal approximation of sqrt(2)/2 sits within 1e-19
        approx = F(70710678118654752440, 10**20)
        assert abs((lo + hi) / 2 - approx) < F(1, 10**19)
        assert hi - lo < F(1, 10**30)
