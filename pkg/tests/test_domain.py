"""Bounded algebraic domains: hole removal rules and numeric validation."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from reebforge.domain import (
    DomainError,
    Ellipsoid,
    ball,
    remove_ellipsoids,
    sqrt_lower,
    sqrt_upper,
    validate_domain,
)

F = Fraction


def hole(cx, cy, rx=F(1, 2), ry=F(1, 2)):
    return Ellipsoid(center=(F(cx), F(cy)), semiaxes_sq=(rx * rx, ry * ry))


positive_fractions = st.builds(
    F, st.integers(min_value=1, max_value=10**6), st.integers(min_value=1, max_value=10**3)
)


class TestSqrtBounds:
    @given(positive_fractions)
    def test_bracket_and_tightness(self, v):
        lo, hi = sqrt_lower(v), sqrt_upper(v)
        assert lo * lo <= v <= hi * hi
        assert 0 <= hi - lo <= F(1, 10**6) * max(1, hi)

    def test_exact_squares(self):
        assert sqrt_lower(F(9, 4)) == F(3, 2)
        assert sqrt_upper(F(9, 4)) == F(3, 2)


class TestBall:
    def test_witness_and_factor(self):
        d = ball(2, (0, 0), 1)
        assert d.contains(d.witness)
        assert d.factors[0].eval([F(0), F(0)]) == 1
        assert d.factors[0].eval([F(1), F(0)]) == 0

    def test_validates(self):
        report = validate_domain(ball(2, (0, 0), 1), grid_step=F(1, 20))
        assert report.ok, report.failures
        assert report.component_count == 1


class TestRemoveEllipsoids:
    def test_single_hole_ok(self):
        d = remove_ellipsoids(ball(2, (0, 0), 3), [hole(1, 0)])
        assert len(d.factors) == 2
        assert len(d.holes) == 1
        report = validate_domain(d, grid_step=F(1, 20))
        assert report.ok, report.failures

    def test_overlapping_holes_rejected(self):
        with pytest.raises(DomainError) as err:
            remove_ellipsoids(ball(2, (0, 0), 3), [hole(1, 0), hole(F(3, 2), 0)])
        assert "hole" in str(err.value)

    def test_hole_escaping_domain_rejected(self):
        with pytest.raises(DomainError):
            remove_ellipsoids(ball(2, (0, 0), 1), [hole(1, 0)])

    def test_witness_relocated_out_of_hole(self):
        d = remove_ellipsoids(ball(2, (0, 0), 3), [hole(0, 0)])
        assert d.contains(d.witness)  # original centre witness sits inside the hole

    def test_removal_makes_hole_boundary(self):
        d = remove_ellipsoids(ball(2, (0, 0), 3), [hole(1, 0)])
        # inside the hole every factor product is negative territory
        inside_hole = [F(1), F(0)]
        assert d.factors[1].eval(inside_hole) < 0


class TestValidateDomain:
    def test_disjoint_zero_sets_enforced(self):
        from reebforge.domain import AlgebraicDomain

        d0 = ball(2, (0, 0), 3)
        clear = d0.factors + (hole(F(3, 2), 0).factor(),)  # clearance 1
        d = AlgebraicDomain(
            ambient_dim=2,
            factors=clear,
            witness=(F(0), F(2)),
            bounding_box=d0.bounding_box,
        )
        report = validate_domain(d, grid_step=F(1, 30))
        assert report.ok, report.failures

        crossing = d0.factors + (hole(F(11, 4), 0).factor(),)  # pokes through r=3
        d2 = AlgebraicDomain(
            ambient_dim=2,
            factors=crossing,
            witness=(F(0), F(2)),
            bounding_box=d0.bounding_box,
        )
        report2 = validate_domain(d2, grid_step=F(1, 60))
        assert not report2.ok
        assert any(name == "zero_sets_disjoint" for name, _ in report2.failures)

    def test_unbounded_interior_detected(self):
        from reebforge.domain import AlgebraicDomain
        from reebforge.poly import Polynomial

        # half-plane x > 0 clipped only by the box: flagged as unbounded
        d = AlgebraicDomain(
            ambient_dim=2,
            factors=(Polynomial.variable(2, 0),),
            witness=(F(1), F(0)),
            bounding_box=((F(-2), F(2)), (F(-2), F(2))),
        )
        report = validate_domain(d, grid_step=F(1, 10))
        assert not report.ok
        assert any(name == "bounded" for name, _ in report.failures)
