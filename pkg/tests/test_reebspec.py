"""Spec validation and expected Reeb graph construction."""

from fractions import Fraction

import pytest

from reebforge.reebspec import (
    SPHERE,
    FiberType,
    PathSpec,
    SpecError,
    ThetaSpec,
    expected_reeb,
    validate,
)

TORUS = FiberType(((1, 1),))


def path(m=3, a=4, fibers=(SPHERE, TORUS, SPHERE)):
    return PathSpec(m=m, a=a, fibers=tuple(fibers))


class TestFiberType:
    def test_normalize_folds_mirror_index(self):
        f = FiberType(((3, 2),)).normalize(5)  # S^3 x S^1 == S^1 x S^3
        assert f.handles == ((1, 2),)

    def test_normalize_merges_counts(self):
        f = FiberType(((1, 1), (2, 1))).normalize(4)  # both fold to index 1
        assert f.handles == ((1, 2),)

    def test_index_out_of_range(self):
        with pytest.raises(SpecError):
            FiberType(((2, 1),)).normalize(3)

    def test_euler_characteristic_surfaces(self):
        assert SPHERE.euler_characteristic(3) == 2
        assert TORUS.euler_characteristic(3) == 0
        assert FiberType(((1, 2),)).euler_characteristic(3) == -2
        assert TORUS.euler_characteristic(4) is None

    def test_describe(self):
        assert SPHERE.describe(3) == "S^2"
        assert TORUS.describe(3) == "S^1 x S^1"


class TestPathValidation:
    def test_valid(self):
        spec = validate(path())
        assert spec.kind == "path"
        assert spec.count == 4

    def test_too_few_vertices(self):
        with pytest.raises(SpecError, match="a>3"):
            validate(path(a=3, fibers=(SPHERE, TORUS)))

    def test_dimension_too_low(self):
        with pytest.raises(SpecError, match="m>2"):
            validate(path(m=2))

    def test_fiber_count_mismatch(self):
        with pytest.raises(SpecError, match="edge fibers"):
            validate(path(fibers=(SPHERE, TORUS)))

    def test_end_fibers_must_be_spheres(self):
        with pytest.raises(SpecError, match="sphere"):
            validate(path(fibers=(TORUS, TORUS, SPHERE)))

    def test_adjacent_sphere_fibers_rejected(self):
        with pytest.raises(SpecError, match="adjacent"):
            validate(path(a=5, fibers=(SPHERE, SPHERE, TORUS, SPHERE)))


class TestThetaValidation:
    def test_valid(self):
        spec = validate(ThetaSpec(m=2, b=3, fibers=(SPHERE,) * 3))
        assert spec.kind == "theta"
        assert spec.count == 3

    def test_b_too_small(self):
        with pytest.raises(SpecError, match="b>1"):
            validate(ThetaSpec(m=2, b=1, fibers=(SPHERE,)))

    def test_m2_fibers_must_be_circles(self):
        with pytest.raises(SpecError, match="circle"):
            validate(ThetaSpec(m=2, b=2, fibers=(SPHERE, TORUS)))

    def test_m3_fibers_normalized(self):
        spec = validate(ThetaSpec(m=3, b=2, fibers=(TORUS, SPHERE)))
        assert spec.fibers[0].handles == ((1, 1),)


class TestExpectedReeb:
    def test_path_graph(self):
        g = expected_reeb(validate(path()), [-3, -1, 1, 3])
        assert g.degree_sequence == [1, 1, 2, 2]
        assert g.interval_component_counts() == [1, 1, 1]
        assert len(g.edges) == 3
        mid = g.edges_over_interval(Fraction(-1), Fraction(1))
        assert mid == [TORUS]

    def test_theta_graph(self):
        spec = validate(ThetaSpec(m=2, b=3, fibers=(SPHERE,) * 3))
        g = expected_reeb(spec, [-3, -1, 1, 3])
        assert g.degree_sequence == [1, 1, 4, 4]
        assert g.interval_component_counts() == [1, 3, 1]
        assert len(g.edges) == 5

    def test_value_count_checked(self):
        with pytest.raises(SpecError):
            expected_reeb(validate(path()), [-1, 0, 1])

    def test_values_must_increase(self):
        with pytest.raises(SpecError):
            expected_reeb(validate(path()), [0, 1, 1, 2])
