"""Certificate synthesis: layouts, predictions, determinism, serialization."""

import json
from fractions import Fraction

import pytest

from reebforge import (
    FiberType,
    PathSpec,
    SPHERE,
    SynthesisError,
    ThetaSpec,
    certificate_from_dict,
    certificate_to_dict,
    sphere_certificate,
    synthesize_path,
    synthesize_theta,
    validate,
)
from reebforge.poly import Polynomial

F = Fraction
TORUS = FiberType(((1, 1),))


def unit_sphere_poly(n):
    p = Polynomial.constant(n, 1)
    for j in range(n):
        p = p - Polynomial.variable(n, j) ** 2
    return p


class TestSphereCertificate:
    def test_golden_polynomial(self, sphere3_cert):
        assert sphere3_cert.f_expanded == unit_sphere_poly(4)
        assert sphere3_cert.ambient == 4

    def test_predictions(self, sphere2_cert):
        assert sphere2_cert.predicted_critical_count == 2
        assert sphere2_cert.predicted_critical_values == (F(-1), F(1))
        assert sphere2_cert.predicted_manifold.text == "S^2"
        assert len(sphere2_cert.expected.edges) == 1


class TestPathSynthesis:
    def test_certificate_shape(self, path_cert):
        assert path_cert.kind == "path"
        assert path_cert.ambient == 4
        assert path_cert.predicted_singular_values == (F(-3), F(-1), F(1), F(3))
        # one hole (the torus handle): two ends plus two hole tangencies
        assert path_cert.predicted_critical_count == 4
        assert path_cert.predicted_manifold.summands == ((1, 1),)

    def test_holes_pin_interval_exactly(self, path_cert):
        (holes0,) = path_cert.layout.holes
        (hole,) = holes0
        half_gap = (path_cert.layout.t[2] - path_cert.layout.t[1]) / 2
        assert hole.ellipsoid.semiaxes_sq[0] == half_gap * half_gap
        assert hole.ellipsoid.center[0] == path_cert.layout.midpoint(2)

    def test_critical_count_scales_with_handles(self):
        spec = validate(
            PathSpec(m=3, a=5, fibers=(SPHERE, TORUS, FiberType(((1, 2),)), SPHERE))
        )
        cert = synthesize_path(spec)
        assert cert.predicted_critical_count == 2 * (1 + 3)
        assert cert.predicted_manifold.summands == ((1, 3),)

    def test_zero_set_matches_factored_form(self, path_cert):
        assert path_cert.f_expanded == path_cert.f_factored.expand()


class TestThetaSynthesis:
    def test_certificate_shape(self, theta_cert):
        assert theta_cert.kind == "theta"
        assert theta_cert.ambient == 3
        assert theta_cert.predicted_critical_count == 6
        # two separators between three corridors yield a genus-2 surface
        assert theta_cert.predicted_manifold.summands == ((1, 2),)

    def test_separator_count(self, theta_cert):
        seps = [h for h in theta_cert.layout.all_holes() if h.handle_index == 0]
        assert len(seps) == 2

    def test_m3_theta_with_handles(self):
        spec = validate(ThetaSpec(m=3, b=2, fibers=(TORUS, SPHERE)))
        cert = synthesize_theta(spec)
        assert cert.ambient == 4
        assert cert.predicted_critical_count == 2 * (1 + 1 + 1)


class TestDeterminismAndSerialization:
    def test_byte_identical_resynthesis(self, theta_spec):
        a = json.dumps(certificate_to_dict(synthesize_theta(theta_spec)))
        b = json.dumps(certificate_to_dict(synthesize_theta(theta_spec)))
        assert a == b

    def test_round_trip_path(self, path_cert):
        again = certificate_from_dict(certificate_to_dict(path_cert))
        assert again == path_cert
        assert again.f_expanded == path_cert.f_expanded

    def test_round_trip_preserves_exact_rationals(self, theta_cert):
        data = json.loads(json.dumps(certificate_to_dict(theta_cert)))
        again = certificate_from_dict(data)
        assert again.predicted_singular_values == theta_cert.predicted_singular_values
        assert again.bounding_box == theta_cert.bounding_box
