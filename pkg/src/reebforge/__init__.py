"""reebforge: explicit real polynomials with prescribed level-set topology.

Given a target Reeb graph shape (path or theta) and prescribed regular-fiber
topology, synthesize an exact-rational polynomial whose zero set is a closed
non-singular manifold realizing them under the first-coordinate projection,
together with a certificate of predictions that the numeric verifier checks.
"""

from .domain import AlgebraicDomain, DomainError, Ellipsoid, ball, remove_ellipsoids
from .lifting import LiftError, LiftTower, LiftedHypersurface, lift_once, lift_tower
from .poly import FactoredForm, Gradient, Polynomial
from .reebspec import (
    SPHERE,
    ExpectedReeb,
    FiberType,
    PathSpec,
    SpecError,
    ThetaSpec,
    ValidatedSpec,
    expected_reeb,
    validate,
)
from .synth import (
    Certificate,
    SynthesisError,
    SynthParams,
    certificate_from_dict,
    certificate_to_dict,
    predict_manifold,
    sphere_certificate,
    synthesize_path,
    synthesize_theta,
)
from .verify import VerificationReport, VerifyConfig, verify

__all__ = [
    "AlgebraicDomain",
    "Certificate",
    "DomainError",
    "Ellipsoid",
    "ExpectedReeb",
    "FactoredForm",
    "FiberType",
    "Gradient",
    "LiftError",
    "LiftTower",
    "LiftedHypersurface",
    "PathSpec",
    "Polynomial",
    "SPHERE",
    "SpecError",
    "SynthParams",
    "SynthesisError",
    "ThetaSpec",
    "ValidatedSpec",
    "VerificationReport",
    "VerifyConfig",
    "ball",
    "certificate_from_dict",
    "certificate_to_dict",
    "expected_reeb",
    "lift_once",
    "lift_tower",
    "predict_manifold",
    "remove_ellipsoids",
    "sphere_certificate",
    "synthesize_path",
    "synthesize_theta",
    "validate",
    "verify",
]

__version__ = "0.1.0"
