import pytest

from reebforge import (
    FiberType,
    PathSpec,
    SPHERE,
    ThetaSpec,
    sphere_certificate,
    synthesize_path,
    synthesize_theta,
    validate,
)


@pytest.fixture(scope="session")
def sphere2_cert():
    return sphere_certificate(2)


@pytest.fixture(scope="session")
def sphere3_cert():
    return sphere_certificate(3)


@pytest.fixture(scope="session")
def theta_spec():
    return validate(ThetaSpec(m=2, b=3, fibers=(SPHERE, SPHERE, SPHERE)))


@pytest.fixture(scope="session")
def theta_cert(theta_spec):
    return synthesize_theta(theta_spec)


@pytest.fixture(scope="session")
def path_spec():
    return validate(PathSpec(m=3, a=4, fibers=(SPHERE, FiberType(((1, 1),)), SPHERE)))


@pytest.fixture(scope="session")
def path_cert(path_spec):
    return synthesize_path(path_spec)
