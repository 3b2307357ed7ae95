import math

import numpy as np
import pytest

from dirac_spectral import (
    DiracProblem,
    PotentialPiece,
    PotentialSpec,
    RealPolynomial,
    TransmissionData,
)

PI = math.pi


def dirichlet_free(a=0.0, b=PI, rho=1.0):
    """Zero-potential problem with constant boundary polynomials."""
    return DiracProblem(
        a=a, b=b, weights=(rho,),
        a1=RealPolynomial.zero(), a2=RealPolynomial.constant(1.0),
        b1=RealPolynomial.zero(), b2=RealPolynomial.constant(1.0),
    )


@pytest.fixture
def free_problem():
    return dirichlet_free()


@pytest.fixture
def shear_problem():
    """Free problem plus one jump at pi/2 with unit coupling and gamma = lambda.

    Closed form: Delta(lambda) = sin(lambda pi) + lambda cos(lambda pi / 2)^2.
    """
    return DiracProblem(
        a=0.0, b=PI, weights=(1.0, 1.0),
        a1=RealPolynomial.zero(), a2=RealPolynomial.constant(1.0),
        b1=RealPolynomial.zero(), b2=RealPolynomial.constant(1.0),
        transmissions=(TransmissionData(PI / 2, 1.0, RealPolynomial((0.0, 1.0))),),
    )


@pytest.fixture
def theta2_problem():
    """Free problem plus a pure coupling jump theta = 2 at pi/2.

    Closed form: phi2(pi, lambda) = (5/4) sin(lambda pi).
    """
    return DiracProblem(
        a=0.0, b=PI, weights=(1.0, 1.0),
        a1=RealPolynomial.zero(), a2=RealPolynomial.constant(1.0),
        b1=RealPolynomial.zero(), b2=RealPolynomial.constant(1.0),
        transmissions=(TransmissionData(PI / 2, 2.0, RealPolynomial.zero()),),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20260824)


def random_polynomial(rng, max_degree=2, nonzero=True):
    deg = int(rng.integers(0, max_degree + 1))
    coeffs = rng.uniform(-1.0, 1.0, deg + 1)
    if nonzero and abs(coeffs[-1]) < 0.05:
        coeffs[-1] = 0.5 * np.sign(coeffs[-1] or 1.0)
    return RealPolynomial(tuple(coeffs))


def random_problem(rng, max_transmissions=3, with_potential=True, b=3.0):
    """A well-formed random instance for property tests."""
    n = int(rng.integers(0, max_transmissions + 1))
    xis = np.sort(rng.uniform(0.1 * b, 0.9 * b, n))
    while np.any(np.diff(xis) < 1e-3):
        xis = np.sort(rng.uniform(0.1 * b, 0.9 * b, n))
    transmissions = tuple(
        TransmissionData(
            float(x),
            float(rng.uniform(0.5, 2.0) * rng.choice([-1.0, 1.0])),
            random_polynomial(rng),
        )
        for x in xis
    )
    if with_potential:
        pieces = tuple(
            PotentialPiece(*rng.uniform(-1.0, 1.0, 3)) for _ in range(n + 1)
        )
        potential = PotentialSpec(pieces, tuple(float(x) for x in xis))
    else:
        potential = PotentialSpec.zero()
    return DiracProblem(
        a=0.0, b=b, weights=tuple(rng.uniform(0.5, 2.0, n + 1)),
        a1=random_polynomial(rng), a2=random_polynomial(rng),
        b1=random_polynomial(rng), b2=random_polynomial(rng),
        transmissions=transmissions, potential=potential,
    )
