import math

import numpy as np
import pytest

from dirac_spectral import (
    DegenerateLeadingCoefficient,
    DiracProblem,
    RealPolynomial,
    TransmissionData,
    asymptotic_eigenvalues,
    compare_asymptotics,
    delta_leading,
    delta_leading_term,
    delta_many,
    find_eigenvalues,
    phi,
    phi_leading,
    phi_leading_term,
    psi,
    psi_leading,
    total_length,
)
from conftest import dirichlet_free

PI = math.pi


@pytest.fixture
def two_jump_problem():
    """Two polynomial jumps at pi/3 and 2 pi/3, unit weights."""
    return DiracProblem(
        0.0, PI, (1.0, 1.0, 1.0),
        RealPolynomial.zero(), RealPolynomial.constant(1.0),
        RealPolynomial.zero(), RealPolynomial.constant(1.0),
        transmissions=(
            TransmissionData(PI / 3, 1.0, RealPolynomial((0.0, 1.0))),
            TransmissionData(2 * PI / 3, 1.0, RealPolynomial((0.0, 0.0, 1.0))),
        ),
    )


class TestPhiLeading:
    def test_interval_zero_matches_exact_free(self, free_problem):
        # With zero potential and constant boundary data the leading term
        # is the whole solution.
        for lam in (3.0, 17.5):
            for x in (0.4, 2.0):
                assert phi_leading(free_problem, 0, x, lam, component=1) == pytest.approx(
                    math.cos(lam * x)
                )
                assert phi_leading(free_problem, 0, x, lam, component=2) == pytest.approx(
                    math.sin(lam * x)
                )

    def test_interval_one_sign_and_structure(self, shear_problem):
        # Component 1 on the second subinterval:
        # -gamma_lead * a_lead * lam^(r+m) cos(lam rho0 (xi - a)) sin(lam rho1 (x - xi)).
        lam, x = 9.7, 2.2
        expected = -lam * math.cos(lam * PI / 2) * math.sin(lam * (x - PI / 2))
        assert phi_leading(shear_problem, 1, x, lam, component=1) == pytest.approx(expected)
        expected2 = lam * math.cos(lam * PI / 2) * math.cos(lam * (x - PI / 2))
        assert phi_leading(shear_problem, 1, x, lam, component=2) == pytest.approx(expected2)

    def test_dominates_exact_solution_at_large_lambda(self, shear_problem):
        x = 2.0
        for lam in (200.25, 400.25):
            exact = phi(shear_problem, x, lam)
            lead1 = phi_leading(shear_problem, 1, x, lam, component=1)
            if abs(lead1) > 0.3 * lam:
                assert exact.y1 / lead1 == pytest.approx(1.0, abs=0.05)

    def test_power_bookkeeping(self, two_jump_problem):
        t = phi_leading_term(two_jump_problem, 2, 3.0, component=1)
        assert t.power == 3  # m_a=0, r1=1, r2=2
        assert len(t.factors) == 3

    def test_zero_gamma_rejected(self, theta2_problem):
        with pytest.raises(DegenerateLeadingCoefficient):
            phi_leading(theta2_problem, 1, 2.0, 10.0)


class TestPsiLeading:
    def test_last_interval_matches_exact_free(self, free_problem):
        for lam in (4.0, 23.5):
            for x in (0.4, 2.0):
                assert psi_leading(free_problem, 0, x, lam, component=1) == pytest.approx(
                    math.cos(lam * (x - PI))
                )
                assert psi_leading(free_problem, 0, x, lam, component=2) == pytest.approx(
                    math.sin(lam * (x - PI))
                )

    def test_interval_below_jump(self, shear_problem):
        # b2-dominant, one jump: component 1 on the left subinterval is
        # gamma_lead lam cos(lam rho1 (xi - b)) sin(lam rho0 (x - xi)).
        lam, x = 11.3, 0.7
        expected = lam * math.cos(lam * (PI / 2 - PI)) * math.sin(lam * (x - PI / 2))
        assert psi_leading(shear_problem, 0, x, lam, component=1) == pytest.approx(expected)
        expected2 = -lam * math.cos(lam * (PI / 2 - PI)) * math.cos(lam * (x - PI / 2))
        assert psi_leading(shear_problem, 0, x, lam, component=2) == pytest.approx(expected2)

    def test_tracks_exact_solution(self, shear_problem):
        x = 0.6
        for lam in (150.25, 300.25):
            exact = psi(shear_problem, x, lam)
            lead = psi_leading(shear_problem, 0, x, lam, component=1)
            if abs(lead) > 0.3 * lam:
                assert exact.y1 / lead == pytest.approx(1.0, abs=0.05)


class TestDeltaLeading:
    def test_free_reduction_is_exact(self, free_problem):
        lams = np.linspace(-30, 30, 61) + 0.25
        np.testing.assert_allclose(
            delta_leading(free_problem, lams), np.sin(lams * PI), atol=1e-12
        )

    def test_shear_quasi_polynomial(self, shear_problem):
        lams = np.linspace(-10, 10, 41) + 0.1
        np.testing.assert_allclose(
            delta_leading(shear_problem, lams),
            lams * np.cos(lams * PI / 2) ** 2,
            atol=1e-12,
        )

    def test_ratio_tends_to_one(self, shear_problem):
        for lam in (101.0, 201.0, 401.0):
            # even lambda keeps cos^2(lam pi / 2) = 1, far from the zeros
            lam += 1.0
            exact = float(np.real(delta_many(shear_problem, [lam])[0]))
            lead = float(delta_leading(shear_problem, lam))
            assert exact / lead == pytest.approx(1.0, abs=0.05)

    def test_equal_degree_branch(self):
        lam_poly = RealPolynomial((0.0, 1.0))
        prob = DiracProblem(
            0.0, PI, (1.0,), lam_poly, lam_poly,
            RealPolynomial.zero(), RealPolynomial.constant(1.0),
        )
        # phi = lam (cos - sin, sin + cos) rotation; Delta = lam (sin + cos)(lam pi).
        lams = np.array([50.3, 120.7])
        np.testing.assert_allclose(
            delta_leading(prob, lams),
            lams * (np.sin(lams * PI) + np.cos(lams * PI)),
            rtol=1e-12,
        )
        exact = np.real(delta_many(prob, lams))
        np.testing.assert_allclose(delta_leading(prob, lams), exact, rtol=1e-9)

    def test_exponent_matches_profile_arithmetic(self, two_jump_problem):
        term = delta_leading_term(two_jump_problem)
        assert term.power == 3  # A + m2 + m4 = 3 + 0 + 0

    def test_parity(self, shear_problem):
        # lam cos^2 is odd under lam -> -lam.
        term = delta_leading_term(shear_problem)
        for lam in (3.3, 7.1):
            assert term(-lam) == pytest.approx(-term(lam))


class TestAsymptoticEigenvalues:
    def test_free_integers(self, free_problem):
        got = asymptotic_eigenvalues(free_problem, 6)
        np.testing.assert_allclose(got, [0, 1, 2, 3, 4, 5], atol=1e-12)

    def test_shear_odd_integers_doubled(self, shear_problem):
        got = asymptotic_eigenvalues(shear_problem, 7)
        np.testing.assert_allclose(got, [0, 1, 1, 3, 3, 5, 5], atol=1e-12)

    def test_three_equal_thirds(self, two_jump_problem):
        got = asymptotic_eigenvalues(two_jump_problem, 12)
        # Factors: cos(lam pi/3) twice (initial and terminal) and one
        # interior sin(lam pi/3); lambda = 0 enters three more times from
        # the lambda^3 power. Progressions: 3(k+1/2) doubled, 3k.
        expected = [0.0, 0.0, 0.0, 0.0, 1.5, 1.5, 3.0, 4.5, 4.5, 6.0, 7.5, 7.5]
        np.testing.assert_allclose(got, expected, atol=1e-12)

    def test_attracts_true_eigenvalues(self, shear_problem):
        res = find_eigenvalues(shear_problem, 40.0, 44.0)
        approx = asymptotic_eigenvalues(shear_problem, 60)
        spacing = PI / (10.0 * total_length(shear_problem))
        for lam in res.eigenvalues:
            assert min(abs(lam - z) for z in approx) <= spacing


class TestCompareAsymptotics:
    def test_free_deviation_zero(self, free_problem):
        rep = compare_asymptotics(free_problem, np.linspace(5, 25, 101))
        assert np.max(rep.deviations) <= 1e-9

    def test_shear_trend(self, shear_problem):
        grid = np.linspace(100, 500, 1200)
        rep = compare_asymptotics(
            shear_problem, grid, windows=((100, 200), (200, 350), (350, 500))
        )
        maxima = [m for _, _, m in rep.window_max]
        assert maxima[0] <= 0.05
        assert maxima[0] >= maxima[1] >= maxima[2]

    def test_near_zero_points_dropped(self, shear_problem):
        rep = compare_asymptotics(shear_problem, np.linspace(1, 9, 33))
        assert rep.dropped > 0
