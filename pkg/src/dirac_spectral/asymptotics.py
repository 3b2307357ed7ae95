"""Leading-order asymptotics of phi, psi and Delta for large |lambda|.

For large |lambda| the solutions are dominated by quasi-polynomial terms:
a power of lambda times a product of sines/cosines whose rates are the
weighted subinterval widths. Crossing a jump point multiplies the order
by lambda^{deg gamma}, so the leading term threads the component-1 value
at each breakpoint through the jump polynomials. The evaluators below
build that product structure explicitly for every degree branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLeadingCoefficient
from .problem import DiracProblem, degree_profile


@dataclass(frozen=True)
class TrigFactor:
    """One oscillatory factor alpha*sin(rate*lambda) + beta*cos(rate*lambda)."""

    alpha: float
    beta: float
    rate: float

    def __call__(self, lam):
        return self.alpha * np.sin(self.rate * lam) + self.beta * np.cos(self.rate * lam)

    @property
    def magnitude(self) -> float:
        return math.hypot(self.alpha, self.beta)

    def normalized(self, lam):
        return self(lam) / self.magnitude

    def zeros(self, lam_max: float) -> list[float]:
        """All real zeros with |lambda| <= lam_max (empty for rate 0)."""
        if self.rate == 0.0:
            return []
        shift = math.atan2(self.beta, self.alpha)
        kmax = int(math.floor((lam_max * abs(self.rate) + abs(shift)) / math.pi)) + 1
        out = [
            (k * math.pi - shift) / self.rate for k in range(-kmax, kmax + 1)
        ]
        return [z for z in out if abs(z) <= lam_max]


@dataclass(frozen=True)
class LeadingTerm:
    """sign * amplitude * lambda**power * product of trigonometric factors."""

    sign: int
    amplitude: float
    power: int
    factors: tuple[TrigFactor, ...]

    def __call__(self, lam):
        lam = np.asarray(lam)
        out = self.sign * self.amplitude * lam ** self.power
        for f in self.factors:
            out = out * f(lam)
        return out if out.ndim else out[()]

    def oscillator(self, lam):
        """Product of the factors, each scaled to unit amplitude."""
        lam = np.asarray(lam)
        out = np.ones_like(lam, dtype=float)
        for f in self.factors:
            out = out * f.normalized(lam)
        return out if out.ndim else out[()]


def _gamma_leads(problem: DiracProblem, indices) -> tuple[float, int]:
    """Product of the jump-polynomial leading coefficients and the summed
    degrees over the given transmission indices."""
    amp, power = 1.0, 0
    for i in indices:
        g = problem.transmissions[i].gamma
        if g.is_zero:
            raise DegenerateLeadingCoefficient(
                f"jump polynomial at breakpoint {i + 1} is identically zero"
            )
        amp *= g.leading_coefficient
        power += g.degree
    return amp, power


def _a_pair(problem: DiracProblem) -> tuple[float, float, int]:
    prof = degree_profile(problem)
    return (
        problem.a1.coefficient(prof.m_a),
        problem.a2.coefficient(prof.m_a),
        prof.m_a,
    )


def _b_pair(problem: DiracProblem) -> tuple[float, float, int]:
    prof = degree_profile(problem)
    return (
        problem.b1.coefficient(prof.m_b),
        problem.b2.coefficient(prof.m_b),
        prof.m_b,
    )


def phi_leading_term(
    problem: DiracProblem, interval_index: int, x: float, component: int
) -> LeadingTerm:
    """Leading term of phi component 1 or 2 on subinterval interval_index."""
    if component not in (1, 2):
        raise ValueError("component must be 1 or 2")
    a1l, a2l, m_a = _a_pair(problem)
    j = interval_index
    nodes = problem.nodes
    w = problem.weights
    if j == 0:
        rate = w[0] * (x - problem.a)
        factor = TrigFactor(-a1l, a2l, rate) if component == 1 else TrigFactor(a2l, a1l, rate)
        return LeadingTerm(1, 1.0, m_a, (factor,))
    amp, extra = _gamma_leads(problem, range(j))
    factors = [TrigFactor(-a1l, a2l, w[0] * (nodes[1] - nodes[0]))]
    for i in range(2, j + 1):
        factors.append(TrigFactor(1.0, 0.0, w[i - 1] * (nodes[i] - nodes[i - 1])))
    term_rate = w[j] * (x - nodes[j])
    if component == 1:
        factors.append(TrigFactor(1.0, 0.0, term_rate))
        sign = -1 if j % 2 else 1
    else:
        factors.append(TrigFactor(0.0, 1.0, term_rate))
        sign = 1 if j % 2 else -1
    return LeadingTerm(sign, amp, m_a + extra, tuple(factors))


def psi_leading_term(
    problem: DiracProblem, interval_index: int, x: float, component: int
) -> LeadingTerm:
    """Leading term of psi component 1 or 2 on subinterval interval_index."""
    if component not in (1, 2):
        raise ValueError("component must be 1 or 2")
    b1l, b2l, m_b = _b_pair(problem)
    j = interval_index
    n = problem.n
    nodes = problem.nodes
    w = problem.weights
    if j == n:
        rate = w[n] * (x - problem.b)
        factor = TrigFactor(-b1l, b2l, rate) if component == 1 else TrigFactor(b2l, b1l, rate)
        return LeadingTerm(1, 1.0, m_b, (factor,))
    amp, extra = _gamma_leads(problem, range(j, n))
    factors = [TrigFactor(-b1l, b2l, w[n] * (nodes[n] - nodes[n + 1]))]
    for i in range(j + 1, n):
        factors.append(TrigFactor(1.0, 0.0, w[i] * (nodes[i] - nodes[i + 1])))
    term_rate = w[j] * (x - nodes[j + 1])
    if component == 1:
        factors.append(TrigFactor(1.0, 0.0, term_rate))
        sign = 1
    else:
        factors.append(TrigFactor(0.0, 1.0, term_rate))
        sign = -1
    return LeadingTerm(sign, amp, m_b + extra, tuple(factors))


def phi_leading(problem: DiracProblem, interval_index: int, x: float, lam,
                component: int = 1):
    return phi_leading_term(problem, interval_index, x, component)(lam)


def psi_leading(problem: DiracProblem, interval_index: int, x: float, lam,
                component: int = 1):
    return psi_leading_term(problem, interval_index, x, component)(lam)


def delta_leading_term(problem: DiracProblem) -> LeadingTerm:
    """Leading quasi-polynomial of the characteristic function.

    Built by inserting the leading form of phi at b into the b-boundary
    form; covers all nine degree-branch combinations uniformly through
    the highest-degree coefficient pairs.
    """
    a1l, a2l, m_a = _a_pair(problem)
    b1l, b2l, m_b = _b_pair(problem)
    n = problem.n
    nodes = problem.nodes
    w = problem.weights
    if n == 0:
        rate = w[0] * (problem.b - problem.a)
        factor = TrigFactor(
            b2l * a2l + b1l * a1l, b2l * a1l - b1l * a2l, rate
        )
        return LeadingTerm(1, 1.0, m_a + m_b, (factor,))
    amp, extra = _gamma_leads(problem, range(n))
    factors = [TrigFactor(-a1l, a2l, w[0] * (nodes[1] - nodes[0]))]
    for i in range(2, n + 1):
        factors.append(TrigFactor(1.0, 0.0, w[i - 1] * (nodes[i] - nodes[i - 1])))
    factors.append(TrigFactor(b1l, b2l, w[n] * (problem.b - nodes[n])))
    sign = -1 if n % 2 == 0 else 1
    return LeadingTerm(sign, amp, m_a + m_b + extra, tuple(factors))


def delta_leading(problem: DiracProblem, lam):
    return delta_leading_term(problem)(lam)


def asymptotic_eigenvalues(problem: DiracProblem, count: int) -> list[float]:
    """First ``count`` nonnegative zeros of the leading quasi-polynomial,
    in increasing order, with multiplicity (lambda = 0 appears with the
    multiplicity of the lambda power when it is positive)."""
    term = delta_leading_term(problem)
    density = sum(abs(f.rate) for f in term.factors) / math.pi
    if density == 0.0:
        raise DegenerateLeadingCoefficient("leading term has no oscillatory factor")
    lam_max = (count + term.power + 4) / density
    while True:
        zeros = [0.0] * term.power
        for f in term.factors:
            zeros.extend(z for z in f.zeros(lam_max) if z >= -1e-12)
        zeros = sorted(max(z, 0.0) for z in zeros)
        if len(zeros) >= count:
            return zeros[:count]
        lam_max *= 2.0


@dataclass(frozen=True)
class AsymptoticsReport:
    """Relative deviation of Delta from its leading term, off the near-zeros
    of the oscillatory product."""

    lams: np.ndarray
    deviations: np.ndarray
    dropped: int
    window_max: tuple[tuple[float, float, float], ...]


def compare_asymptotics(
    problem: DiracProblem,
    lambda_grid,
    oscillator_floor: float = 0.5,
    windows: tuple[tuple[float, float], ...] | None = None,
) -> AsymptoticsReport:
    """|Delta/leading - 1| on grid points where the unit-amplitude
    oscillator stays above ``oscillator_floor``; reports per-window maxima
    to expose the large-lambda trend."""
    from .spectrum import delta_many

    lams = np.asarray(lambda_grid, dtype=float)
    term = delta_leading_term(problem)
    keep = np.abs(term.oscillator(lams)) >= oscillator_floor
    kept = lams[keep]
    exact = np.real(delta_many(problem, kept))
    lead = np.asarray(term(kept), dtype=float)
    deviations = np.abs(exact / lead - 1.0)
    if windows is None and kept.size:
        lo, hi = float(lams.min()), float(lams.max())
        cuts = np.linspace(lo, hi, 4)
        windows = tuple((float(cuts[i]), float(cuts[i + 1])) for i in range(3))
    window_max = []
    for lo, hi in windows or ():
        m = (kept >= lo) & (kept <= hi)
        window_max.append(
            (lo, hi, float(np.max(deviations[m])) if np.any(m) else math.nan)
        )
    return AsymptoticsReport(kept, deviations, int(np.sum(~keep)), tuple(window_max))
