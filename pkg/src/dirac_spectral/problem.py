"""Problem data model: interval, weights, potential, boundary and transmission data.

All types are immutable after construction and safe to share across
concurrent workers. Construction is permissive; :func:`validate` reports
every violated invariant instead of raising on the first one.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import ZeroLeadingCoefficient
from .polynomial import RealPolynomial, as_polynomial

# A coefficient entry of a potential piece: a constant, x-polynomial
# coefficients (constant term first), or a caller-supplied evaluator.
CoefficientLike = float | tuple[float, ...] | Callable[[float], float]


def _eval_coefficient(c: CoefficientLike, x: float) -> float:
    if callable(c):
        return float(c(x))
    if isinstance(c, tuple):
        acc = 0.0
        for v in reversed(c):
            acc = acc * x + v
        return acc
    return float(c)


def _norm_coefficient(c) -> CoefficientLike:
    if callable(c):
        return c
    if isinstance(c, (int, float)):
        return float(c)
    return tuple(float(v) for v in c)


@dataclass(frozen=True)
class PotentialPiece:
    """One piece of the potential matrix: entries p, q, r on a subinterval."""

    p: CoefficientLike = 0.0
    q: CoefficientLike = 0.0
    r: CoefficientLike = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", _norm_coefficient(self.p))
        object.__setattr__(self, "q", _norm_coefficient(self.q))
        object.__setattr__(self, "r", _norm_coefficient(self.r))

    @property
    def is_zero(self) -> bool:
        return self.p == 0.0 and self.q == 0.0 and self.r == 0.0

    @property
    def is_constant(self) -> bool:
        return all(isinstance(c, float) for c in (self.p, self.q, self.r))

    def omega(self, x: float) -> tuple[float, float, float]:
        """Evaluate (p, q, r) at position x."""
        return (
            _eval_coefficient(self.p, x),
            _eval_coefficient(self.q, x),
            _eval_coefficient(self.r, x),
        )

    def magnitude_bound(self, x0: float, x1: float, samples: int = 9) -> float:
        """Crude sup-norm estimate of |p|,|q|,|r| on [x0, x1] (sampled)."""
        if self.is_constant:
            return max(abs(self.p), abs(self.q), abs(self.r))
        m = 0.0
        for k in range(samples):
            x = x0 + (x1 - x0) * k / (samples - 1)
            m = max(m, *(abs(v) for v in self.omega(x)))
        return m


@dataclass(frozen=True)
class PotentialSpec:
    """Piecewise potential on [a, b].

    ``breakpoints`` are the interior positions separating the pieces
    (len(pieces) == len(breakpoints) + 1). They need not coincide with the
    weight partition: a finer potential partition is intersected with the
    weight subintervals during propagation.
    """

    pieces: tuple[PotentialPiece, ...] = (PotentialPiece(),)
    breakpoints: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "pieces", tuple(self.pieces))
        object.__setattr__(self, "breakpoints", tuple(float(x) for x in self.breakpoints))

    @classmethod
    def zero(cls) -> "PotentialSpec":
        return cls((PotentialPiece(),), ())

    @classmethod
    def constant(cls, p: float, q: float, r: float) -> "PotentialSpec":
        return cls((PotentialPiece(p, q, r),), ())

    @classmethod
    def from_pieces(
        cls, pieces: Sequence[PotentialPiece], breakpoints: Sequence[float] = ()
    ) -> "PotentialSpec":
        return cls(tuple(pieces), tuple(breakpoints))

    @property
    def is_zero(self) -> bool:
        return all(p.is_zero for p in self.pieces)

    def piece_at(self, x: float) -> PotentialPiece:
        """Piece covering x (left-closed convention at interior breakpoints)."""
        return self.pieces[bisect.bisect_right(self.breakpoints, x)]

    def segments(self, x0: float, x1: float) -> list[tuple[float, float, PotentialPiece]]:
        """Partition [x0, x1] into maximal runs covered by a single piece."""
        cuts = [x0] + [c for c in self.breakpoints if x0 < c < x1] + [x1]
        return [
            (lo, hi, self.piece_at(0.5 * (lo + hi)))
            for lo, hi in zip(cuts[:-1], cuts[1:])
        ]


@dataclass(frozen=True)
class TransmissionData:
    """Jump data at an interior point: position xi, coupling theta, polynomial gamma."""

    xi: float
    theta: float
    gamma: RealPolynomial = field(default_factory=RealPolynomial.zero)

    def __post_init__(self) -> None:
        object.__setattr__(self, "xi", float(self.xi))
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "gamma", as_polynomial(self.gamma))


@dataclass(frozen=True)
class DiracProblem:
    """A complete problem instance on [a, b].

    ``weights`` holds one positive constant per subinterval of the
    partition induced by the transmission points, so
    ``len(weights) == len(transmissions) + 1``.
    """

    a: float
    b: float
    weights: tuple[float, ...]
    a1: RealPolynomial
    a2: RealPolynomial
    b1: RealPolynomial
    b2: RealPolynomial
    transmissions: tuple[TransmissionData, ...] = ()
    potential: PotentialSpec = field(default_factory=PotentialSpec.zero)

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        for name in ("a1", "a2", "b1", "b2"):
            object.__setattr__(self, name, as_polynomial(getattr(self, name)))
        object.__setattr__(self, "transmissions", tuple(self.transmissions))

    @property
    def n(self) -> int:
        """Number of transmission points."""
        return len(self.transmissions)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return tuple(t.xi for t in self.transmissions)

    @property
    def nodes(self) -> tuple[float, ...]:
        """a, xi_1, ..., xi_n, b."""
        return (self.a, *self.breakpoints, self.b)

    def subinterval(self, i: int) -> tuple[float, float]:
        nodes = self.nodes
        return nodes[i], nodes[i + 1]

    def subinterval_index(self, x: float, side: str = "-") -> int:
        """Index of the subinterval containing x.

        At an interior breakpoint the result follows ``side``: "-" picks
        the subinterval ending at x (left limit), "+" the one starting
        there.
        """
        cuts = self.breakpoints
        if side == "-":
            i = bisect.bisect_left(cuts, x)
        else:
            i = bisect.bisect_right(cuts, x)
        return min(max(i, 0), len(self.weights) - 1)

    def potential_segments(self, i: int) -> list[tuple[float, float, PotentialPiece]]:
        """Constant-weight subinterval i split at interior potential breakpoints."""
        x0, x1 = self.subinterval(i)
        return self.potential.segments(x0, x1)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    failures: tuple[str, ...] = ()


def validate(problem: DiracProblem) -> ValidationReport:
    """Check every structural invariant; the report lists all violations."""
    failures: list[str] = []
    if not problem.a < problem.b:
        failures.append(f"interval endpoints not ordered: a={problem.a} >= b={problem.b}")
    for i, w in enumerate(problem.weights):
        if not (math.isfinite(w) and w > 0.0):
            failures.append(f"nonpositive weight rho_{i} = {w}")
    if len(problem.weights) != len(problem.transmissions) + 1:
        failures.append(
            f"weight count {len(problem.weights)} != transmissions + 1 "
            f"({len(problem.transmissions) + 1})"
        )
    xis = [t.xi for t in problem.transmissions]
    for i, (t, xi) in enumerate(zip(problem.transmissions, xis), start=1):
        if t.theta == 0.0:
            failures.append(f"theta must be nonzero at transmission {i}")
        if not problem.a < xi < problem.b:
            failures.append(f"breakpoint xi_{i} = {xi} outside ({problem.a}, {problem.b})")
    if any(x2 <= x1 for x1, x2 in zip(xis[:-1], xis[1:])):
        failures.append("unordered breakpoints")
    if problem.a1.is_zero and problem.a2.is_zero:
        failures.append("boundary polynomials a1, a2 both identically zero")
    if problem.b1.is_zero and problem.b2.is_zero:
        failures.append("boundary polynomials b1, b2 both identically zero")
    bps = problem.potential.breakpoints
    if any(x2 <= x1 for x1, x2 in zip(bps[:-1], bps[1:])):
        failures.append("unordered potential breakpoints")
    if len(problem.potential.pieces) != len(bps) + 1:
        failures.append("potential piece count does not match its breakpoints")
    for j, piece in enumerate(problem.potential.pieces):
        for name in ("p", "q", "r"):
            c = getattr(piece, name)
            if isinstance(c, float) and not math.isfinite(c):
                failures.append(f"non-finite potential entry {name} in piece {j}")
            if isinstance(c, tuple) and not all(math.isfinite(v) for v in c):
                failures.append(f"non-finite potential coefficients {name} in piece {j}")
    return ValidationReport(ok=not failures, failures=tuple(failures))


# ---------------------------------------------------------------------------
# Degree bookkeeping for the asymptotic branch selection.

CASE_A2 = "a2-dominant"
CASE_A1 = "a1-dominant"
CASE_B2 = "b2-dominant"
CASE_B1 = "b1-dominant"
CASE_EQUAL = "equal"


@dataclass(frozen=True)
class DegreeProfile:
    """Polynomial degrees and the branch tags driving the asymptotic formulas."""

    m1: int | None
    m2: int | None
    m3: int | None
    m4: int | None
    m_a: int
    m_b: int
    A: int
    case_a: str
    case_b: str


def _classify(p_one: RealPolynomial, p_two: RealPolynomial, tag_one: str, tag_two: str) -> str:
    """Branch tag for a polynomial pair; identically zero counts as dominated."""
    if p_one.is_zero and p_two.is_zero:
        raise ZeroLeadingCoefficient(
            "cannot classify a branch: both polynomials are identically zero"
        )
    if p_one.is_zero:
        return tag_two
    if p_two.is_zero:
        return tag_one
    d1, d2 = p_one.degree, p_two.degree
    if d1 > d2:
        return tag_one
    if d2 > d1:
        return tag_two
    return CASE_EQUAL


def degree_profile(problem: DiracProblem) -> DegreeProfile:
    """Degrees, their maxima, A = sum of transmission degrees, and case tags."""
    case_a = _classify(problem.a1, problem.a2, CASE_A1, CASE_A2)
    case_b = _classify(problem.b1, problem.b2, CASE_B1, CASE_B2)
    m1, m2 = problem.a1.degree, problem.a2.degree
    m3, m4 = problem.b1.degree, problem.b2.degree
    m_a = max(d for d in (m1, m2) if d is not None)
    m_b = max(d for d in (m3, m4) if d is not None)
    A = sum(t.gamma.degree or 0 for t in problem.transmissions)
    return DegreeProfile(m1, m2, m3, m4, m_a, m_b, A, case_a, case_b)


def total_length(problem: DiracProblem) -> float:
    """Weighted length S = sum_i rho_i * width_i, the oscillation scale."""
    nodes = problem.nodes
    return sum(
        rho * (x1 - x0)
        for rho, x0, x1 in zip(problem.weights, nodes[:-1], nodes[1:])
    )
