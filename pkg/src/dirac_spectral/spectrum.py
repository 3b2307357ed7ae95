"""Characteristic functions, eigenvalue location, eigen-elements and norming.

The characteristic function Delta(lambda) is the Wronskian of the two
boundary-normalized solutions; its real zeros are the eigenvalues. The
eigen-element machinery extends an eigenfunction by the finite chains of
values that make the polynomial boundary and jump conditions expressible
as a linear eigenvalue problem, and the norming constant mu_k is the
squared norm of that extended element.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ClosureViolated,
    GridTooCoarse,
    NotAnEigenvalue,
    WindowTooWide,
)
from .polynomial import RealPolynomial, eval_poly
from .problem import DiracProblem, degree_profile, total_length
from .propagator import phi_components, psi_components, sample_phi


def delta_many(problem: DiracProblem, lams, check: bool = False) -> np.ndarray:
    """Delta(lambda) on an array of lambda values.

    With ``check=True`` the value is also computed from the opposite
    endpoint (the Wronskian evaluated at a instead of b) and the two are
    asserted to agree within 1e-7*(1+|Delta|).
    """
    lams = np.atleast_1d(np.asarray(lams))
    yb = phi_components(problem, problem.b, lams)
    d = eval_poly(problem.b2, lams) * yb[1] - eval_poly(problem.b1, lams) * yb[0]
    if check:
        ya = psi_components(problem, problem.a, lams)
        d_a = eval_poly(problem.a1, lams) * ya[0] - eval_poly(problem.a2, lams) * ya[1]
        err = np.max(np.abs(d - d_a) / (1.0 + np.abs(d)))
        if err > 1e-7:
            raise AssertionError(
                f"characteristic function endpoint mismatch: {err:.3e}"
            )
    return d


def delta_both(problem: DiracProblem, lams) -> tuple[np.ndarray, np.ndarray]:
    """Delta computed from the b endpoint and from the a endpoint."""
    lams = np.atleast_1d(np.asarray(lams))
    yb = phi_components(problem, problem.b, lams)
    d_b = eval_poly(problem.b2, lams) * yb[1] - eval_poly(problem.b1, lams) * yb[0]
    ya = psi_components(problem, problem.a, lams)
    d_a = eval_poly(problem.a1, lams) * ya[0] - eval_poly(problem.a2, lams) * ya[1]
    return d_b, d_a


def delta(problem: DiracProblem, lam: complex, check: bool = False):
    """Delta at a single lambda."""
    return delta_many(problem, lam, check=check)[0]


def delta1_many(problem: DiracProblem, lams) -> np.ndarray:
    """First component of psi at a: the characteristic function of the
    auxiliary problem in which the left boundary condition becomes y1(a)=0."""
    lams = np.atleast_1d(np.asarray(lams))
    return psi_components(problem, problem.a, lams)[0]


def delta1(problem: DiracProblem, lam: complex):
    return delta1_many(problem, lam)[0]


# ---------------------------------------------------------------------------
# Eigenvalue search on the real line.

@dataclass(frozen=True)
class SearchOptions:
    tol: float = 1e-10
    near_zero: float = 1e-6
    max_samples: int = 5_000_000
    max_bisections: int = 200
    norming: bool = False


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: tuple[float, ...]
    residuals: tuple[float, ...]
    brackets: tuple[tuple[float, float], ...]
    norming: tuple[float, ...] | None = None
    suspected: tuple[float, ...] = ()


def find_eigenvalues(
    problem: DiracProblem,
    lambda_min: float,
    lambda_max: float,
    opts: SearchOptions | None = None,
) -> SpectrumResult:
    """Locate real zeros of Delta on [lambda_min, lambda_max].

    The window is scanned with step pi/(4 S), S the weighted interval
    length, so the shortest oscillation of the leading quasi-polynomial
    is sampled at least four times; each sign change is refined by
    bisection. Local minima of |Delta| below ``opts.near_zero`` without a
    sign change are reported as suspected even-multiplicity zeros.
    """
    if not lambda_min < lambda_max:
        raise ValueError(f"empty window [{lambda_min}, {lambda_max}]")
    opts = opts or SearchOptions()
    step = math.pi / (4.0 * total_length(problem))
    nsamp = int(math.ceil((lambda_max - lambda_min) / step)) + 1
    if nsamp > opts.max_samples:
        raise WindowTooWide(
            f"window needs {nsamp} samples, budget {opts.max_samples}"
        )
    grid = np.linspace(lambda_min, lambda_max, nsamp)
    d = np.real(delta_many(problem, grid))

    exact = np.flatnonzero(d == 0.0)
    s = np.sign(d)
    flips = np.flatnonzero(s[:-1] * s[1:] < 0)

    lo, hi = grid[flips].copy(), grid[flips + 1].copy()
    slo = s[flips]
    for _ in range(opts.max_bisections):
        mid = 0.5 * (lo + hi)
        done = (hi - lo) <= opts.tol * np.maximum(1.0, np.abs(mid))
        if np.all(done):
            break
        fm = np.real(delta_many(problem, mid))
        hit = fm == 0.0
        same = np.sign(fm) == slo
        lo = np.where(~done & same & ~hit, mid, lo)
        hi = np.where(~done & ~same & ~hit, mid, hi)
        lo = np.where(~done & hit, mid, lo)
        hi = np.where(~done & hit, mid, hi)

    roots = list(0.5 * (lo + hi))
    brackets = [(float(a), float(b)) for a, b in zip(lo, hi)]
    for i in exact:
        roots.append(float(grid[i]))
        brackets.append((float(grid[i]), float(grid[i])))

    order = np.argsort(roots)
    eigs, brs = [], []
    for k in order:
        lam = float(roots[k])
        if eigs and abs(lam - eigs[-1]) <= opts.tol * max(1.0, abs(lam)):
            continue
        eigs.append(lam)
        brs.append(brackets[k])
    residuals = [float(abs(v)) for v in delta_many(problem, np.array(eigs))] if eigs else []

    # Local minima of |Delta| that nearly touch zero without crossing.
    absd = np.abs(d)
    interior = np.flatnonzero(
        (absd[1:-1] < opts.near_zero)
        & (absd[1:-1] <= absd[:-2])
        & (absd[1:-1] <= absd[2:])
        & (s[:-2] * s[2:] > 0)
    )
    suspected = tuple(
        float(grid[i + 1])
        for i in interior
        if not any(abs(grid[i + 1] - e) < 2 * step for e in eigs)
    )

    norming = None
    if opts.norming:
        norming = tuple(h_norm_sq(eigen_element(problem, e), problem) for e in eigs)
    return SpectrumResult(
        tuple(eigs), tuple(residuals), tuple(brs), norming, suspected
    )


# ---------------------------------------------------------------------------
# Eigenfunctions and eigen-elements.

@dataclass(frozen=True)
class Eigenfunction:
    grid: np.ndarray
    values: np.ndarray  # shape (2, len(grid))
    boundary_residual: float


def eigenfunction(
    problem: DiracProblem, lambda_k: float, grid, tol: float = 1e-6
) -> Eigenfunction:
    """phi(., lambda_k) sampled on the grid, with the b-boundary residual.

    phi satisfies the a-boundary and all jump conditions by construction;
    at an eigenvalue the residual of the b-boundary condition is small.
    """
    d = abs(delta(problem, lambda_k))
    if d > tol:
        raise NotAnEigenvalue(f"|Delta({lambda_k})| = {d:.3e} exceeds {tol}")
    grid = np.asarray(grid, dtype=float)
    values = sample_phi(problem, grid, lambda_k)
    yb = phi_components(problem, problem.b, np.array([lambda_k]))[:, 0]
    res = abs(
        eval_poly(problem.b2, lambda_k) * yb[1]
        - eval_poly(problem.b1, lambda_k) * yb[0]
    )
    return Eigenfunction(grid, values, float(res))


@dataclass(frozen=True)
class FunctionSegment:
    """Samples of the function part on one constant-weight subinterval."""

    xs: np.ndarray
    ys: np.ndarray  # shape (2, len(xs))


@dataclass(frozen=True)
class HElement:
    """Eigen-element: function part plus the finite boundary/jump chains."""

    lam: float
    segments: tuple[FunctionSegment, ...]
    Y1: tuple[float, ...]
    Y2: tuple[float, ...]
    Y3: tuple[tuple[float, ...], ...]
    closure_residual: float = 0.0


def _chain(poly1: RealPolynomial, poly2: RealPolynomial, y1: float, y2: float,
           lam: float, m: int) -> tuple[list[float], float]:
    """Recursive chain for one boundary form.

    Entries: Y_1 = c_{m} , Y_{i+1} = lam*Y_i + c_{m-i} with
    c_k = poly2.coefficient(k)*y2 - poly1.coefficient(k)*y1. The terminal
    combination lam*Y_m + c_0 telescopes to poly2(lam)*y2 - poly1(lam)*y1,
    the full boundary form, returned as the closure value.
    """
    def c(k: int) -> float:
        return poly2.coefficient(k) * y2 - poly1.coefficient(k) * y1

    if m == 0:
        return [], c(0)
    ys = [c(m)]
    for i in range(1, m):
        ys.append(lam * ys[-1] + c(m - i))
    return ys, lam * ys[-1] + c(0)


def _gamma_chain(gamma: RealPolynomial, y1_left: float, jump_gap: float,
                 lam: float) -> tuple[list[float], float]:
    """Chain for one transmission form; closure compares gamma(lam)*y1(xi-0)
    against the actual jump of y2 across xi."""
    r = gamma.degree or 0
    if r == 0:
        return [], eval_poly(gamma, lam) * y1_left - jump_gap
    ys = [gamma.coefficient(r) * y1_left]
    for i in range(1, r):
        ys.append(lam * ys[-1] + gamma.coefficient(r - i) * y1_left)
    return ys, lam * ys[-1] + gamma.coefficient(0) * y1_left - jump_gap


def _quadrature_points(lam: float, rho: float, width: float) -> int:
    """4m+1 points per subinterval, resolving the local oscillation."""
    raw = 32 * (1 + abs(lam) * rho * width / math.pi)
    m = max(1, math.ceil((raw - 1) / 4.0))
    return 4 * m + 1


def eigen_element(
    problem: DiracProblem, lambda_k: float, tol: float = 1e-6, check: bool = True
) -> HElement:
    """Assemble the extended eigen-element for phi(., lambda_k).

    The terminal closure equations of all chains are evaluated as
    residuals; the a-side and transmission chains close identically for
    phi, and the b-side terminal value telescopes to Delta(lambda_k).
    """
    prof = degree_profile(problem)
    lam = float(lambda_k)

    segments = []
    for i in range(len(problem.weights)):
        x0, x1 = problem.subinterval(i)
        npts = _quadrature_points(lam, problem.weights[i], x1 - x0)
        xs = np.linspace(x0, x1, npts)
        # sample_phi reports left limits at breakpoints; the right end of
        # each segment is exactly that, but the left end of a segment that
        # starts at a breakpoint needs the jump applied.
        ys = np.real(sample_phi(problem, xs, lam))
        if i > 0:
            td = problem.transmissions[i - 1]
            prev = segments[i - 1].ys[:, -1]
            g = float(eval_poly(td.gamma, lam))
            ys[:, 0] = (td.theta * prev[0], g * prev[0] + prev[1] / td.theta)
        segments.append(FunctionSegment(xs, ys))

    ya = segments[0].ys[:, 0]
    yb = segments[-1].ys[:, -1]

    y1_chain, res_a = _chain(problem.a1, problem.a2, ya[0], ya[1], lam, prof.m_a)
    y2_chain, res_b = _chain(problem.b1, problem.b2, yb[0], yb[1], lam, prof.m_b)

    y3_chains: list[tuple[float, ...]] = []
    res_jumps = []
    for i, td in enumerate(problem.transmissions):
        left = segments[i].ys[:, -1]
        right = segments[i + 1].ys[:, 0]
        gap = right[1] - left[1] / td.theta
        chain, res = _gamma_chain(td.gamma, float(left[0]), float(gap), lam)
        y3_chains.append(tuple(chain))
        res_jumps.append(abs(res))

    closure = max([abs(res_a), abs(res_b)] + res_jumps)
    if check and closure > tol:
        raise ClosureViolated(
            f"terminal chain residual {closure:.3e} at lambda={lam}: "
            "not an eigenvalue"
        )
    return HElement(
        lam,
        tuple(segments),
        tuple(float(v) for v in y1_chain),
        tuple(float(v) for v in y2_chain),
        tuple(tuple(float(v) for v in chain) for chain in y3_chains),
        float(closure),
    )


def _simpson(ys: np.ndarray, h: float) -> float:
    w = np.ones(ys.size)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return float(h / 3.0 * np.dot(w, ys))


def h_norm_sq(element: HElement, problem: DiracProblem) -> float:
    """Squared norm in the extended space: weighted function integral plus
    the squared moduli of all chain entries."""
    total = 0.0
    for i, seg in enumerate(element.segments):
        rho = problem.weights[i]
        dens = rho * (np.abs(seg.ys[0]) ** 2 + np.abs(seg.ys[1]) ** 2)
        h = (seg.xs[-1] - seg.xs[0]) / (seg.xs.size - 1)
        full = _simpson(dens, h)
        coarse = _simpson(dens[::2], 2.0 * h)
        if abs(full - coarse) > 1e-6 * max(1.0, abs(full)):
            raise GridTooCoarse(
                f"quadrature error estimate {abs(full - coarse):.3e} "
                f"on subinterval {i}"
            )
        total += full
    total += sum(abs(v) ** 2 for v in element.Y1)
    total += sum(abs(v) ** 2 for v in element.Y2)
    total += sum(abs(v) ** 2 for chain in element.Y3 for v in chain)
    return total


def norming_constant(problem: DiracProblem, lambda_k: float) -> float:
    """mu_k: squared extended-space norm of the eigen-element at lambda_k."""
    return h_norm_sq(eigen_element(problem, lambda_k), problem)


def count_zeros_rectangle(
    problem: DiracProblem,
    re_min: float,
    re_max: float,
    im_min: float,
    im_max: float,
    samples_per_side: int = 400,
) -> int:
    """Winding number of Delta around a rectangle: number of complex zeros
    inside (counted with multiplicity). Diagnostic only; assumes no zero
    lies on the contour."""
    t = np.linspace(0.0, 1.0, samples_per_side, endpoint=False)
    bottom = re_min + (re_max - re_min) * t + 1j * im_min
    right = re_max + 1j * (im_min + (im_max - im_min) * t)
    top = re_max - (re_max - re_min) * t + 1j * im_max
    left = re_min + 1j * (im_max - (im_max - im_min) * t)
    contour = np.concatenate([bottom, right, top, left])
    vals = delta_many(problem, contour)
    args = np.unwrap(np.angle(np.append(vals, vals[0])))
    return int(round((args[-1] - args[0]) / (2.0 * math.pi)))
