"""Weyl function, P-matrix diagnostics, Hadamard products and two-spectra
parameter reconstruction.

The Weyl function M(lambda) is the ratio of the characteristic function
of the auxiliary problem (left condition replaced by y1(a)=0) to the main
one; equality of Weyl functions identifies the problem. The P-matrix
compares two problems through their fundamental solution pairs and is the
identity exactly when the problems coincide. Reconstruction fits a small
number of scalar parameters so that the eigenvalues of both problems
match two target spectra.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .errors import (
    EmptyGrid,
    MatchingFailure,
    NonConvergence,
    PoleAtEigenvalue,
    ZeroEigenvalueInList,
)
from .polynomial import RealPolynomial
from .problem import DiracProblem, PotentialPiece, PotentialSpec, total_length
from .propagator import SolutionState, phi, psi
from .spectrum import SearchOptions, delta, delta1, find_eigenvalues

_POLE_TOL = 1e-10


def weyl_m(problem: DiracProblem, lam: complex, pole_tol: float = _POLE_TOL):
    """M(lambda): ratio of the auxiliary to the main characteristic function."""
    d = delta(problem, lam)
    if abs(d) < pole_tol:
        raise PoleAtEigenvalue(f"|Delta({lam})| = {abs(d):.3e}: too close to the spectrum")
    return delta1(problem, lam) / d


def big_phi(problem: DiracProblem, x: float, lam: complex,
            pole_tol: float = _POLE_TOL) -> SolutionState:
    """Phi(x, lambda) = psi(x, lambda) / Delta(lambda); W(Phi, phi) = 1."""
    d = delta(problem, lam)
    if abs(d) < pole_tol:
        raise PoleAtEigenvalue(f"|Delta({lam})| = {abs(d):.3e}: too close to the spectrum")
    s = psi(problem, x, lam)
    return SolutionState(s.x, s.y1 / d, s.y2 / d)


def p_matrix(
    problemA: DiracProblem,
    problemB: DiracProblem,
    x: float,
    lam: complex,
    check: bool = True,
    check_tol: float = 1e-7,
) -> np.ndarray:
    """P(x, lambda) mapping problemB's solution pair onto problemA's.

    Entries follow the orientation in which P is exactly the identity for
    identical problems. With ``check=True`` the equivalent form written
    through the entire solutions Phi - M*phi and the Weyl difference is
    evaluated independently and the two asserted equal.
    """
    fa, fb = phi(problemA, x, lam), phi(problemB, x, lam)
    Fa, Fb = big_phi(problemA, x, lam), big_phi(problemB, x, lam)
    p = np.array([
        [Fa.y1 * fb.y2 - fa.y1 * Fb.y2, fa.y1 * Fb.y1 - Fa.y1 * fb.y1],
        [Fa.y2 * fb.y2 - fa.y2 * Fb.y2, fa.y2 * Fb.y1 - Fa.y2 * fb.y1],
    ])
    if check:
        ma, mb = weyl_m(problemA, lam), weyl_m(problemB, lam)
        # Entire parts of Phi: phi_ent = Phi - M*phi, per problem.
        ea = (Fa.y1 - ma * fa.y1, Fa.y2 - ma * fa.y2)
        eb = (Fb.y1 - mb * fb.y1, Fb.y2 - mb * fb.y2)
        dm = mb - ma
        q = np.array([
            [
                fb.y2 * ea[0] - fa.y1 * eb[1] - dm * fa.y1 * fb.y2,
                fa.y1 * eb[0] - fb.y1 * ea[0] + dm * fa.y1 * fb.y1,
            ],
            [
                fb.y2 * ea[1] - fa.y2 * eb[1] - dm * fa.y2 * fb.y2,
                fa.y2 * eb[0] - fb.y1 * ea[1] + dm * fb.y1 * fa.y2,
            ],
        ])
        err = float(np.max(np.abs(p - q)))
        if err > check_tol * (1.0 + float(np.max(np.abs(p)))):
            raise AssertionError(
                f"P-matrix cross-check mismatch {err:.3e} at x={x}, lambda={lam}"
            )
    return p


def weyl_distance(
    problemA: DiracProblem,
    problemB: DiracProblem,
    lambda_grid,
    drop_tol: float = 1e-6,
) -> float:
    """max over the grid of |M_A - M_B| / (1 + |M_A|), dropping points too
    close to either spectrum."""
    dist = 0.0
    kept = 0
    for lam in np.asarray(lambda_grid).ravel():
        da, db = delta(problemA, lam), delta(problemB, lam)
        if abs(da) < drop_tol or abs(db) < drop_tol:
            continue
        kept += 1
        ma = delta1(problemA, lam) / da
        mb = delta1(problemB, lam) / db
        dist = max(dist, abs(ma - mb) / (1.0 + abs(ma)))
    if kept == 0:
        raise EmptyGrid("all grid points fell too close to a spectrum")
    return dist


def hadamard_delta(eigenvalues, C: float, lam, zero_multiplicity: int = 0):
    """Truncated Hadamard product C * lambda**m0 * prod(1 - lambda/lambda_n).

    The product form requires every listed eigenvalue to be nonzero; a
    zero eigenvalue of multiplicity m0 is carried by the prefactor.
    """
    eigs = np.asarray(eigenvalues, dtype=float)
    if np.any(eigs == 0.0):
        raise ZeroEigenvalueInList(
            "zero eigenvalue in the product list; pass it via zero_multiplicity"
        )
    lam = np.asarray(lam)
    out = C * lam ** zero_multiplicity * np.prod(
        1.0 - lam[..., None] / eigs, axis=-1
    )
    return out if out.ndim else out[()]


# ---------------------------------------------------------------------------
# Two-spectra reconstruction.

@dataclass(frozen=True)
class UnknownParameter:
    """One scalar unknown: a constant potential entry or a jump coupling.

    kind "pr" ties p and r of potential piece ``index`` to the same value;
    "p", "q", "r" set a single entry; "theta" sets the coupling of
    transmission ``index``.
    """

    kind: str
    index: int
    bounds: tuple[float, float]
    start: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("pr", "p", "q", "r", "theta"):
            raise ValueError(f"unknown parameter kind {self.kind!r}")
        lo, hi = self.bounds
        if not lo < hi:
            raise ValueError(f"empty bounds {self.bounds}")
        if self.start is not None and not lo <= self.start <= hi:
            raise ValueError(f"start {self.start} outside bounds {self.bounds}")


@dataclass(frozen=True)
class ReconstructionSpec:
    template: DiracProblem
    unknowns: tuple[UnknownParameter, ...]
    targets_main: tuple[float, ...]
    targets_aux: tuple[float, ...] = ()
    weights_main: tuple[float, ...] | None = None
    weights_aux: tuple[float, ...] | None = None


@dataclass(frozen=True)
class ReconstructOptions:
    tol: float = 1e-6
    grid_starts: int = 3
    max_starts: int = 40
    window_pad: float | None = None
    eig_tol: float = 1e-11
    penalty: float = 1e3
    seed: int = 0


@dataclass(frozen=True)
class ReconstructionResult:
    values: tuple[float, ...]
    residual: float
    mismatch_main: tuple[float, ...]
    mismatch_aux: tuple[float, ...]
    start: tuple[float, ...]
    n_evaluations: int


def apply_parameters(
    template: DiracProblem, unknowns: tuple[UnknownParameter, ...], values
) -> DiracProblem:
    """Instantiate the template with concrete values for the unknowns."""
    pieces = list(template.potential.pieces)
    transmissions = list(template.transmissions)
    for u, v in zip(unknowns, values):
        v = float(v)
        if u.kind == "theta":
            transmissions[u.index] = dataclasses.replace(transmissions[u.index], theta=v)
            continue
        piece = pieces[u.index]
        if u.kind == "pr":
            pieces[u.index] = dataclasses.replace(piece, p=v, r=v)
        else:
            pieces[u.index] = dataclasses.replace(piece, **{u.kind: v})
    return dataclasses.replace(
        template,
        potential=PotentialSpec(tuple(pieces), template.potential.breakpoints),
        transmissions=tuple(transmissions),
    )


def auxiliary_problem(problem: DiracProblem) -> DiracProblem:
    """Same problem with the left condition replaced by y1(a) = 0."""
    return dataclasses.replace(
        problem,
        a1=RealPolynomial.constant(1.0),
        a2=RealPolynomial.zero(),
    )


def _matched_eigenvalues(
    problem: DiracProblem, targets: tuple[float, ...], pad: float, eig_tol: float
) -> np.ndarray:
    """Eigenvalues in the padded target window, matched by sorted index."""
    lo, hi = min(targets) - pad, max(targets) + pad
    res = find_eigenvalues(problem, lo, hi, SearchOptions(tol=eig_tol))
    found = np.asarray(res.eigenvalues)
    if found.size != len(targets):
        raise MatchingFailure(
            f"found {found.size} eigenvalues in [{lo:.4g}, {hi:.4g}] "
            f"for {len(targets)} targets"
        )
    return found


def reconstruct(
    spec: ReconstructionSpec, opts: ReconstructOptions | None = None
) -> ReconstructionResult:
    """Fit the unknown parameters to the two target spectra.

    Weighted least squares over the bounded parameter box, multistarted
    from a deterministic grid (plus any per-unknown start values); each
    trial solves both forward eigenvalue problems and matches eigenvalues
    to targets by sorted index inside a padded window, rejecting trial
    vectors whose eigenvalue count disagrees.
    """
    opts = opts or ReconstructOptions()
    n_main, n_aux = len(spec.targets_main), len(spec.targets_aux)
    if n_main + n_aux == 0:
        raise MatchingFailure("no target eigenvalues supplied")
    if n_main + n_aux < len(spec.unknowns):
        raise MatchingFailure(
            f"{len(spec.unknowns)} unknowns but only {n_main + n_aux} targets"
        )
    pad = opts.window_pad
    if pad is None:
        pad = 0.5 * math.pi / total_length(spec.template)
    w_main = np.asarray(spec.weights_main or (1.0,) * n_main, dtype=float)
    w_aux = np.asarray(spec.weights_aux or (1.0,) * n_aux, dtype=float)
    lo = np.array([u.bounds[0] for u in spec.unknowns])
    hi = np.array([u.bounds[1] for u in spec.unknowns])

    evaluations = 0

    def residuals(values: np.ndarray) -> np.ndarray:
        nonlocal evaluations
        evaluations += 1
        prob = apply_parameters(spec.template, spec.unknowns, values)
        out = []
        try:
            if n_main:
                found = _matched_eigenvalues(prob, spec.targets_main, pad, opts.eig_tol)
                out.append(np.sqrt(w_main) * (found - np.asarray(spec.targets_main)))
            if n_aux:
                found = _matched_eigenvalues(
                    auxiliary_problem(prob), spec.targets_aux, pad, opts.eig_tol
                )
                out.append(np.sqrt(w_aux) * (found - np.asarray(spec.targets_aux)))
        except MatchingFailure:
            return np.full(n_main + n_aux, opts.penalty)
        return np.concatenate(out)

    # Multistart set: user-specified starts, then a full factorial grid of
    # interior points of the bounds box.
    starts: list[np.ndarray] = []
    given = [u.start for u in spec.unknowns]
    if all(s is not None for s in given):
        starts.append(np.array(given, dtype=float))
    axes = [
        np.linspace(u.bounds[0], u.bounds[1], opts.grid_starts + 2)[1:-1]
        for u in spec.unknowns
    ]
    for combo in itertools.product(*axes):
        starts.append(np.array(combo))
        if len(starts) >= opts.max_starts:
            break

    best = None
    for start in starts:
        fit = least_squares(
            residuals, start, bounds=(lo, hi), method="trf",
            jac="3-point", diff_step=1e-5, xtol=1e-14, ftol=1e-14, gtol=1e-14,
        )
        if best is None or fit.cost < best.cost:
            best, best_start = fit, start
        if math.sqrt(2.0 * fit.cost) <= opts.tol * 1e-3:
            break

    resid = math.sqrt(2.0 * best.cost)
    if resid > opts.tol * max(1.0, math.sqrt(n_main + n_aux)):
        raise NonConvergence(f"best residual {resid:.3e} exceeds tolerance {opts.tol}")
    final = residuals(best.x)
    return ReconstructionResult(
        values=tuple(float(v) for v in best.x),
        residual=resid,
        mismatch_main=tuple(float(v) for v in final[:n_main]),
        mismatch_aux=tuple(float(v) for v in final[n_main:]),
        start=tuple(float(v) for v in best_start),
        n_evaluations=evaluations,
    )
