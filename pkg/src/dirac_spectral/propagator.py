"""Propagation of 2-vector solutions across subintervals and transmission jumps.

The system By' + Omega y = lambda rho y is integrated in first-order form
y' = M(x, lambda) y with trace-free M. Three propagation paths are used:

* exact rotation when a potential piece is identically zero,
* a classical 4th-order one-step matrix raised to a power of two by
  repeated squaring when the piece has constant entries (equivalent to
  sequential stepping for a constant matrix, at logarithmic cost),
* plain stepwise 4th-order integration when the entries depend on x.

Everything internal operates on a whole array of lambda values at once;
the public phi/psi return scalar states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonFinite, PositionMismatch, StepUnderflow
from .polynomial import eval_poly
from .problem import DiracProblem, PotentialPiece, TransmissionData

# Phase advance per step, well under the 0.1 rad resolution requirement.
# The squaring path is cheap per halving, so it gets a tighter budget.
_PHASE_SQUARING = 0.005
_PHASE_STEPWISE = 0.02
_MAX_HALVINGS = 60


@dataclass(frozen=True)
class SolutionState:
    """Solution components (y1, y2) at position x."""

    x: float
    y1: complex
    y2: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.y1, self.y2])


@dataclass(frozen=True)
class TransferMatrix:
    """2x2 matrix mapping a state across one subinterval or one jump."""

    m11: complex
    m12: complex
    m21: complex
    m22: complex

    def as_array(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    @property
    def det(self) -> complex:
        return self.m11 * self.m22 - self.m12 * self.m21

    def apply(self, state: SolutionState) -> SolutionState:
        return SolutionState(
            state.x,
            self.m11 * state.y1 + self.m12 * state.y2,
            self.m21 * state.y1 + self.m22 * state.y2,
        )


def first_order_form(problem: DiracProblem, x: float, lam: complex) -> np.ndarray:
    """M(x, lambda) with y' = M y; M = [[q, r-lam*rho], [lam*rho-p, -q]]."""
    rho = problem.weights[problem.subinterval_index(x, side="+")]
    p, q, r = problem.potential.piece_at(x).omega(x)
    return np.array([[q, r - lam * rho], [lam * rho - p, -q]])


def transmission_jump(td: TransmissionData, lam: complex) -> TransferMatrix:
    """Jump matrix T(lambda) with y(xi+0) = T(lambda) y(xi-0)."""
    return TransferMatrix(td.theta, 0.0, eval_poly(td.gamma, lam), 1.0 / td.theta)


def wronskian(u: SolutionState, v: SolutionState) -> complex:
    """u.y1*v.y2 - u.y2*v.y1; both states must sit at the same position."""
    if abs(u.x - v.x) > 1e-12 * (1.0 + abs(u.x)):
        raise PositionMismatch(f"states at different positions: {u.x} vs {v.x}")
    return u.y1 * v.y2 - u.y2 * v.y1


# ---------------------------------------------------------------------------
# Batched-in-lambda propagation core. States are arrays of shape (2, K),
# lambda arrays of shape (K,).

def _as_lambda_array(lam) -> tuple[np.ndarray, bool]:
    arr = np.atleast_1d(np.asarray(lam))
    scalar = np.ndim(lam) == 0
    return arr, scalar


def _initial_state(p1, p2, lam: np.ndarray) -> np.ndarray:
    y = np.zeros((2, lam.size), dtype=np.result_type(lam, float))
    y[0] = eval_poly(p1, lam)
    y[1] = eval_poly(p2, lam)
    return y


def _apply_rotation(y: np.ndarray, angle: np.ndarray) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.stack([c * y[0] - s * y[1], s * y[0] + c * y[1]])


def _matmul_batch(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(2,2,K) @ (2,2,K) contraction over the middle index."""
    return np.einsum("ijk,jlk->ilk", a, b)


def _constant_matrix(p: float, q: float, r: float, rho: float, lam: np.ndarray) -> np.ndarray:
    m = np.zeros((2, 2, lam.size), dtype=np.result_type(lam, float))
    m[0, 0] = q
    m[0, 1] = r - lam * rho
    m[1, 0] = lam * rho - p
    m[1, 1] = -q
    return m


def _rk4_step_matrix(m: np.ndarray, h: np.ndarray) -> np.ndarray:
    """One-step matrix I + hM + (hM)^2/2 + (hM)^3/6 + (hM)^4/24 per column."""
    hm = m * h[None, None, :]
    t = np.zeros_like(hm)
    t[0, 0] = 1.0
    t[1, 1] = 1.0
    acc = np.eye(2, dtype=hm.dtype)[:, :, None] * np.ones(h.size)
    for k in (1, 2, 3, 4):
        acc = _matmul_batch(hm, acc) / k
        t = t + acc
    return t


def _propagate_constant(
    y: np.ndarray, piece_omega: tuple[float, float, float], rho: float,
    lam: np.ndarray, dx: float,
) -> np.ndarray:
    p, q, r = piece_omega
    omega = np.abs(lam) * rho + max(abs(p), abs(q), abs(r))
    phase = omega * abs(dx)
    with np.errstate(divide="ignore"):
        halvings = np.where(
            phase > _PHASE_SQUARING,
            np.ceil(np.log2(np.maximum(phase / _PHASE_SQUARING, 1.0))),
            0.0,
        ).astype(int)
    if halvings.max(initial=0) > _MAX_HALVINGS:
        raise StepUnderflow(
            f"constant-piece propagation would need 2^{halvings.max()} steps"
        )
    h = dx / np.exp2(halvings)
    m = _constant_matrix(p, q, r, rho, lam)
    t = _rk4_step_matrix(m, h)
    for j in range(int(halvings.max(initial=0))):
        mask = halvings > j
        t[:, :, mask] = _matmul_batch(t[:, :, mask], t[:, :, mask])
    return np.einsum("ijk,jk->ik", t, y)


def _propagate_stepwise(
    y: np.ndarray, piece: PotentialPiece, rho: float,
    lam: np.ndarray, x0: float, x1: float,
) -> np.ndarray:
    dx = x1 - x0
    bound = piece.magnitude_bound(min(x0, x1), max(x0, x1))
    omega_max = float(np.max(np.abs(lam))) * rho + bound
    n = max(1, math.ceil(omega_max * abs(dx) / _PHASE_STEPWISE))
    if n > 10**8:
        raise StepUnderflow(f"stepwise propagation would need {n} steps")
    h = dx / n

    def mat(x: float) -> np.ndarray:
        p, q, r = piece.omega(x)
        return _constant_matrix(p, q, r, rho, lam)

    def mv(m: np.ndarray, v: np.ndarray) -> np.ndarray:
        return np.einsum("ijk,jk->ik", m, v)

    x = x0
    for _ in range(n):
        m1 = mat(x)
        m2 = mat(x + 0.5 * h)
        m3 = mat(x + h)
        k1 = mv(m1, y)
        k2 = mv(m2, y + 0.5 * h * k1)
        k3 = mv(m2, y + 0.5 * h * k2)
        k4 = mv(m3, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        x += h
    return y


def _propagate_piece(
    y: np.ndarray, piece: PotentialPiece, rho: float,
    lam: np.ndarray, x0: float, x1: float,
) -> np.ndarray:
    if x1 == x0:
        return y
    if piece.is_zero:
        return _apply_rotation(y, lam * (rho * (x1 - x0)))
    if piece.is_constant:
        y = _propagate_constant(y, (piece.p, piece.q, piece.r), rho, lam, x1 - x0)
    else:
        y = _propagate_stepwise(y, piece, rho, lam, x0, x1)
    if not np.all(np.isfinite(y)):
        raise NonFinite(f"solution overflowed while propagating [{x0}, {x1}]")
    return y


def _propagate_subinterval(
    problem: DiracProblem, i: int, lam: np.ndarray, y: np.ndarray,
    x0: float, x1: float,
) -> np.ndarray:
    """Propagate within constant-weight subinterval i from x0 to x1."""
    rho = problem.weights[i]
    lo, hi = min(x0, x1), max(x0, x1)
    segments = problem.potential.segments(lo, hi)
    if x1 < x0:
        segments = [(s1, s0, piece) for s0, s1, piece in reversed(segments)]
    for s0, s1, piece in segments:
        y = _propagate_piece(y, piece, rho, lam, s0, s1)
    return y


def _apply_jump(y: np.ndarray, td: TransmissionData, lam: np.ndarray, inverse: bool) -> np.ndarray:
    g = eval_poly(td.gamma, lam)
    if inverse:
        return np.stack([y[0] / td.theta, -g * y[0] + td.theta * y[1]])
    return np.stack([td.theta * y[0], g * y[0] + y[1] / td.theta])


def phi_components(problem: DiracProblem, x: float, lam) -> np.ndarray:
    """phi(x, lambda) for an array of lambda; shape (2, K).

    Left limit at interior breakpoints.
    """
    lam, _ = _as_lambda_array(lam)
    y = _initial_state(problem.a2, problem.a1, lam)
    j = problem.subinterval_index(x, side="-")
    nodes = problem.nodes
    for i in range(j):
        y = _propagate_subinterval(problem, i, lam, y, nodes[i], nodes[i + 1])
        y = _apply_jump(y, problem.transmissions[i], lam, inverse=False)
    return _propagate_subinterval(problem, j, lam, y, nodes[j], x)


def psi_components(problem: DiracProblem, x: float, lam) -> np.ndarray:
    """psi(x, lambda) for an array of lambda; right limit at breakpoints."""
    lam, _ = _as_lambda_array(lam)
    y = _initial_state(problem.b2, problem.b1, lam)
    j = problem.subinterval_index(x, side="+")
    nodes = problem.nodes
    last = len(problem.weights) - 1
    for i in range(last, j, -1):
        y = _propagate_subinterval(problem, i, lam, y, nodes[i + 1], nodes[i])
        y = _apply_jump(y, problem.transmissions[i - 1], lam, inverse=True)
    return _propagate_subinterval(problem, j, lam, y, nodes[j + 1], x)


def _to_state(x: float, y: np.ndarray, lam) -> SolutionState:
    y1, y2 = y[0, 0], y[1, 0]
    if np.ndim(lam) == 0 and not np.iscomplexobj(np.asarray(lam)):
        return SolutionState(x, float(np.real(y1)), float(np.real(y2)))
    return SolutionState(x, complex(y1), complex(y2))


def phi(problem: DiracProblem, x: float, lam: complex) -> SolutionState:
    """Left solution: (a2(lam), a1(lam)) at a, propagated rightward to x."""
    return _to_state(x, phi_components(problem, x, lam), lam)


def psi(problem: DiracProblem, x: float, lam: complex) -> SolutionState:
    """Right solution: (b2(lam), b1(lam)) at b, propagated leftward to x."""
    return _to_state(x, psi_components(problem, x, lam), lam)


def propagate_interval(
    problem: DiracProblem, interval_index: int, lam: complex,
    from_x: float, to_x: float, state: SolutionState,
) -> SolutionState:
    """Solve y' = M y within one subinterval, in either direction."""
    lam_arr, _ = _as_lambda_array(lam)
    y = np.asarray(state.as_array(), dtype=np.result_type(lam_arr, float))[:, None]
    y = _propagate_subinterval(problem, interval_index, lam_arr, y, from_x, to_x)
    return _to_state(to_x, y, lam)


def sample_phi(problem: DiracProblem, xs, lam: complex) -> np.ndarray:
    """phi at one lambda sampled on sorted positions xs; shape (2, len(xs)).

    At an interior breakpoint the left limit is reported, matching phi.
    """
    xs = np.asarray(xs, dtype=float)
    if np.any(np.diff(xs) < 0):
        raise ValueError("sample grid must be sorted ascending")
    lam_arr, _ = _as_lambda_array(lam)
    y = _initial_state(problem.a2, problem.a1, lam_arr)
    out = np.zeros((2, xs.size), dtype=y.dtype)
    nodes = problem.nodes
    pos = problem.a
    seg = 0
    for k, x in enumerate(xs):
        # Cross any breakpoints strictly left of x.
        while seg < problem.n and nodes[seg + 1] < x:
            y = _propagate_subinterval(problem, seg, lam_arr, y, pos, nodes[seg + 1])
            y = _apply_jump(y, problem.transmissions[seg], lam_arr, inverse=False)
            pos = nodes[seg + 1]
            seg += 1
        y = _propagate_subinterval(problem, seg, lam_arr, y, pos, float(x))
        pos = float(x)
        out[:, k] = y[:, 0]
    return out
