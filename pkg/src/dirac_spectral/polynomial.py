"""Real-coefficient polynomials in the spectral parameter."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np


@dataclass(frozen=True)
class RealPolynomial:
    """Polynomial with real coefficients, ``coeffs[k]`` multiplying lambda**k.

    Instances are canonical: trailing zero coefficients are stripped at
    construction, and the zero polynomial is stored as an empty tuple so
    that the leading coefficient of a nonzero polynomial is always nonzero.
    """

    coeffs: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        c = tuple(float(v) for v in self.coeffs)
        while c and c[-1] == 0.0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls) -> "RealPolynomial":
        return cls(())

    @classmethod
    def constant(cls, value: float) -> "RealPolynomial":
        return cls((float(value),))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int | None:
        """Degree, or None for the zero polynomial (never -1-as-number)."""
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def leading_coefficient(self) -> float:
        """Highest-order coefficient; 0.0 for the zero polynomial."""
        return self.coeffs[-1] if self.coeffs else 0.0

    def coefficient(self, k: int) -> float:
        """Coefficient of lambda**k (0.0 beyond the stored degree)."""
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0.0

    def __call__(self, lam):
        return eval_poly(self, lam)


def eval_poly(p: RealPolynomial, lam):
    """Evaluate ``p`` at ``lam`` by Horner's scheme.

    ``lam`` may be a real or complex scalar or a numpy array; the result
    broadcasts accordingly.
    """
    if not p.coeffs:
        return np.zeros_like(lam) if isinstance(lam, np.ndarray) else 0.0 * lam
    acc = p.coeffs[-1] * (np.ones_like(lam) if isinstance(lam, np.ndarray) else 1.0)
    for c in reversed(p.coeffs[:-1]):
        acc = acc * lam + c
    return acc


def as_polynomial(value: "RealPolynomial | float | Iterable[float]") -> RealPolynomial:
    """Coerce a scalar or coefficient sequence into a RealPolynomial."""
    if isinstance(value, RealPolynomial):
        return value
    if isinstance(value, (int, float)):
        return RealPolynomial.constant(value)
    return RealPolynomial(tuple(value))
