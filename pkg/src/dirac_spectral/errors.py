"""Exception hierarchy shared across the package."""


class DiracSpectralError(Exception):
    """Base class for all package-specific errors."""


class ZeroLeadingCoefficient(DiracSpectralError):
    """A degree-branch classification needs a nonzero polynomial on at least one side."""


class DegenerateLeadingCoefficient(DiracSpectralError):
    """A leading coefficient required by an asymptotic formula vanishes."""


class StepUnderflow(DiracSpectralError):
    """The integrator would need a step below what is machine-feasible."""


class NonFinite(DiracSpectralError):
    """A propagated solution component overflowed or became NaN."""


class PositionMismatch(DiracSpectralError):
    """Wronskian arguments were sampled at different positions."""


class WindowTooWide(DiracSpectralError):
    """An eigenvalue scan would exceed its sample budget."""


class NotAnEigenvalue(DiracSpectralError):
    """The characteristic function residual is too large at the requested point."""


class ClosureViolated(DiracSpectralError):
    """A terminal residual of the recursive boundary/transmission chains is too large."""


class GridTooCoarse(DiracSpectralError):
    """The quadrature error estimate on the sample grid exceeds tolerance."""


class PoleAtEigenvalue(DiracSpectralError):
    """Evaluation requested at (or too close to) a zero of the characteristic function."""


class EmptyGrid(DiracSpectralError):
    """All grid points were dropped by a near-spectrum filter."""


class ZeroEigenvalueInList(DiracSpectralError):
    """A Hadamard product factor (1 - lambda/lambda_n) requires lambda_n != 0."""


class MatchingFailure(DiracSpectralError):
    """Eigenvalue count in the search window does not match the number of targets."""


class NonConvergence(DiracSpectralError):
    """The reconstruction residual stalled above the requested tolerance."""
