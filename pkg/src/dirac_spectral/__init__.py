"""Forward and inverse spectral solver for one-dimensional Dirac systems
with piecewise-constant weight, polynomial boundary conditions and a
finite number of polynomial transmission conditions."""

from .errors import (
    ClosureViolated,
    DegenerateLeadingCoefficient,
    DiracSpectralError,
    EmptyGrid,
    GridTooCoarse,
    MatchingFailure,
    NonConvergence,
    NonFinite,
    NotAnEigenvalue,
    PoleAtEigenvalue,
    PositionMismatch,
    StepUnderflow,
    WindowTooWide,
    ZeroEigenvalueInList,
    ZeroLeadingCoefficient,
)
from .polynomial import RealPolynomial, as_polynomial, eval_poly
from .problem import (
    DegreeProfile,
    DiracProblem,
    PotentialPiece,
    PotentialSpec,
    TransmissionData,
    ValidationReport,
    degree_profile,
    total_length,
    validate,
)
from .problem_io import dump_problem, load_problem, save_problem
from .propagator import (
    SolutionState,
    TransferMatrix,
    first_order_form,
    phi,
    phi_components,
    propagate_interval,
    psi,
    psi_components,
    sample_phi,
    transmission_jump,
    wronskian,
)
from .spectrum import (
    HElement,
    SearchOptions,
    SpectrumResult,
    count_zeros_rectangle,
    delta,
    delta1,
    delta1_many,
    delta_both,
    delta_many,
    eigen_element,
    eigenfunction,
    find_eigenvalues,
    h_norm_sq,
    norming_constant,
)
from .asymptotics import (
    LeadingTerm,
    TrigFactor,
    asymptotic_eigenvalues,
    compare_asymptotics,
    delta_leading,
    delta_leading_term,
    phi_leading,
    phi_leading_term,
    psi_leading,
    psi_leading_term,
)
from .weyl import (
    ReconstructionSpec,
    ReconstructOptions,
    ReconstructionResult,
    UnknownParameter,
    apply_parameters,
    auxiliary_problem,
    big_phi,
    hadamard_delta,
    p_matrix,
    reconstruct,
    weyl_distance,
    weyl_m,
)

__version__ = "0.1.0"
