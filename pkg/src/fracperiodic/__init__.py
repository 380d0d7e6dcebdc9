"""Spectral toolbox for periodic solutions of linear and semilinear
equations driven by the one-dimensional periodic fractional Laplacian:
multiplier and singular-integral realizations of the operator, Galerkin
linear solvers, the degenerate-elliptic harmonic extension, energy
minimization for double-well nonlinearities, branch continuation, and
structural diagnostics (Hamiltonian identity, Modica inequality, energy
scaling laws).
"""

from .bifurcation import (
    Branch,
    BranchPoint,
    T0Report,
    classify_criticality,
    continue_branch,
    detect_bifurcation_points,
    verify_T0_bound,
)
from .diagnostics import (
    EnergyScanReport,
    HamiltonianReport,
    ModicaReport,
    TestFunctionReport,
    energy_scan,
    hamiltonian_check,
    modica_check,
    modica_pde_residual,
    test_function_bound,
)
from .errors import (
    BesselEvalFailure,
    BranchLost,
    ExtrapolationDivergence,
    FracPeriodicError,
    IdentityViolation,
    InconsistentBracket,
    InequalityViolation,
    NegativePotential,
    NoConvergence,
    NotCoercive,
    QuadratureNonConvergence,
    SingularJacobian,
    SolvabilityViolation,
    StepFailure,
    TailNotConverged,
)
from .extension import (
    BesselProfile,
    ExtensionField,
    YQuadrature,
    dirichlet_to_neumann,
    extend_bessel,
    extend_poisson,
    extension_energy,
    poisson_kernel_periodized,
)
from .linear import (
    CoerciveSolve,
    FredholmSolve,
    GalerkinOperator,
    KernelBasis,
    eigenvalue_set,
    schrodinger_fractional_spectrum,
    solve_coercive,
    solve_fredholm,
)
from .semilinear import (
    SemilinearSolution,
    SolveConfig,
    find_min_period,
    minimize_energy,
    newton_refine,
)
from .spectral import (
    DoubleWell,
    FracOrder,
    PeriodicFunction,
    energy_functional,
    frac_laplacian,
    gagliardo_energy,
    multipliers,
    potential_energy_half,
    singular_integral_oracle,
    spectral_dirichlet,
)

__version__ = "1.0.0"
