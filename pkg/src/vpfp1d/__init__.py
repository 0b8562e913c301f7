"""Structure-preserving solver for the 1D Vlasov-Poisson-Fokker-Planck system.

Hermite spectral decomposition in velocity, well-balanced finite volumes in
space, fully implicit splitting in time.  The discrete transport pair keeps
the stationary state an exact fixed point, and the linearized backward-Euler
step dissipates the discrete free energy identically.
"""

__version__ = "0.1.0"

from .diagnostics import (CSV_COLUMNS, DiagnosticsRecord, HypocoercivityRecord,
                          calibrate_beta0, energy, envelope_peaks,
                          equivalence_window, fit_decay_rate, hypocoercivity,
                          mass_deviation, mass_functional, record)
from .equilibrium import (Equilibrium, IonDensity, NonConvergence,
                          from_potential, solve_poisson_boltzmann)
from .hermite import (HermiteBasis, HermiteState, equilibrium_state,
                      eval_hermite_functions, project_modulated_maxwellian,
                      reconstruct, reconstruct_deviation,
                      state_from_mode_coefficients)
from .integrator import (LIE, LINEARIZED, STRANG, NonFiniteState,
                         SimulationParams, mean_correct, run,
                         run_echo_protocol)
from .mesh import SpatialMesh, cell_average, uniform_mesh
from .operators import (EllipticSolver, IncompatibleRHS, PoissonOperator,
                        SingularSystem, TransportOperators, bordering_vectors)
from .stepper_linear import (BACKWARD_EULER, IMPLICIT_MIDPOINT,
                             FactorizationFailure, LinearStepOperator,
                             StepParams)
from .stepper_nonlinear import FieldFactor, nonlinear_step

__all__ = [
    "BACKWARD_EULER", "CSV_COLUMNS", "DiagnosticsRecord", "EllipticSolver",
    "Equilibrium", "FactorizationFailure", "FieldFactor", "HermiteBasis",
    "HermiteState", "HypocoercivityRecord", "IMPLICIT_MIDPOINT",
    "IncompatibleRHS", "IonDensity", "LIE", "LINEARIZED", "LinearStepOperator",
    "NonConvergence", "NonFiniteState", "PoissonOperator", "STRANG",
    "SimulationParams", "SingularSystem", "SpatialMesh", "StepParams",
    "TransportOperators", "bordering_vectors", "calibrate_beta0",
    "cell_average", "energy", "envelope_peaks", "equilibrium_state",
    "equivalence_window", "eval_hermite_functions", "fit_decay_rate",
    "from_potential", "hypocoercivity", "mass_deviation", "mass_functional", "mean_correct",
    "nonlinear_step", "project_modulated_maxwellian", "reconstruct",
    "reconstruct_deviation", "record",
    "run", "run_echo_protocol", "solve_poisson_boltzmann",
    "state_from_mode_coefficients", "uniform_mesh",
]
