"""Structure-preserving 1D simulator for open compressible fluids.

The dynamics splits into a skew (reversible) and a symmetric
positive-semidefinite (irreversible) operator driven by the energy and
entropy functionals, exchanges energy through boundary ports, and keeps
the discrete counterparts of the continuous degeneracy and balance
identities at machine precision.
"""

from .dynamics import (Boundary, BalanceReport, ManufacturedCase, Profile,
                       RunResult, balance_check, entropy_production,
                       exergy_dissipation, rhs, run, step,
                       weak_strong_consistency)
from .errors import (ConfigError, ConvergenceError, DomainError, PhflowError,
                     StepError, TopologyError)
from .fields import (QuadData, State, functionals, generator_derivatives,
                     trace)
from .kernels import backend_name
from .materials import Material, ThermoPoint, eval_eos, gibbs_duhem_residual
from .mesh import Mesh, build_mesh
from .operators import (AssembledOperator, PortReadout, PortSignal, apply_B,
                        assemble_B, assemble_factorization, assemble_J,
                        assemble_R, degeneracy_residuals, extended_block,
                        force_flux, outputs, port_pairing, self_trace_signal)

__version__ = "0.1.0"

__all__ = [
    "AssembledOperator", "BalanceReport", "Boundary", "ConfigError",
    "ConvergenceError", "DomainError", "ManufacturedCase", "Material", "Mesh",
    "PhflowError", "PortReadout", "PortSignal", "Profile", "QuadData",
    "RunResult", "State", "StepError", "ThermoPoint", "TopologyError",
    "apply_B", "assemble_B", "assemble_factorization", "assemble_J",
    "assemble_R", "backend_name", "balance_check", "build_mesh",
    "degeneracy_residuals", "entropy_production", "eval_eos",
    "exergy_dissipation", "extended_block", "force_flux", "functionals",
    "generator_derivatives", "gibbs_duhem_residual", "outputs",
    "port_pairing", "rhs", "run", "self_trace_signal", "step", "trace",
    "weak_strong_consistency",
]
