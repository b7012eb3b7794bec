"""Work extraction from locally thermal qubit pairs coupled to two baths."""
from .dynamics import BathParams, Case, SystemSpec, Trajectory, evolve, initial_state
from .entanglement import concurrence
from .thermo import WorkConvention, ergotropy, global_work, local_work, solve_effective_beta

__all__ = [
    "BathParams", "Case", "SystemSpec", "Trajectory", "WorkConvention", "concurrence",
    "ergotropy", "evolve", "global_work", "initial_state", "local_work", "solve_effective_beta",
]
