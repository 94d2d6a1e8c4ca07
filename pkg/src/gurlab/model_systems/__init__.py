"""Concrete operator systems and the bound checkers built on them."""

from .rotor import RotorModel, rotor_bound_check, rotor_relation_residual
from .spin import (SpinSystem, angmom_two_state_bound, bounded_norm_bound, direct_sum,
                   prop4_bound, prop4_identity_residuals, prop4_operators, spin_system)
from .spreads import sin2_double_sum, spread_identity_check, spread_limit_check
from .transform import (Evolution, derivative_bound_check, time_evolution_bound,
                        transform_lambdas, transformed, unitary_transform_bound)
from .weyl import (PositionGrid, WeylPair, canonical_limit_check, clock_shift, commuting_pair,
                   mean_transport_check, shift_matrix, weyl_bound_check, weyl_residual)

__all__ = [
    "RotorModel", "rotor_bound_check", "rotor_relation_residual",
    "SpinSystem", "angmom_two_state_bound", "bounded_norm_bound", "direct_sum",
    "prop4_bound", "prop4_identity_residuals", "prop4_operators", "spin_system",
    "sin2_double_sum", "spread_identity_check", "spread_limit_check",
    "Evolution", "derivative_bound_check", "time_evolution_bound", "transform_lambdas",
    "transformed", "unitary_transform_bound",
    "PositionGrid", "WeylPair", "canonical_limit_check", "clock_shift", "commuting_pair",
    "mean_transport_check", "shift_matrix", "weyl_bound_check", "weyl_residual",
]
