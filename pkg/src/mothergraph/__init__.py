"""Schreier graphs of mother groups, their effective resistances, and
weighted Nash-Williams lower bounds over overlapping cutsets."""
from .words import (
    BINARY,
    DigitWord,
    TreeShape,
    beta_weight,
    ell_position,
    inverse_linear_position,
    linear_position,
    project_binary,
)
from .schreier import (
    Edge,
    Generator,
    Network,
    apply_generator,
    build_from_action,
    build_from_criterion,
    build_projected,
    edge_type,
    is_connected,
    project_network,
)
from .electric import effective_resistance, equilibrium_flow, equilibrium_voltage
from .nashwilliams import (
    Allocation,
    BoundReport,
    Cutset,
    optimal_allocation,
    proportional_allocation,
    split_conductance,
    validate_cutset,
    wnw_bound,
)
from .mothercuts import (
    cutset_conductance,
    cutset_enlarged,
    cutset_plain,
    enlarged_membership,
    recurrence_experiment,
    theorem_bound,
    weight_sum_over_cutsets,
)

__version__ = "0.1.0"

__all__ = [
    "BINARY",
    "DigitWord",
    "TreeShape",
    "beta_weight",
    "ell_position",
    "inverse_linear_position",
    "linear_position",
    "project_binary",
    "Edge",
    "Generator",
    "Network",
    "apply_generator",
    "build_from_action",
    "build_from_criterion",
    "build_projected",
    "edge_type",
    "is_connected",
    "project_network",
    "effective_resistance",
    "equilibrium_flow",
    "equilibrium_voltage",
    "Allocation",
    "BoundReport",
    "Cutset",
    "optimal_allocation",
    "proportional_allocation",
    "split_conductance",
    "validate_cutset",
    "wnw_bound",
    "cutset_conductance",
    "cutset_enlarged",
    "cutset_plain",
    "enlarged_membership",
    "recurrence_experiment",
    "theorem_bound",
    "weight_sum_over_cutsets",
]
