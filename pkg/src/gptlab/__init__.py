"""Numerical toolkit for convex operational theories and causal-order tests.

Builds finite state/effect spaces, enumerates their extremal states, certifies
operational superpositions, and evaluates causal-order inequalities on the
outcome tables of a control-qubit order switch.
"""

from .drf import (ALGEBRAIC_BOUND, BOUND, REFERENCE_QUANTUM_OPTIMUM, InequalityReport,
                  OptimizationResult, StrategyGrid, chsh_score, eval_inequality,
                  eval_term, mixture_dominance_check, optimize_strategy, product_game,
                  standard_grid)
from .errors import InputError, InvariantError
from .gpt import (GptSpace, SuperpositionWitness, find_superposition, hull_distance,
                  in_hull, is_extremal, max_membership, min_tensor,
                  product_superposition_witness, space_from_json, space_to_json,
                  validate_witness)
from .linalg import phi_plus, phi_minus, phi_pr
from .polytope import (LinearInequality, VertexSet, enumerate_vertices,
                       facets_from_effects, family_counts, slice_polygon, vertex_diff)
from .presets import load_preset, load_scenario, scenario_from_json, scenario_to_json
from .spaces import (OBSERVABLES, SPACE_BUILDERS, boxworld_space, classical_bit_space,
                     gbit_space, glt_space, hex_space, observable_kets,
                     reference_vertices, space, square_space)
from .switch import (AXES, PRESET_NAMES, ConditionalDistribution, LabAOp,
                     LabMeasurement, SwitchScenario, bell_distribution, bell_matrix,
                     build_K, distribution_csv, identity_reduction_check,
                     switch_distribution, table_from_effects, wiring_from_function)
from .tolerances import DEFAULT, Tolerances, default_tolerances

__version__ = "0.1.0"

__all__ = [
    "ALGEBRAIC_BOUND", "AXES", "BOUND", "ConditionalDistribution", "DEFAULT",
    "GptSpace", "InequalityReport", "InputError", "InvariantError", "LabAOp",
    "LabMeasurement", "LinearInequality", "OBSERVABLES", "OptimizationResult",
    "PRESET_NAMES", "REFERENCE_QUANTUM_OPTIMUM", "SPACE_BUILDERS", "StrategyGrid",
    "SuperpositionWitness", "SwitchScenario", "Tolerances", "VertexSet",
    "bell_distribution", "bell_matrix", "boxworld_space", "build_K", "chsh_score",
    "classical_bit_space", "default_tolerances", "distribution_csv",
    "enumerate_vertices", "eval_inequality", "eval_term", "facets_from_effects",
    "family_counts", "find_superposition", "gbit_space", "glt_space", "hex_space",
    "hull_distance", "identity_reduction_check", "in_hull", "is_extremal",
    "load_preset", "load_scenario", "max_membership", "min_tensor",
    "mixture_dominance_check", "observable_kets", "optimize_strategy", "phi_minus",
    "phi_plus", "phi_pr", "product_game", "product_superposition_witness",
    "reference_vertices", "scenario_from_json", "scenario_to_json", "slice_polygon",
    "space", "space_from_json", "space_to_json", "square_space", "standard_grid",
    "switch_distribution", "table_from_effects", "validate_witness", "vertex_diff",
    "wiring_from_function",
]
