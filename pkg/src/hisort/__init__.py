"""Hierarchical multicriteria sorting with interacting criteria.

Preference statements over a criteria hierarchy are translated into linear
constraints on a 2-additive capacity and class thresholds; on top of that sit
compatibility checks, minimal interacting-pair sets, robust (necessary /
possible) assignments, stochastic acceptability indices, and a forecast
benchmark.
"""

from .elicitation import (CompatibilityResult, CompatibleModel, ConstraintSystem,
                          SortingSpec, check_compatibility, check_ws_compatibility,
                          translate, witness_model)
from .errors import HisortError
from .hierarchy import CriterionHierarchy, flat_hierarchy
from .mobius import (Capacity, Mobius2Additive, choquet_2additive, choquet_general,
                     choquet_node, interaction_node, shapley_node)
from .parsimony import enumerate_minimal_sets, find_first_minimal_set
from .ror import assignment_report, necessarily_in, possibly_in
from .session import Session, SessionStore
from .smaa import (CAIMatrix, FinalAssignment, aggregate_loss, compute_cai,
                   enumerate_optimal_assignments, most_frequent_classification,
                   sample_models)
from .statements import (AssignAtLeast, AssignAtMost, AssignExact, AssignInterval,
                         EquallyImportant, Indifference, MoreImportant,
                         NegativeInteraction, PairwisePreference,
                         PositiveInteraction)
from .tables import NormalizedTable, PerformanceTable, normalize

__version__ = "0.1.0"

__all__ = [
    "AssignAtLeast", "AssignAtMost", "AssignExact", "AssignInterval",
    "CAIMatrix", "Capacity", "CompatibilityResult", "CompatibleModel",
    "ConstraintSystem", "CriterionHierarchy", "EquallyImportant",
    "FinalAssignment", "HisortError", "Indifference", "Mobius2Additive",
    "MoreImportant", "NegativeInteraction", "NormalizedTable",
    "PairwisePreference", "PerformanceTable", "PositiveInteraction", "Session",
    "SessionStore", "SortingSpec", "aggregate_loss", "assignment_report",
    "check_compatibility", "check_ws_compatibility", "choquet_2additive",
    "choquet_general", "choquet_node", "compute_cai", "enumerate_minimal_sets",
    "enumerate_optimal_assignments", "find_first_minimal_set", "flat_hierarchy",
    "interaction_node", "most_frequent_classification", "necessarily_in",
    "normalize", "possibly_in", "sample_models", "shapley_node", "translate",
    "witness_model",
]
