"""Network design and defense against an adversary helped by byzantine nodes.

A designer builds a network and protects some nodes; an adversary who knows
which nodes are byzantine infects ``n_A`` of them, and the infection spreads
through every unprotected or byzantine neighbour. The package evaluates plays
exactly, solves the centralized design problem, enumerates equilibria when
nodes protect themselves, and measures the price of anarchy.
"""

from .analysis import (poa_trend, price_of_anarchy, verify_byzantine_core_attack,
                       verify_star_characterization)
from .centralized import (DesignOutcome, ThresholdTable, canonicalize_to_star, optimal_design,
                          threshold_table, w_two, w_value)
from .equilibria import EquilibriumProfile, EquilibriumSet, is_equilibrium, node_game_equilibria
from .errors import (DomainError, InvalidArgument, LimitExceeded, NetdefError,
                     UnsupportedConfiguration)
from .game import (GameConfig, PlayOutcome, ProtectedNetwork, attack_graph, best_response_attacks,
                   expected_utilities, pessimistic_designer_utility, pessimistic_node_utility,
                   residual_network)
from .graph import (GeneralizedStar, Network, build_generalized_star, components,
                    is_generalized_star, network_value, remove_nodes)
from .oracle import brute_force_optimal
from .starspace import star_equilibria
from .valuefn import ValidationReport, ValueFunction, validate_value_function

__all__ = [
    "Network", "GeneralizedStar", "components", "remove_nodes", "network_value",
    "build_generalized_star", "is_generalized_star", "ValueFunction", "ValidationReport",
    "validate_value_function", "GameConfig", "ProtectedNetwork", "PlayOutcome", "attack_graph",
    "residual_network", "best_response_attacks", "pessimistic_designer_utility",
    "pessimistic_node_utility", "expected_utilities", "w_value", "w_two", "optimal_design",
    "DesignOutcome", "threshold_table", "ThresholdTable", "canonicalize_to_star",
    "brute_force_optimal", "node_game_equilibria", "EquilibriumProfile", "EquilibriumSet",
    "is_equilibrium", "star_equilibria", "verify_star_characterization",
    "verify_byzantine_core_attack", "price_of_anarchy", "poa_trend", "NetdefError",
    "InvalidArgument", "DomainError", "UnsupportedConfiguration", "LimitExceeded",
]
