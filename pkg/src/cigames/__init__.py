"""Exact game-theoretic analysis of when information gets shared.

Polymatrix games whose strategies may depend on private bits, pre-play
stages that move those bits between players, norm classifiers, payoff and
communication mechanisms, and a ledger that recomputes published results.
"""

from .core import (Bit, Context, Game, KnowledgeState, Player, Strategy, Variant,
                   expected_payoff, strategy_space, total_payoff)
from .equilibria import (EquilibriumSet, best_response, enumerate_nash, is_nash,
                         pareto_frontier, payoff_dominant)
from .errors import (BudgetExceeded, DocumentError, GameError, InvalidChoice, InvalidMechanism,
                     KnowledgeViolation, ParseError, ScriptError, SelectionFailure)
from .mechanisms import (BandwidthPolicy, NoisyChannel, TaxRule, TransferRule, apply_distributional,
                         apply_interactive, apply_noisy, attainable_bits, build_bandwidth,
                         prob_informative, welfare_delta)
from .norms import NORMS, NormVerdict, classify
from .notation import format_profile, format_strategy, parse_for, parse_profile
from .presets import preset
from .staged import (Accept, Commit, NatureDraw, Observe, Play, Reveal, ScenarioScript, Share,
                     Signal, SolutionTree, continuation, continuation_value, solve)
