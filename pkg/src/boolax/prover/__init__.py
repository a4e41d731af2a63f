"""Equational theorem proving by ordered Knuth-Bendix completion."""

from .completion import (
    PROVED,
    RESOURCE_OUT,
    SATURATED,
    CompletionStats,
    GoalResult,
    Limits,
    ProofOutcome,
    RewriteRule,
    RewriteSystem,
    complete,
    critical_pairs,
    derive,
    ground_joins,
    make_rule,
    normalize,
    skolemize_identity,
)
from .ordering import KBO, LPO, TermOrdering
from .trace import ProofTrace, ReplayError, TraceStep, replay

__all__ = [
    "PROVED",
    "RESOURCE_OUT",
    "SATURATED",
    "CompletionStats",
    "GoalResult",
    "KBO",
    "LPO",
    "Limits",
    "ProofOutcome",
    "ProofTrace",
    "ReplayError",
    "RewriteRule",
    "RewriteSystem",
    "TermOrdering",
    "TraceStep",
    "complete",
    "critical_pairs",
    "derive",
    "ground_joins",
    "make_rule",
    "normalize",
    "replay",
    "skolemize_identity",
]
