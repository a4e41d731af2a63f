"""Two independent decision procedures for validity in every Boolean group.

An identity holds in all groups of exponent 2 exactly when each variable
occurs an even number of times across both sides; the constant is exempt.
The second procedure evaluates both sides over the two-element group
({0,1}, XOR, e=0), which generates the variety, and therefore must agree
with the parity test on every input.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .terms import CONST_NAME, Const, Identity, Product, Term, Var, occurrences

MAX_Z2_VARIABLES = 20


@dataclass(frozen=True)
class DecisionResult:
    """Outcome of the two-element-group check.

    ``witness`` is present iff ``is_theorem`` is false, and maps variables to
    {0,1} so that the two sides evaluate differently.
    """

    is_theorem: bool
    witness: Optional[dict[str, int]] = None


def parity_decide(identity: Identity) -> bool:
    """True iff every variable occurs an even number of times in S = T."""
    counts = occurrences(identity.lhs) + occurrences(identity.rhs)
    return all(c % 2 == 0 for name, c in counts.items() if name != CONST_NAME)


def _eval_z2(t: Term, env: dict[str, int]) -> int:
    if isinstance(t, Product):
        return _eval_z2(t.left, env) ^ _eval_z2(t.right, env)
    if isinstance(t, Const):
        return 0
    return env[t.name]


def z2_decide(identity: Identity) -> DecisionResult:
    """Exhaustive check over the two-element Boolean group.

    Variables are assigned in sorted order, 0 before 1, so the returned
    witness is the first failing assignment in that order.
    """
    counts = occurrences(identity.lhs) + occurrences(identity.rhs)
    names = sorted(n for n in counts if n != CONST_NAME)
    if len(names) > MAX_Z2_VARIABLES:
        raise ValueError(
            f"identity has {len(names)} distinct variables,"
            f" exceeding the exhaustive bound of {MAX_Z2_VARIABLES}"
        )
    for values in itertools.product((0, 1), repeat=len(names)):
        env = dict(zip(names, values))
        if _eval_z2(identity.lhs, env) != _eval_z2(identity.rhs, env):
            return DecisionResult(False, env)
    return DecisionResult(True, None)
