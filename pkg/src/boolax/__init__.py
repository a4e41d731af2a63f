"""Boolean-group single-axiom toolkit.

Parsing and printing of compact groupoid identities, the parity decision
procedure with its two-element-group oracle, candidate enumeration with
explicit symmetry conventions, finite model search, ordered completion
with replayable proof traces, and a classification pipeline tying them
together.  A FastAPI service exposes the operations; the CLI is a thin
client for it.
"""

from .decision import DecisionResult, parity_decide, z2_decide
from .terms import (
    Const,
    E,
    Identity,
    ParseError,
    Product,
    TaggedFormula,
    Term,
    Var,
    mirror,
    occurrences,
    parse_identity,
    parse_term,
    print_term,
)

__version__ = "0.1.0"

__all__ = [
    "Const",
    "DecisionResult",
    "E",
    "Identity",
    "ParseError",
    "Product",
    "TaggedFormula",
    "Term",
    "Var",
    "__version__",
    "mirror",
    "occurrences",
    "parity_decide",
    "parse_identity",
    "parse_term",
    "print_term",
    "z2_decide",
]
