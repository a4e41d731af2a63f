"""Reduction orderings on internal terms: Knuth-Bendix (default) and LPO.

The signature has one binary symbol (the product) and constants.  The
product is maximal in the precedence; among constants, 'e' is minimal and
Skolem constants c0 < c1 < ... sit between.  KBO gives every symbol and
variable weight 1, which orients the square and unit laws the right way and
leaves commutativity unorientable, as it must.
"""

from __future__ import annotations

from dataclasses import dataclass

from .termops import ITerm, term_size, var_counts

_PRODUCT_PREC = 1 << 30


def _prec(symbol: str) -> int:
    if symbol == "e":
        return 0
    if symbol.startswith("c"):
        return 1 + int(symbol[1:])
    raise ValueError(f"unknown constant {symbol!r}")


@dataclass(frozen=True)
class TermOrdering:
    """Kind plus KBO weight parameters; the precedence is fixed (see module doc)."""

    kind: str = "kbo"  # kbo | lpo
    symbol_weight: int = 1
    variable_weight: int = 1

    def __post_init__(self) -> None:
        if self.kind not in ("kbo", "lpo"):
            raise ValueError(f"unknown ordering kind {self.kind!r}")
        if self.symbol_weight < 1 or self.variable_weight < 1:
            raise ValueError("weights must be positive")
        if self.variable_weight > self.symbol_weight:
            raise ValueError("variable weight must not exceed constant weight")

    def greater(self, s: ITerm, t: ITerm) -> bool:
        if self.kind == "kbo":
            return _kbo_greater(self, s, t)
        return _lpo_greater(s, t)


def _weight(ord_: TermOrdering, t: ITerm) -> int:
    if isinstance(t, tuple):
        return ord_.symbol_weight + _weight(ord_, t[0]) + _weight(ord_, t[1])
    if isinstance(t, int):
        return ord_.variable_weight
    return ord_.symbol_weight


def _kbo_greater(ord_: TermOrdering, s: ITerm, t: ITerm) -> bool:
    if s == t:
        return False
    cs = var_counts(s)
    for v, count in var_counts(t).items():
        if cs.get(v, 0) < count:
            return False
    ws = _weight(ord_, s)
    wt = _weight(ord_, t)
    if ws != wt:
        return ws > wt
    # Equal weights: a variable is never greater; compare head symbols, then
    # arguments lexicographically.  (The unary-spine special case of textbook
    # KBO cannot arise: there are no unary symbols.)
    if isinstance(s, int):
        return False
    if isinstance(t, int):
        # Equal weight to a bare variable means s is that variable (weights
        # are positive), which s == t already excluded.
        return False
    s_prec = _PRODUCT_PREC if isinstance(s, tuple) else _prec(s)
    t_prec = _PRODUCT_PREC if isinstance(t, tuple) else _prec(t)
    if s_prec != t_prec:
        return s_prec > t_prec
    if isinstance(s, tuple) and isinstance(t, tuple):
        if s[0] != t[0]:
            return _kbo_greater(ord_, s[0], t[0])
        return _kbo_greater(ord_, s[1], t[1])
    return False


def _lpo_ge(s: ITerm, t: ITerm) -> bool:
    return s == t or _lpo_greater(s, t)


def _lpo_greater(s: ITerm, t: ITerm) -> bool:
    if s == t:
        return False
    if isinstance(t, int):
        return not isinstance(s, int) and t in _term_vars(s)
    if isinstance(s, int):
        return False
    if isinstance(s, tuple):
        if _lpo_ge(s[0], t) or _lpo_ge(s[1], t):
            return True
        if isinstance(t, tuple):
            # Same head symbol: lexicographic on arguments, s above the rest.
            if s[0] == t[0]:
                return _lpo_greater(s[1], t[1])
            return (
                _lpo_greater(s[0], t[0])
                and _lpo_greater(s, t[1])
            )
        return True  # product is maximal in precedence, t is a constant
    # s is a constant; it dominates only smaller constants.
    if isinstance(t, tuple):
        return False
    return _prec(s) > _prec(t)


def _term_vars(t: ITerm) -> set[int]:
    out: set[int] = set()
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, tuple):
            stack.append(node[0])
            stack.append(node[1])
        elif isinstance(node, int):
            out.add(node)
    return out


KBO = TermOrdering("kbo")
LPO = TermOrdering("lpo")
