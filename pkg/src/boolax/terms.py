"""Terms and identities of the groupoid language with binary product and constant e.

A term is an immutable tree built from the constant ``e``, single-letter
variables, and binary products.  The concrete syntax follows the compact
convention of the single-axiom literature: juxtaposition is a product that
binds tighter than the explicit dot, and both associate to the left, so
``e·xy`` reads ``e·(x·y)`` and ``xyz`` reads ``(xy)z``.  ``*`` is accepted
as an ASCII alias for the middle dot.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Optional, Union

CONST_NAME = "e"
DOT = "·"
DOT_CHARS = frozenset({DOT, "*"})


class ParseError(ValueError):
    """Syntax error in term or identity text; ``position`` is a 0-based offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class Const:
    """The distinguished constant ``e``."""

    def __repr__(self) -> str:
        return "e"


E = Const()


@dataclass(frozen=True)
class Var:
    name: str

    def __post_init__(self) -> None:
        ok = (
            len(self.name) == 1
            and self.name.isascii()
            and self.name.islower()
            and self.name.isalpha()
            and self.name != CONST_NAME
        )
        if not ok:
            raise ValueError(
                f"variable must be a single lowercase letter other than {CONST_NAME!r},"
                f" got {self.name!r}"
            )

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Product:
    left: "Term"
    right: "Term"

    def __repr__(self) -> str:
        return f"({self.left!r}{DOT}{self.right!r})"


Term = Union[Const, Var, Product]


@dataclass(frozen=True)
class Identity:
    """An equation between two terms, both sides universally quantified."""

    lhs: Term
    rhs: Term

    def __str__(self) -> str:
        return f"{print_term(self.lhs)} = {print_term(self.rhs)}"


@dataclass(frozen=True)
class TaggedFormula:
    tag: str
    identity: Identity


# ---------------------------------------------------------------------------
# Parsing
#
# term    := factor (DOT factor)*        left-associative
# factor  := atom atom*                  juxtaposition, left-associative
# atom    := 'e' | variable | '(' term ')'

_LPAREN = "("
_RPAREN = ")"


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens: list[tuple[str, str, int]] = []
    for pos, ch in enumerate(text):
        if ch.isspace():
            continue
        if ch in DOT_CHARS:
            tokens.append(("dot", DOT, pos))
        elif ch == _LPAREN:
            tokens.append(("lparen", ch, pos))
        elif ch == _RPAREN:
            tokens.append(("rparen", ch, pos))
        elif ch == CONST_NAME:
            tokens.append(("const", ch, pos))
        elif ch.isascii() and ch.isalpha() and ch.islower():
            tokens.append(("var", ch, pos))
        else:
            raise ParseError(f"illegal character {ch!r}", pos)
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, str, int]], length: int):
        self.tokens = tokens
        self.i = 0
        self.end = length

    def peek(self) -> Optional[tuple[str, str, int]]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        tok = self.peek()
        return tok[2] if tok is not None else self.end

    def term(self) -> Term:
        t = self.factor()
        while True:
            tok = self.peek()
            if tok is None or tok[0] != "dot":
                return t
            self.i += 1
            t = Product(t, self.factor())

    def factor(self) -> Term:
        t = self.atom()
        while True:
            tok = self.peek()
            if tok is None or tok[0] not in ("const", "var", "lparen"):
                return t
            t = Product(t, self.atom())

    def atom(self) -> Term:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input, expected a term", self.pos())
        kind, value, pos = tok
        if kind == "const":
            self.i += 1
            return E
        if kind == "var":
            self.i += 1
            return Var(value)
        if kind == "lparen":
            self.i += 1
            inner = self.term()
            closing = self.peek()
            if closing is None or closing[0] != "rparen":
                raise ParseError("unbalanced '(': missing ')'", pos)
            self.i += 1
            return inner
        raise ParseError(f"unexpected {value!r}, expected a term", pos)


def parse_term(text: str) -> Term:
    """Parse a term; raises :class:`ParseError` with a position on bad input."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty term", 0)
    parser = _Parser(tokens, len(text))
    t = parser.term()
    trailing = parser.peek()
    if trailing is not None:
        kind, value, pos = trailing
        if kind == "rparen":
            raise ParseError("unbalanced ')'", pos)
        raise ParseError(f"unexpected {value!r} after term", pos)
    return t


def parse_identity(text: str) -> Identity:
    """Parse ``S = T``; exactly one '=' is required and both sides must parse."""
    if text.count("=") != 1:
        raise ParseError(
            "an identity needs exactly one '='", text.find("=") if "=" in text else 0
        )
    eq = text.index("=")
    left, right = text[:eq], text[eq + 1 :]
    try:
        lhs = parse_term(left)
    except ParseError as exc:
        raise ParseError(f"left side: {exc.args[0]}", exc.position) from None
    try:
        rhs = parse_term(right)
    except ParseError as exc:
        raise ParseError(f"right side: {exc.args[0]}", eq + 1 + exc.position) from None
    return Identity(lhs, rhs)


# ---------------------------------------------------------------------------
# Printing
#
# Canonical style: parentheses are minimal; on cost ties a product of two
# leaves prints as juxtaposition ("xy") while larger products prefer the
# explicit dot ("xy·z").  parse_term(print_term(t)) == t for every term.

_TERM, _FACTOR, _ATOM = 0, 1, 2


def _paren_cost(t: Term, ctx: int, memo: dict) -> int:
    if not isinstance(t, Product):
        return 0
    key = (id(t), ctx)
    cached = memo.get(key)
    if cached is not None:
        return cached
    if ctx == _ATOM:
        cost = 2 + _paren_cost(t, _TERM, memo)
    elif ctx == _FACTOR:
        cost = _paren_cost(t.left, _FACTOR, memo) + _paren_cost(t.right, _ATOM, memo)
    else:
        dot = _paren_cost(t.left, _TERM, memo) + _paren_cost(t.right, _FACTOR, memo)
        jux = _paren_cost(t, _FACTOR, memo)
        cost = min(dot, jux)
    memo[key] = cost
    return cost


def _leaf_text(t: Term) -> str:
    return CONST_NAME if isinstance(t, Const) else t.name  # type: ignore[union-attr]


def _print(t: Term, ctx: int, memo: dict) -> str:
    if not isinstance(t, Product):
        return _leaf_text(t)
    if ctx == _ATOM:
        return f"({_print(t, _TERM, memo)})"
    if ctx == _FACTOR:
        return _print(t.left, _FACTOR, memo) + _print(t.right, _ATOM, memo)
    dot = _paren_cost(t.left, _TERM, memo) + _paren_cost(t.right, _FACTOR, memo)
    jux = _paren_cost(t, _FACTOR, memo)
    both_leaves = not isinstance(t.left, Product) and not isinstance(t.right, Product)
    use_jux = jux < dot or (jux == dot and both_leaves)
    if use_jux:
        return _print(t, _FACTOR, memo)
    return _print(t.left, _TERM, memo) + DOT + _print(t.right, _FACTOR, memo)


def print_term(t: Term) -> str:
    """Emit minimal-parenthesis text that re-parses to exactly ``t``."""
    return _print(t, _TERM, {})


# ---------------------------------------------------------------------------
# Structural queries


def occurrences(t: Term) -> Counter:
    """Leaf counts by symbol name; the constant counts under ``'e'``."""
    counts: Counter = Counter()
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Product):
            stack.append(node.left)
            stack.append(node.right)
        else:
            counts[_leaf_text(node)] += 1
    return counts


def mirror(t: Term) -> Term:
    """Swap the children of every product; an involution on terms."""
    if isinstance(t, Product):
        return Product(mirror(t.right), mirror(t.left))
    return t


def leaves(t: Term) -> Iterator[str]:
    """Leaf names in left-to-right order."""
    if isinstance(t, Product):
        yield from leaves(t.left)
        yield from leaves(t.right)
    else:
        yield _leaf_text(t)


def term_size(t: Term) -> int:
    """Total number of nodes (leaves plus products)."""
    if isinstance(t, Product):
        return 1 + term_size(t.left) + term_size(t.right)
    return 1


# ---------------------------------------------------------------------------
# Formula files: one entry per line, optional "TAG: identity" prefix,
# '#' starts a comment, blank lines ignored.


@dataclass(frozen=True)
class FormulaEntry:
    lineno: int
    tag: Optional[str]
    identity: Identity


def parse_formula_text(text: str) -> tuple[list[FormulaEntry], list[tuple[int, str]]]:
    """Parse a formula file; returns (entries, errors-as-(lineno, message))."""
    entries: list[FormulaEntry] = []
    errors: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tag: Optional[str] = None
        body = line
        if ":" in line:
            head, rest = line.split(":", 1)
            head = head.strip()
            if head and "=" not in head:
                tag, body = head, rest
        try:
            identity = parse_identity(body)
        except ParseError as exc:
            errors.append((lineno, str(exc)))
            continue
        entries.append(FormulaEntry(lineno, tag, identity))
    return entries, errors


def format_formula_line(identity: Identity, tag: Optional[str] = None) -> str:
    text = str(identity)
    return f"{tag}: {text}" if tag else text
