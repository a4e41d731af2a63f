"""Internal term representation for the prover: unification, matching, positions.

A term is an int (a variable), a string (a constant: 'e', or a Skolem
constant 'c0', 'c1', ... used for goals), or a pair of terms (a product).
Tuples keep terms hashable and cheap to share; variables are plain indices
so renaming apart is an offset.  Conversion from the user-facing tree types
happens at the prover boundary.
"""

from __future__ import annotations

import re
from typing import Iterator, Optional, Union

from ..terms import Const, Identity, Product, Term, Var

ITerm = Union[int, str, tuple]
Equation = tuple[ITerm, ITerm]

E = "e"

_VAR_DISPLAY = "xyzuvwpqrstabcdfghijklmno"  # 'e' excluded
_VAR_TOKEN = re.compile(r"v(\d+)$")


def is_var(t: ITerm) -> bool:
    return isinstance(t, int)


def is_const(t: ITerm) -> bool:
    return isinstance(t, str)


def from_term(t: Term, varmap: dict[str, int]) -> ITerm:
    """Convert a user-facing term, numbering variables by first occurrence."""
    if isinstance(t, Product):
        left = from_term(t.left, varmap)
        return (left, from_term(t.right, varmap))
    if isinstance(t, Const):
        return E
    index = varmap.get(t.name)
    if index is None:
        index = len(varmap)
        varmap[t.name] = index
    return index


def identity_to_equation(identity: Identity) -> Equation:
    varmap: dict[str, int] = {}
    return (from_term(identity.lhs, varmap), from_term(identity.rhs, varmap))


def to_term(t: ITerm) -> Term:
    """Convert back to the user-facing tree; variables become letters."""
    if isinstance(t, tuple):
        return Product(to_term(t[0]), to_term(t[1]))
    if isinstance(t, str):
        if t == E:
            return Const()
        raise ValueError(f"constant {t!r} has no user-facing form")
    if t >= len(_VAR_DISPLAY):
        raise ValueError(f"variable index {t} exceeds the display alphabet")
    return Var(_VAR_DISPLAY[t])


def equation_to_identity(eq: Equation) -> Identity:
    lhs, rhs = renumber(eq)
    return Identity(to_term(lhs), to_term(rhs))


def term_size(t: ITerm) -> int:
    if isinstance(t, tuple):
        return 1 + term_size(t[0]) + term_size(t[1])
    return 1


def variables(t: ITerm) -> set[int]:
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


def var_counts(t: ITerm) -> dict[int, int]:
    out: dict[int, int] = {}
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, tuple):
            stack.append(node[0])
            stack.append(node[1])
        elif isinstance(node, int):
            out[node] = out.get(node, 0) + 1
    return out


def subst(t: ITerm, sigma: dict[int, ITerm]) -> ITerm:
    if isinstance(t, tuple):
        return (subst(t[0], sigma), subst(t[1], sigma))
    if isinstance(t, int):
        return sigma.get(t, t)
    return t


def shift_vars(t: ITerm, offset: int) -> ITerm:
    if isinstance(t, tuple):
        return (shift_vars(t[0], offset), shift_vars(t[1], offset))
    if isinstance(t, int):
        return t + offset
    return t


def renumber(eq: Equation) -> Equation:
    """Rename variables to 0,1,2,... in order of first occurrence across the pair."""
    mapping: dict[int, int] = {}

    def walk(t: ITerm) -> ITerm:
        if isinstance(t, tuple):
            left = walk(t[0])
            return (left, walk(t[1]))
        if isinstance(t, int):
            new = mapping.get(t)
            if new is None:
                new = len(mapping)
                mapping[t] = new
            return new
        return t

    lhs = walk(eq[0])
    rhs = walk(eq[1])
    return (lhs, rhs)


def term_key(t: ITerm) -> tuple:
    """Total-order key so equations can be compared deterministically."""
    if isinstance(t, tuple):
        return (2, term_key(t[0]), term_key(t[1]))
    if isinstance(t, str):
        return (1, t)
    return (0, t)


def compare_terms(s: ITerm, t: ITerm) -> int:
    """-1, 0, or 1 under the same total order as :func:`term_key`."""
    if s == t:
        return 0
    s_rank = 2 if isinstance(s, tuple) else 1 if isinstance(s, str) else 0
    t_rank = 2 if isinstance(t, tuple) else 1 if isinstance(t, str) else 0
    if s_rank != t_rank:
        return -1 if s_rank < t_rank else 1
    if s_rank == 2:
        left = compare_terms(s[0], t[0])
        if left:
            return left
        return compare_terms(s[1], t[1])
    return -1 if s < t else 1


def canonical_equation(eq: Equation) -> Equation:
    """Orientation-insensitive canonical form used for deduplication.

    The side that is larger in the deterministic term order goes first, so
    oriented equations usually read left to right.
    """
    a = renumber(eq)
    b = renumber((eq[1], eq[0]))
    order = compare_terms(a[0], b[0]) or compare_terms(a[1], b[1])
    return a if order >= 0 else b


# ---------------------------------------------------------------------------
# Unification and matching


def _resolve(t: ITerm, sigma: dict[int, ITerm]) -> ITerm:
    while isinstance(t, int) and t in sigma:
        t = sigma[t]
    return t


def _occurs(v: int, t: ITerm, sigma: dict[int, ITerm]) -> bool:
    stack = [t]
    while stack:
        node = _resolve(stack.pop(), sigma)
        if isinstance(node, tuple):
            stack.append(node[0])
            stack.append(node[1])
        elif node == v:
            return True
    return False


def unify(s: ITerm, t: ITerm) -> Optional[dict[int, ITerm]]:
    """Most general unifier as a triangular substitution, or None."""
    sigma: dict[int, ITerm] = {}
    queue = [(s, t)]
    while queue:
        a, b = queue.pop()
        a = _resolve(a, sigma)
        b = _resolve(b, sigma)
        if a == b:
            continue
        if isinstance(a, int):
            # Binding to a leaf cannot create a cycle; only terms need the
            # occurs check.
            if isinstance(b, tuple) and _occurs(a, b, sigma):
                return None
            sigma[a] = b
        elif isinstance(b, int):
            if isinstance(a, tuple) and _occurs(b, a, sigma):
                return None
            sigma[b] = a
        elif isinstance(a, tuple) and isinstance(b, tuple):
            queue.append((a[0], b[0]))
            queue.append((a[1], b[1]))
        else:
            return None
    return sigma


def apply_mgu(t: ITerm, sigma: dict[int, ITerm]) -> ITerm:
    """Apply a triangular substitution produced by :func:`unify` exhaustively."""
    t = _resolve(t, sigma)
    if isinstance(t, tuple):
        return (apply_mgu(t[0], sigma), apply_mgu(t[1], sigma))
    return t


def match(pattern: ITerm, t: ITerm, sigma: Optional[dict[int, ITerm]] = None) -> Optional[dict[int, ITerm]]:
    """One-way matching: a substitution with pattern@sigma == t, or None."""
    if sigma is None:
        sigma = {}
    stack = [(pattern, t)]
    while stack:
        p, u = stack.pop()
        if isinstance(p, int):
            bound = sigma.get(p)
            if bound is None:
                sigma[p] = u
            elif bound != u:
                return None
        elif isinstance(p, tuple):
            if not isinstance(u, tuple):
                return None
            stack.append((p[0], u[0]))
            stack.append((p[1], u[1]))
        elif p != u:
            return None
    return sigma


# ---------------------------------------------------------------------------
# Positions


def nonvar_positions(t: ITerm) -> Iterator[tuple[tuple[int, ...], ITerm]]:
    """All non-variable positions as (path, subterm), preorder, root first."""
    stack: list[tuple[tuple[int, ...], ITerm]] = [((), t)]
    while stack:
        path, node = stack.pop()
        if isinstance(node, int):
            continue
        yield (path, node)
        if isinstance(node, tuple):
            stack.append((path + (1,), node[1]))
            stack.append((path + (0,), node[0]))


def replace_at(t: ITerm, path: tuple[int, ...], replacement: ITerm) -> ITerm:
    if not path:
        return replacement
    head, rest = path[0], path[1:]
    assert isinstance(t, tuple)
    if head == 0:
        return (replace_at(t[0], rest, replacement), t[1])
    return (t[0], replace_at(t[1], rest, replacement))


# ---------------------------------------------------------------------------
# Serialization: vN variables, full parentheses, for trace files.


def format_iterm(t: ITerm) -> str:
    if isinstance(t, tuple):
        return f"({format_iterm(t[0])}·{format_iterm(t[1])})"
    if isinstance(t, int):
        return f"v{t}"
    return t


def format_equation(eq: Equation) -> str:
    return f"{format_iterm(eq[0])} = {format_iterm(eq[1])}"


def parse_iterm(text: str) -> ITerm:
    """Parse the trace serialization format produced by :func:`format_iterm`."""
    pos = 0

    def skip_ws() -> None:
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def atom() -> ITerm:
        nonlocal pos
        skip_ws()
        if pos >= len(text):
            raise ValueError(f"unexpected end of term in {text!r}")
        ch = text[pos]
        if ch == "(":
            pos += 1
            left = atom()
            skip_ws()
            if pos >= len(text) or text[pos] not in ("·", "*"):
                raise ValueError(f"expected product dot in {text!r}")
            pos += 1
            right = atom()
            skip_ws()
            if pos >= len(text) or text[pos] != ")":
                raise ValueError(f"missing ')' in {text!r}")
            pos += 1
            return (left, right)
        m = re.match(r"v(\d+)|c(\d+)|e", text[pos:])
        if not m:
            raise ValueError(f"bad token at offset {pos} in {text!r}")
        pos += m.end()
        if m.group(1) is not None:
            return int(m.group(1))
        return m.group(0)

    result = atom()
    skip_ws()
    if pos != len(text):
        raise ValueError(f"trailing text in {text!r}")
    return result


def parse_equation(text: str) -> Equation:
    left, sep, right = text.partition(" = ")
    if not sep:
        raise ValueError(f"equation must contain ' = ': {text!r}")
    return (parse_iterm(left.strip()), parse_iterm(right.strip()))


def variant(eq1: Equation, eq2: Equation) -> bool:
    """Equal modulo injective variable renaming (either side order)."""
    if renumber(eq1) == renumber(eq2):
        return True
    return renumber((eq1[1], eq1[0])) == renumber(eq2)
