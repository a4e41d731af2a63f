"""Enumeration of candidate single-axiom formulas T = x and their symmetries.

Shapes are full binary trees (Catalan-many for a fixed leaf count); a
candidate fills a shape with a fixed leaf multiset, one occurrence of the
right-hand variable and of e, two each of the remaining variables by
default.  Mirroring the left side and swapping the two doubled variables
both map single axioms for the variety to single axioms, so they are the
natural deduplication symmetries; the convention is explicit and
configurable because the published count of 1323 does not match either
the raw count or any quotient tried here (see ``count_report``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Union

from .terms import CONST_NAME, E, Identity, Product, Term, Var, leaves, mirror

MAX_SHAPE_LEAVES = 12

PUBLISHED_CANDIDATE_COUNT = 1323
COUNT_DISCREPANCY_NOTE = (
    "The originally reported candidate count is 1323; the raw enumeration of"
    " the stated shape gives 7560 and the quotient by the mirror and y-z swap"
    " symmetries gives 1890 (mirror or swap alone: 3780). No convention tried"
    " here reproduces 1323, and the original list was not published, so the"
    " discrepancy is reported rather than resolved."
)

# A shape is None for a leaf or a pair of shapes for a product.
Shape = Optional[tuple]


@dataclass(frozen=True)
class CandidateSpec:
    """Leaf multiset for the left side plus the right-hand variable."""

    leaf_counts: Mapping[str, int] = field(
        default_factory=lambda: {"x": 1, CONST_NAME: 1, "y": 2, "z": 2}
    )
    rhs: str = "x"

    def __post_init__(self) -> None:
        for name, count in self.leaf_counts.items():
            if count < 1:
                raise ValueError(f"leaf count for {name!r} must be positive")
            if name != CONST_NAME:
                Var(name)  # validates the letter
        if self.leaf_counts.get(self.rhs) != 1:
            raise ValueError(
                f"right-hand variable {self.rhs!r} must occur exactly once in the leaf multiset"
            )

    @property
    def n_leaves(self) -> int:
        return sum(self.leaf_counts.values())


@dataclass(frozen=True)
class SymmetryConvention:
    """Which symmetries identify candidates; the group has order 1, 2, or 4."""

    mirror: bool = False
    variable_swap: bool = False


def enumerate_shapes(n_leaves: int) -> list[Shape]:
    """All full binary trees with the given leaf count, in deterministic order.

    Order: a leaf is the single 1-leaf shape; an n-leaf shape enumerates left
    subtree sizes 1..n-1 ascending, left shapes outer, right shapes inner.
    """
    if not 1 <= n_leaves <= MAX_SHAPE_LEAVES:
        raise ValueError(f"leaf count must be in 1..{MAX_SHAPE_LEAVES}, got {n_leaves}")
    memo: dict[int, list[Shape]] = {1: [None]}

    def build(n: int) -> list[Shape]:
        if n in memo:
            return memo[n]
        shapes: list[Shape] = []
        for left_size in range(1, n):
            for left in build(left_size):
                for right in build(n - left_size):
                    shapes.append((left, right))
        memo[n] = shapes
        return shapes

    return build(n_leaves)


def label_shape(shape: Shape, labels: tuple[str, ...]) -> Term:
    """Fill a shape's leaves left-to-right with the given symbol names."""
    it = iter(labels)

    def fill(s: Shape) -> Term:
        if s is None:
            name = next(it)
            return E if name == CONST_NAME else Var(name)
        return Product(fill(s[0]), fill(s[1]))

    term = fill(shape)
    try:
        next(it)
    except StopIteration:
        return term
    raise ValueError("label count exceeds the shape's leaf count")


def _labelings(counts: Mapping[str, int]) -> Iterator[tuple[str, ...]]:
    """Distinct arrangements of the multiset, ascending lexicographically."""
    remaining = dict(counts)
    names = sorted(remaining)

    def rec(prefix: list[str], left: int) -> Iterator[tuple[str, ...]]:
        if left == 0:
            yield tuple(prefix)
            return
        for name in names:
            if remaining[name] > 0:
                remaining[name] -= 1
                prefix.append(name)
                yield from rec(prefix, left - 1)
                prefix.pop()
                remaining[name] += 1

    return rec([], sum(remaining.values()))


def enumerate_candidates(spec: CandidateSpec = CandidateSpec()) -> list[Identity]:
    """Every identity T = rhs with T over the spec's leaf multiset; no duplicates.

    Shapes vary in the outer loop (enumerate_shapes order), labelings in the
    inner loop (lexicographic), so the order is deterministic.
    """
    rhs = Var(spec.rhs)
    out: list[Identity] = []
    for shape in enumerate_shapes(spec.n_leaves):
        for labels in _labelings(spec.leaf_counts):
            out.append(Identity(label_shape(shape, labels), rhs))
    return out


# ---------------------------------------------------------------------------
# Canonical forms under the symmetry convention.
#
# Term order: compare the left-to-right leaf-name sequence first, then the
# shape (preorder walk, 0 for a product and 1 for a leaf).  Identities
# compare by (lhs key, rhs key).


def shape_of(t: Term) -> tuple[int, ...]:
    out: list[int] = []

    def walk(node: Term) -> None:
        if isinstance(node, Product):
            out.append(0)
            walk(node.left)
            walk(node.right)
        else:
            out.append(1)

    walk(t)
    return tuple(out)


def term_order_key(t: Term) -> tuple:
    return (tuple(leaves(t)), shape_of(t))


def identity_order_key(identity: Identity) -> tuple:
    return (term_order_key(identity.lhs), term_order_key(identity.rhs))


def _swap_vars(t: Term, a: str, b: str) -> Term:
    if isinstance(t, Product):
        return Product(_swap_vars(t.left, a, b), _swap_vars(t.right, a, b))
    if isinstance(t, Var):
        if t.name == a:
            return Var(b)
        if t.name == b:
            return Var(a)
    return t


def orbit(identity: Identity, conv: SymmetryConvention) -> list[Identity]:
    """The identity's images under the group generated by the enabled flags.

    Mirroring acts on the left side only; the swap renames y and z throughout.
    """
    images = [identity]
    if conv.mirror:
        images += [Identity(mirror(i.lhs), i.rhs) for i in images]
    if conv.variable_swap:
        images += [
            Identity(_swap_vars(i.lhs, "y", "z"), _swap_vars(i.rhs, "y", "z"))
            for i in images
        ]
    return images


def canonicalize(identity: Identity, conv: SymmetryConvention) -> Identity:
    """Least element of the orbit under the documented term order."""
    return min(orbit(identity, conv), key=identity_order_key)


def count_candidates(
    spec: CandidateSpec = CandidateSpec(),
    conv: SymmetryConvention = SymmetryConvention(),
) -> int:
    """Number of canonical representatives of the enumeration under ``conv``."""
    return len({identity_order_key(canonicalize(c, conv)) for c in enumerate_candidates(spec)})


def count_report(spec: CandidateSpec = CandidateSpec()) -> dict:
    """Candidate counts under every convention, next to the published figure."""
    return {
        "raw": count_candidates(spec, SymmetryConvention()),
        "mirror": count_candidates(spec, SymmetryConvention(mirror=True)),
        "variable_swap": count_candidates(spec, SymmetryConvention(variable_swap=True)),
        "mirror_and_swap": count_candidates(
            spec, SymmetryConvention(mirror=True, variable_swap=True)
        ),
        "published_reference": PUBLISHED_CANDIDATE_COUNT,
        "note": COUNT_DISCREPANCY_NOTE,
    }
