"""The eleven published candidate formulas, embedded as data.

Tags are opaque page/column/position coordinates from the source table;
the arrow suffixes are transliterated as 'u' (up) and 'd' (down) so tags
stay ASCII.  The first eight were listed as single axioms for the variety,
the last three as axioms for its finite models only.
"""

from __future__ import annotations

from .terms import Identity, TaggedFormula, format_formula_line, parse_identity

_RAW: tuple[tuple[str, str], ...] = (
    ("80R4u", "((e·xy)·yz)z = x"),
    ("81R1d", "e((x·yz)y·z) = x"),
    ("81L2d", "e(xy·z)·yz = x"),
    ("81R2d", "((e·xy)·zy)z = x"),
    ("81L3d", "(e(x·yz)·y)z = x"),
    ("81R3d", "e((x·yz)z·y) = x"),
    ("81M2d", "e(xy·zy)·z = x"),
    ("81R3u", "e((xy·z)·yz) = x"),
    ("81L2", "(ex·yz)y·z = x"),
    ("81M2", "(ex·y)z·yz = x"),
    ("81R1", "(ex·yz)z·y = x"),
)

AXIOM_TAGS: tuple[str, ...] = tuple(tag for tag, _ in _RAW[:8])
FINITE_ONLY_TAGS: tuple[str, ...] = tuple(tag for tag, _ in _RAW[8:])

FIXTURES: tuple[TaggedFormula, ...] = tuple(
    TaggedFormula(tag, parse_identity(text)) for tag, text in _RAW
)


def fixture(tag: str) -> TaggedFormula:
    for entry in FIXTURES:
        if entry.tag == tag:
            return entry
    raise KeyError(f"no fixture tagged {tag!r}")


def fixture_identity(tag: str) -> Identity:
    return fixture(tag).identity


def fixtures_text() -> str:
    """The embedded formulas in the formula file format."""
    lines = [format_formula_line(entry.identity, entry.tag) for entry in FIXTURES]
    return "\n".join(lines) + "\n"
