"""Finite model search over groupoid tables with a designated constant.

A model is an n×n Cayley table over 0..n-1 with the constant interpreted as
element 0 (models differing only in which element is named e are isomorphic,
so fixing it costs nothing and cuts the search by a factor of n).  The
search is depth-first over cells in row-major order with unit propagation on
ground instances: an instance whose reads are all decided is checked, and an
instance blocked on exactly one undecided cell tries every value for it,
failing if none survives and forcing the cell when exactly one does.
Instances are re-examined only when the cell they are blocked on gets
assigned (watched cells), so propagation cost stays proportional to what an
assignment can actually affect.  ``find_models_naive`` enumerates all
n^(n²) tables and is the independent oracle the search is validated
against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

from .terms import CONST_NAME, Const, Identity, Product, Term, occurrences

MAX_SEARCH_SIZE = 6
MAX_NAIVE_SIZE = 3


@dataclass(frozen=True)
class CayleyTable:
    """Finite groupoid: domain 0..n-1, designated constant, full operation table."""

    n: int
    e_index: int
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("domain size must be at least 1")
        if not 0 <= self.e_index < self.n:
            raise ValueError("constant index out of range")
        if len(self.table) != self.n or any(len(row) != self.n for row in self.table):
            raise ValueError("table must be n×n")
        if any(not 0 <= v < self.n for row in self.table for v in row):
            raise ValueError("table entry out of range")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], e_index: int = 0) -> "CayleyTable":
        return cls(len(rows), e_index, tuple(tuple(row) for row in rows))

    def to_json_dict(self) -> dict:
        return {"n": self.n, "e": self.e_index, "rows": [list(row) for row in self.table]}

    def format_grid(self) -> str:
        width = len(str(self.n - 1))
        head = " " * width + " | " + " ".join(f"{c:>{width}}" for c in range(self.n))
        sep = "-" * width + "-+-" + "-" * (self.n * (width + 1) - 1)
        rows = [
            f"{r:>{width}} | " + " ".join(f"{v:>{width}}" for v in row)
            for r, row in enumerate(self.table)
        ]
        return "\n".join([head, sep] + rows)


@dataclass(frozen=True)
class ModelQuery:
    """What to search for: identities to satisfy, domain size, and mode."""

    identities: tuple[Identity, ...]
    n: int
    mode: str = "all"  # all | one | count
    limit: Optional[int] = None
    least_number: bool = False

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("domain size must be at least 1")
        if self.mode not in ("all", "one", "count"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.limit is not None and self.limit < 1:
            raise ValueError("limit must be at least 1")


def evaluate(t: Term, tab: CayleyTable, assign: dict[str, int]) -> int:
    """Bottom-up evaluation; the constant evaluates to the designated element."""
    if isinstance(t, Product):
        return tab.table[evaluate(t.left, tab, assign)][evaluate(t.right, tab, assign)]
    if isinstance(t, Const):
        return tab.e_index
    try:
        return assign[t.name]
    except KeyError:
        raise ValueError(f"unassigned variable {t.name!r}") from None


def identity_variables(identity: Identity) -> list[str]:
    counts = occurrences(identity.lhs) + occurrences(identity.rhs)
    return sorted(name for name in counts if name != CONST_NAME)


def satisfies(tab: CayleyTable, identity: Identity) -> bool:
    """True iff both sides agree under every assignment into the domain."""
    names = identity_variables(identity)
    for values in itertools.product(range(tab.n), repeat=len(names)):
        assign = dict(zip(names, values))
        if evaluate(identity.lhs, tab, assign) != evaluate(identity.rhs, tab, assign):
            return False
    return True


# ---------------------------------------------------------------------------
# Compiled ground instances.
#
# Each instance is a straight-line program: ops are (a, b) source pairs,
# where a source >= 0 names an earlier op's result and a source < 0 encodes
# the domain element -(src+1).  The sides' results are two final sources.

_Prog = tuple[tuple[tuple[int, int], ...], int, int]


def _compile_instance(lhs: Term, rhs: Term, assign: dict[str, int]) -> _Prog:
    ops: list[tuple[int, int]] = []

    def walk(t: Term) -> int:
        if isinstance(t, Product):
            a = walk(t.left)
            b = walk(t.right)
            ops.append((a, b))
            return len(ops) - 1
        if isinstance(t, Const):
            return -1  # element 0
        return -(assign[t.name] + 1)

    left = walk(lhs)
    right = walk(rhs)
    return (tuple(ops), left, right)


def _compile_identities(identities: Sequence[Identity], n: int) -> list[_Prog]:
    progs = []
    for identity in identities:
        names = identity_variables(identity)
        for values in itertools.product(range(n), repeat=len(names)):
            progs.append(
                _compile_instance(identity.lhs, identity.rhs, dict(zip(names, values)))
            )
    return progs


class _Search:
    """Pure-Python reference search: DFS with unit propagation.

    After every assignment all still-pending instances are re-checked to a
    fixpoint: a fully decided instance is verified and dropped for the
    subtree; an instance blocked on one undecided cell refutes the values
    of that cell under which it evaluates to unequal sides.  Refuted values
    accumulate in a per-cell domain mask, a cell with one possible value
    left is forced, and an empty domain fails the branch.  The compiled
    engine in ``_search_engine`` runs the identical algorithm on flat
    arrays; this class stays as the readable, lazily-yielding reference the
    tests cross-check against.
    """

    def __init__(self, identities: Sequence[Identity], n: int, least_number: bool):
        self.n = n
        self.least_number = least_number
        self.progs = _compile_identities(identities, n)
        self.rows = [[-1] * n for _ in range(n)]  # -1 = undecided
        self.domains = [(1 << n) - 1] * (n * n)
        self.cells = [(r, c) for r in range(n) for c in range(n)]

    def _eval(self, prog: _Prog, hcell: int, hv: int) -> tuple[int, int, int]:
        """Evaluate; (lhs, rhs, blocked_cell): values -1 when blocked, cell -1 if none.

        The hypothetical value hv is read for the packed cell hcell when that
        cell is undecided; pass hcell = -1 to disable.
        """
        rows = self.rows
        regs: list[int] = []
        block = -1
        for a, b in prog[0]:
            av = regs[a] if a >= 0 else -a - 1
            bv = regs[b] if b >= 0 else -b - 1
            if av < 0 or bv < 0:
                regs.append(-1)
                continue
            v = rows[av][bv]
            if v < 0:
                if av * self.n + bv == hcell:
                    v = hv
                else:
                    if block < 0:
                        block = av * self.n + bv
                    regs.append(-1)
                    continue
            regs.append(v)
        left, right = prog[1], prog[2]
        lv = regs[left] if left >= 0 else -left - 1
        rv = regs[right] if right >= 0 else -right - 1
        return lv, rv, block

    def _propagate(
        self,
        pending: list[_Prog],
        trail: list[tuple[int, int]],
        mask_trail: list[tuple[int, int]],
    ) -> Optional[list[_Prog]]:
        """Check, narrow domains, and force to a fixpoint.

        Returns the surviving pending list, or None on contradiction.
        """
        rows = self.rows
        domains = self.domains
        n = self.n
        work = pending
        while True:
            nxt: list[_Prog] = []
            changed = False
            for prog in work:
                lv, rv, block = self._eval(prog, -1, -1)
                if block < 0:
                    if lv != rv:
                        return None
                    continue
                allowed = 0
                for v in range(n):
                    lv2, rv2, block2 = self._eval(prog, block, v)
                    if block2 >= 0 or lv2 == rv2:
                        allowed |= 1 << v
                old = domains[block]
                new = old & allowed
                if new == 0:
                    return None
                if new != old:
                    domains[block] = new
                    mask_trail.append((block, old))
                    changed = True
                    if new & (new - 1) == 0:
                        rows[block // n][block % n] = new.bit_length() - 1
                        trail.append(divmod(block, n))
                nxt.append(prog)
            work = nxt
            if not changed:
                return work

    def run(self) -> Iterator[CayleyTable]:
        trail: list[tuple[int, int]] = []
        mask_trail: list[tuple[int, int]] = []
        pending = self._propagate(self.progs, trail, mask_trail)
        if pending is not None:
            yield from self._extend(0, pending)

    def _extend(self, cell_index: int, pending: list[_Prog]) -> Iterator[CayleyTable]:
        rows = self.rows
        while cell_index < len(self.cells):
            r, c = self.cells[cell_index]
            if rows[r][c] < 0:
                break
            cell_index += 1
        else:
            yield CayleyTable(self.n, 0, tuple(tuple(row) for row in rows))
            return
        r, c = self.cells[cell_index]
        packed = r * self.n + c
        upper = self.n
        if self.least_number:
            upper = min(self.n, self._max_used() + 2)
        for value in range(upper):
            if not (self.domains[packed] >> value) & 1:
                continue
            rows[r][c] = value
            trail: list[tuple[int, int]] = [(r, c)]
            mask_trail: list[tuple[int, int]] = []
            survivors = self._propagate(pending, trail, mask_trail)
            if survivors is not None:
                yield from self._extend(cell_index + 1, survivors)
            for tr, tc in reversed(trail):
                rows[tr][tc] = -1
            for cell, old in reversed(mask_trail):
                self.domains[cell] = old
        return

    def _max_used(self) -> int:
        used = 0  # element 0 is always in play as the designated constant
        for row in self.rows:
            for v in row:
                if v > used:
                    used = v
        return used


def search_models(query: ModelQuery) -> Iterator[CayleyTable]:
    """Lazy depth-first search; deterministic order (row-major, values 0..n-1).

    This is the pure-Python reference; :func:`find_models` and
    :func:`count_models` run the compiled engine instead.
    """
    if query.n > MAX_SEARCH_SIZE:
        raise ValueError(f"domain size {query.n} exceeds the search bound {MAX_SEARCH_SIZE}")
    return _Search(query.identities, query.n, query.least_number).run()


_STORE_CAP = 200_000


def _run_engine(query: ModelQuery, max_store: int, stop_after: int) -> tuple[int, list[CayleyTable]]:
    import numpy as np

    from ._search_engine import run_search

    n = query.n
    progs = _compile_identities(query.identities, n)
    total_ops = sum(len(p[0]) for p in progs)
    ops = np.empty((max(total_ops, 1), 2), np.int32)
    prog_ofs = np.empty(len(progs), np.int32)
    prog_len = np.empty(len(progs), np.int32)
    lsrc = np.empty(len(progs), np.int32)
    rsrc = np.empty(len(progs), np.int32)
    pos = 0
    max_ops = 0
    for i, (p_ops, left, right) in enumerate(progs):
        prog_ofs[i] = pos
        prog_len[i] = len(p_ops)
        lsrc[i] = left
        rsrc[i] = right
        for a, b in p_ops:
            ops[pos, 0] = a
            ops[pos, 1] = b
            pos += 1
        max_ops = max(max_ops, len(p_ops))
    out = np.empty((max_store, n * n), np.int32)
    found = run_search(
        n, ops, prog_ofs, prog_len, lsrc, rsrc, max_ops,
        query.least_number, out, stop_after,
    )
    tables = [
        CayleyTable(n, 0, tuple(tuple(int(row[r * n + c]) for c in range(n)) for r in range(n)))
        for row in out[: min(found, max_store)]
    ]
    return found, tables


def find_models(query: ModelQuery) -> list[CayleyTable]:
    """Tables satisfying every identity in the query, in search order.

    Mode 'one' stops at the first model; mode 'all' honors the limit.  Use
    :func:`count_models` for counting without storing tables.
    """
    if query.n > MAX_SEARCH_SIZE:
        raise ValueError(f"domain size {query.n} exceeds the search bound {MAX_SEARCH_SIZE}")
    if query.mode == "one":
        stop = 1
    elif query.limit is not None:
        stop = query.limit
    else:
        stop = 0
    max_store = stop if stop else _STORE_CAP
    found, tables = _run_engine(query, max_store, stop)
    if found > max_store:
        raise RuntimeError(
            f"{found} models exceed the storage cap {max_store}; pass a limit"
        )
    return tables


def count_models(query: ModelQuery) -> int:
    if query.n > MAX_SEARCH_SIZE:
        raise ValueError(f"domain size {query.n} exceeds the search bound {MAX_SEARCH_SIZE}")
    found, _ = _run_engine(query, 0, 0)
    return found


def find_models_naive(identities: Sequence[Identity], n: int) -> list[CayleyTable]:
    """Independent oracle: filter all n^(n²) tables with e fixed at element 0."""
    if n > MAX_NAIVE_SIZE:
        raise ValueError(f"naive enumeration is bounded at n ≤ {MAX_NAIVE_SIZE}")
    out = []
    for values in itertools.product(range(n), repeat=n * n):
        tab = CayleyTable(n, 0, tuple(tuple(values[r * n : (r + 1) * n]) for r in range(n)))
        if all(satisfies(tab, identity) for identity in identities):
            out.append(tab)
    return out


def is_boolean_group(tab: CayleyTable) -> bool:
    """Associative, the designated element is a two-sided identity, and x·x = e."""
    t = tab.table
    e = tab.e_index
    rng = range(tab.n)
    if any(t[e][x] != x or t[x][e] != x for x in rng):
        return False
    if any(t[x][x] != e for x in rng):
        return False
    return all(t[t[a][b]][c] == t[a][t[b][c]] for a in rng for b in rng for c in rng)


@dataclass(frozen=True)
class TrivialityVerdict:
    """Finite evidence about equivalence to x = e.

    ``trivializing`` means no model of size 2..bound exists; a witness table
    (the first found in search order) refutes triviality up to the bound.
    """

    trivializing: bool
    bound: int
    witness: Optional[CayleyTable] = None

    @property
    def witness_n(self) -> Optional[int]:
        return self.witness.n if self.witness is not None else None

    def to_json_dict(self) -> dict:
        return {
            "trivializing_up_to": self.bound if self.trivializing else None,
            "witness": self.witness.to_json_dict() if self.witness else None,
        }


def is_trivializing(identity: Identity, up_to_n: int) -> TrivialityVerdict:
    """Search sizes 2..up_to_n for a nontrivial model; finite evidence only."""
    if up_to_n > MAX_SEARCH_SIZE:
        raise ValueError(f"bound {up_to_n} exceeds the search bound {MAX_SEARCH_SIZE}")
    for n in range(2, up_to_n + 1):
        found = find_models(ModelQuery((identity,), n, mode="one"))
        if found:
            return TrivialityVerdict(False, up_to_n, found[0])
    return TrivialityVerdict(True, up_to_n, None)
