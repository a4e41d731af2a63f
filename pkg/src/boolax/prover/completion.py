"""Ordered (unfailing) Knuth-Bendix completion over the groupoid language.

The main loop keeps a set of active equations (oriented into rewrite rules
where the ordering allows, kept bidirectional otherwise) and a passive
queue ordered by combined term size with FIFO tie-breaking.  Each round
pops the smallest passive equation, normalizes it by ordered rewriting,
orients it if possible, interreduces the active set, generates critical
pairs (superposing unorientable equations in both directions, subject to
the instance-maximality check), and re-checks the goals.  Goals are proved
by joining their Skolemized sides under rewriting or by subsumption under
an active equation.  Failure to prove within limits is reported as
resource-out or saturation, never as a non-theorem claim.
"""

from __future__ import annotations

import heapq
import itertools
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from ..terms import E as CORE_E
from ..terms import Identity, Product, Term, Var
from .ordering import KBO, TermOrdering
from .termops import (
    Equation,
    ITerm,
    apply_mgu,
    canonical_equation,
    format_equation,
    from_term,
    identity_to_equation,
    match,
    nonvar_positions,
    renumber,
    replace_at,
    shift_vars,
    subst,
    term_size,
    to_term,
    unify,
    variables,
)
from .trace import AXIOM, CP, GOAL, SIMPLIFY, ProofTrace, TraceStep

PROVED = "proved"
SATURATED = "saturated-without-proof"
RESOURCE_OUT = "resource-out"


@dataclass(frozen=True)
class Limits:
    """Resource bounds; ``max_seconds=None`` makes runs fully deterministic."""

    max_seconds: Optional[float] = 300.0
    max_processed: int = 200_000
    max_term_size: int = 60


@dataclass(frozen=True)
class RewriteRule:
    """An equation with its orientation status under the active ordering."""

    lhs: ITerm
    rhs: ITerm
    note: str  # 'oriented' or 'unorientable'

    def __post_init__(self) -> None:
        if self.note not in ("oriented", "unorientable"):
            raise ValueError(f"bad orientation note {self.note!r}")
        if self.note == "oriented" and not variables(self.rhs) <= variables(self.lhs):
            raise ValueError("oriented rule must not invent variables")

    @property
    def oriented(self) -> bool:
        return self.note == "oriented"

    def equation(self) -> Equation:
        return (self.lhs, self.rhs)

    def __str__(self) -> str:
        arrow = "->" if self.oriented else "="
        from .termops import format_iterm

        return f"{format_iterm(self.lhs)} {arrow} {format_iterm(self.rhs)}"


def make_rule(identity: Identity, ordering: TermOrdering = KBO) -> RewriteRule:
    """Orient an identity; the ordering check happens here, at creation."""
    lhs, rhs = identity_to_equation(identity)
    if ordering.greater(lhs, rhs):
        return RewriteRule(lhs, rhs, "oriented")
    if ordering.greater(rhs, lhs):
        return RewriteRule(rhs, lhs, "oriented")
    return RewriteRule(lhs, rhs, "unorientable")


@dataclass(frozen=True)
class RewriteSystem:
    """Active equations left by a completion run, plus the ordering used."""

    rules: tuple[RewriteRule, ...]
    ordering: TermOrdering

    def format(self) -> str:
        return "\n".join(str(rule) for rule in self.rules)


@dataclass(frozen=True)
class GoalResult:
    goal: Identity
    skolemized: Equation
    proved: bool
    method: Optional[str] = None  # 'joined' | 'subsumed'


@dataclass
class CompletionStats:
    equations_active: int = 0
    pairs_processed: int = 0
    pairs_generated: int = 0
    pairs_discarded_size: int = 0
    elapsed_seconds: float = 0.0


@dataclass
class ProofOutcome:
    status: str
    goals: list[GoalResult]
    stats: CompletionStats
    system: RewriteSystem
    trace: Optional[ProofTrace]


# ---------------------------------------------------------------------------
# Rewriting


def _usable_directions(eq: Equation, ordering: TermOrdering) -> list[tuple[ITerm, ITerm, bool]]:
    """Directions usable for rewriting: (from, to, unconditionally-ordered)."""
    lhs, rhs = eq
    if ordering.greater(lhs, rhs):
        return [(lhs, rhs, True)]
    if ordering.greater(rhs, lhs):
        return [(rhs, lhs, True)]
    dirs = []
    if variables(rhs) <= variables(lhs):
        dirs.append((lhs, rhs, False))
    if variables(lhs) <= variables(rhs):
        dirs.append((rhs, lhs, False))
    return dirs


Compiled = tuple[int, ITerm, ITerm, bool]


def rewrite_equations(
    eqs: Sequence[Equation], ordering: TermOrdering
) -> list[Compiled]:
    """Compile equations (numbered by position) into rewrite directions."""
    out: list[Compiled] = []
    for i, eq in enumerate(eqs):
        for lhs, rhs, always in _usable_directions(eq, ordering):
            out.append((i, lhs, rhs, always))
    return out


class _RuleIndex:
    """Rewrite directions bucketed by what a redex can look like."""

    def __init__(self, compiled: Iterable[Compiled]):
        self.for_product: list[Compiled] = []
        self.for_const: list[Compiled] = []
        for entry in compiled:
            lhs = entry[1]
            if isinstance(lhs, tuple):
                self.for_product.append(entry)
            elif isinstance(lhs, int):
                self.for_product.append(entry)
                self.for_const.append(entry)
            else:
                self.for_const.append(entry)

    def candidates(self, t: ITerm) -> list[Compiled]:
        return self.for_product if isinstance(t, tuple) else self.for_const


def _root_step(
    t: ITerm, index: _RuleIndex, ordering: TermOrdering
) -> Optional[tuple[int, ITerm]]:
    for eq_id, lhs, rhs, always in index.candidates(t):
        sigma = match(lhs, t)
        if sigma is None:
            continue
        result = subst(rhs, sigma)
        if not always and not ordering.greater(t, result):
            continue
        return (eq_id, result)
    return None


def _normalize_used(
    t: ITerm,
    index: _RuleIndex,
    ordering: TermOrdering,
    cache: dict,
) -> tuple[ITerm, frozenset[int]]:
    cached = cache.get(t)
    if cached is not None:
        return cached
    used: set[int] = set()
    if isinstance(t, tuple):
        left, ul = _normalize_used(t[0], index, ordering, cache)
        right, ur = _normalize_used(t[1], index, ordering, cache)
        used |= ul
        used |= ur
        current: ITerm = (left, right)
    else:
        current = t
    while True:
        step = _root_step(current, index, ordering)
        if step is None:
            break
        eq_id, result = step
        used.add(eq_id)
        if isinstance(result, tuple):
            result, ur = _normalize_used(result, index, ordering, cache)
            used |= ur
        current = result
    entry = (current, frozenset(used))
    cache[t] = entry
    cache[current] = (current, frozenset())
    return entry


def normalize_internal(
    t: ITerm,
    rules: Sequence[Compiled],
    ordering: TermOrdering,
    cache: Optional[dict] = None,
) -> ITerm:
    index = rules if isinstance(rules, _RuleIndex) else _RuleIndex(rules)
    return _normalize_used(t, index, ordering, {} if cache is None else cache)[0]


def _reducible(t: ITerm, index: _RuleIndex, ordering: TermOrdering) -> bool:
    stack = [t]
    while stack:
        node = stack.pop()
        if _root_step(node, index, ordering) is not None:
            return True
        if isinstance(node, tuple):
            stack.append(node[0])
            stack.append(node[1])
    return False


# ---------------------------------------------------------------------------
# Critical pairs


def _sup_directions(eq: Equation, ordering: TermOrdering) -> list[tuple[ITerm, ITerm, bool]]:
    """Directions usable for superposition: both ways unless oriented."""
    lhs, rhs = eq
    if ordering.greater(lhs, rhs):
        return [(lhs, rhs, True)]
    if ordering.greater(rhs, lhs):
        return [(rhs, lhs, True)]
    return [(lhs, rhs, False), (rhs, lhs, False)]


def _overlaps(
    from_eq: Equation,
    into_eq: Equation,
    ordering: TermOrdering,
    out: list[Equation],
) -> None:
    for l1, r1, oriented1 in _sup_directions(from_eq, ordering):
        l1_is_tuple = isinstance(l1, tuple)
        l1_is_var = isinstance(l1, int)
        for l2, r2, oriented2 in _sup_directions(into_eq, ordering):
            for path, sub in nonvar_positions(l2):
                if l1_is_var:
                    sigma: Optional[dict] = {l1: sub}
                elif l1_is_tuple != isinstance(sub, tuple):
                    continue
                else:
                    sigma = unify(l1, sub)
                    if sigma is None:
                        continue
                if not oriented1:
                    l1s = apply_mgu(l1, sigma)
                    if ordering.greater(apply_mgu(r1, sigma), l1s):
                        continue
                if not oriented2:
                    l2s = apply_mgu(l2, sigma)
                    if ordering.greater(apply_mgu(r2, sigma), l2s):
                        continue
                left = apply_mgu(replace_at(l2, path, r1), sigma)
                right = apply_mgu(r2, sigma)
                if left != right:
                    out.append((left, right))


def critical_pairs_internal(
    eq1: Equation, eq2: Equation, ordering: TermOrdering = KBO
) -> list[Equation]:
    """All critical pairs between two equations, renamed apart both ways."""
    a = renumber(eq1)
    offset = max(variables(a[0]) | variables(a[1]), default=-1) + 1
    b = renumber(eq2)
    b = (shift_vars(b[0], offset), shift_vars(b[1], offset))
    pairs: list[Equation] = []
    _overlaps(a, b, ordering, pairs)
    _overlaps(b, a, ordering, pairs)
    return pairs


def critical_pairs(
    rule1: RewriteRule, rule2: RewriteRule, ordering: TermOrdering = KBO
) -> list[Identity]:
    """User-facing overlap computation; trivially equal reducts are dropped."""
    seen: set[Equation] = set()
    out: list[Identity] = []
    for eq in critical_pairs_internal(rule1.equation(), rule2.equation(), ordering):
        canon = canonical_equation(eq)
        if canon in seen:
            continue
        seen.add(canon)
        out.append(Identity(to_term(canon[0]), to_term(canon[1])))
    return out


def normalize(
    term: Term, rules: Sequence[RewriteRule], ordering: TermOrdering = KBO
) -> Term:
    """Rewrite to normal form; terminates because rules respect the ordering."""
    varmap: dict[str, int] = {}
    internal = from_term(term, varmap)
    compiled = rewrite_equations([r.equation() for r in rules], ordering)
    nf = normalize_internal(internal, compiled, ordering)
    names = {index: name for name, index in varmap.items()}

    def back(t: ITerm) -> Term:
        if isinstance(t, tuple):
            return Product(back(t[0]), back(t[1]))
        if isinstance(t, int):
            return Var(names[t])
        return CORE_E

    return back(nf)


# ---------------------------------------------------------------------------
# Goals


def skolemize_identity(identity: Identity) -> Equation:
    """Freeze the identity's variables as fresh constants c0, c1, ... in
    first-occurrence order across lhs then rhs."""
    varmap: dict[str, int] = {}
    lhs = from_term(identity.lhs, varmap)
    rhs = from_term(identity.rhs, varmap)
    consts = {index: f"c{index}" for index in varmap.values()}
    return (subst(lhs, consts), subst(rhs, consts))


def _match_pair(eq: Equation, target: Equation) -> bool:
    sigma = match(eq[0], target[0])
    if sigma is not None and match(eq[1], target[1], sigma) is not None:
        return True
    sigma = match(eq[0], target[1])
    return sigma is not None and match(eq[1], target[0], sigma) is not None


class _GoalState:
    def __init__(self, goal: Identity):
        self.goal = goal
        self.skolemized = skolemize_identity(goal)
        self.proved = False
        self.method: Optional[str] = None
        self.step_id: Optional[int] = None


# ---------------------------------------------------------------------------
# The main loop


class _ActiveEq:
    __slots__ = ("eq_id", "lhs", "rhs", "dirs")

    def __init__(self, eq_id: int, eq: Equation, ordering: TermOrdering):
        self.eq_id = eq_id
        self.lhs, self.rhs = eq
        self.dirs = _usable_directions(eq, ordering)

    def equation(self) -> Equation:
        return (self.lhs, self.rhs)


def _run_completion(
    axioms: Sequence[Equation],
    ordering: TermOrdering,
    limits: Limits,
    goal_identities: Sequence[Identity],
) -> tuple[str, list[_GoalState], CompletionStats, list[_ActiveEq], dict[int, TraceStep]]:
    start = time.monotonic()
    stats = CompletionStats()
    steps: dict[int, TraceStep] = {}
    ids = itertools.count(1)
    fifo = itertools.count()
    passive: list[tuple] = []
    seen: set[Equation] = set()
    active: list[_ActiveEq] = []
    goals = [_GoalState(g) for g in goal_identities]

    index = _RuleIndex([])
    cache: dict = {}

    def rebuild() -> None:
        nonlocal index, cache
        compiled: list[Compiled] = []
        for a in active:
            for lhs, rhs, always in a.dirs:
                compiled.append((a.eq_id, lhs, rhs, always))
        index = _RuleIndex(compiled)
        cache = {}

    def push(eq: Equation, src: tuple) -> None:
        if eq[0] == eq[1]:
            return
        if (
            term_size(eq[0]) > limits.max_term_size
            or term_size(eq[1]) > limits.max_term_size
        ):
            stats.pairs_discarded_size += 1
            return
        canon = canonical_equation(eq)
        if canon in seen:
            return
        seen.add(canon)
        if src[0] == "cp":
            stats.pairs_generated += 1
        size = term_size(canon[0]) + term_size(canon[1])
        heapq.heappush(passive, (size, next(fifo), canon[0], canon[1], src))

    def push_requeue(entry: _ActiveEq) -> None:
        size = term_size(entry.lhs) + term_size(entry.rhs)
        heapq.heappush(
            passive, (size, next(fifo), entry.lhs, entry.rhs, ("requeue", entry.eq_id))
        )

    def check_goals() -> bool:
        all_proved = True
        for g in goals:
            if g.proved:
                continue
            lhs, used_l = _normalize_used(g.skolemized[0], index, ordering, cache)
            rhs, used_r = _normalize_used(g.skolemized[1], index, ordering, cache)
            used = sorted(used_l | used_r)
            subsumer: Optional[int] = None
            if lhs != rhs:
                for a in active:
                    if _match_pair(a.equation(), (lhs, rhs)):
                        subsumer = a.eq_id
                        break
                if subsumer is None:
                    all_proved = False
                    continue
            g.proved = True
            g.method = "joined" if lhs == rhs else "subsumed"
            parents = tuple(used) + ((subsumer,) if subsumer is not None else ())
            step_id = next(ids)
            steps[step_id] = TraceStep(step_id, GOAL, parents, g.skolemized)
            g.step_id = step_id
        return all_proved

    for axiom in axioms:
        push(axiom, ("axiom",))

    status: Optional[str] = None
    if goals and check_goals():
        status = PROVED

    while status is None:
        if goals and all(g.proved for g in goals):
            status = PROVED
            break
        if not passive:
            # Equations discarded by the size cap mean the closure was not
            # actually computed, so an empty queue is a resource limit then.
            status = SATURATED if stats.pairs_discarded_size == 0 else RESOURCE_OUT
            break
        if stats.pairs_processed >= limits.max_processed:
            status = RESOURCE_OUT
            break
        if (
            limits.max_seconds is not None
            and time.monotonic() - start > limits.max_seconds
        ):
            status = RESOURCE_OUT
            break

        _, _, lhs, rhs, src = heapq.heappop(passive)
        stats.pairs_processed += 1

        if src[0] == "requeue":
            base_id = src[1]
        else:
            base_id = next(ids)
            if src[0] == "axiom":
                steps[base_id] = TraceStep(base_id, AXIOM, (), (lhs, rhs))
            else:
                steps[base_id] = TraceStep(base_id, CP, (src[1], src[2]), (lhs, rhs))

        nf_l, used_l = _normalize_used(lhs, index, ordering, cache)
        nf_r, used_r = _normalize_used(rhs, index, ordering, cache)
        if nf_l == nf_r:
            continue
        if (nf_l, nf_r) != (lhs, rhs):
            eq_final = canonical_equation((nf_l, nf_r))
            final_id = next(ids)
            parents = (base_id,) + tuple(sorted(used_l | used_r))
            steps[final_id] = TraceStep(final_id, SIMPLIFY, parents, eq_final)
        else:
            eq_final, final_id = (lhs, rhs), base_id
        # Forward subsumption: an instance of an active equation is redundant.
        if any(_match_pair(a.equation(), eq_final) for a in active):
            continue

        new_eq = _ActiveEq(final_id, eq_final, ordering)
        new_index = _RuleIndex(
            [(final_id, l, r, a) for l, r, a in new_eq.dirs]
        )
        removed = [
            a
            for a in active
            if _reducible(a.lhs, new_index, ordering)
            or _reducible(a.rhs, new_index, ordering)
        ]
        for a in removed:
            active.remove(a)
            push_requeue(a)

        active.append(new_eq)
        rebuild()

        for other in list(active):
            for cp in critical_pairs_internal(
                new_eq.equation(), other.equation(), ordering
            ):
                push(cp, ("cp", new_eq.eq_id, other.eq_id))

        if goals:
            check_goals()

    assert status is not None
    stats.equations_active = len(active)
    stats.elapsed_seconds = time.monotonic() - start
    return status, goals, stats, active, steps


def _extract_trace(
    steps: dict[int, TraceStep], goals: Sequence[_GoalState], ordering: TermOrdering
) -> ProofTrace:
    needed: set[int] = set()
    frontier = [g.step_id for g in goals if g.step_id is not None]
    while frontier:
        step_id = frontier.pop()
        if step_id in needed:
            continue
        needed.add(step_id)
        frontier.extend(steps[step_id].parents)
    ordered = tuple(steps[i] for i in sorted(needed))
    return ProofTrace(ordering, ordered)


def _system(active: Sequence[_ActiveEq], ordering: TermOrdering) -> RewriteSystem:
    rules = []
    for a in active:
        if a.dirs and a.dirs[0][2]:
            rules.append(RewriteRule(a.dirs[0][0], a.dirs[0][1], "oriented"))
        else:
            rules.append(RewriteRule(a.lhs, a.rhs, "unorientable"))
    return RewriteSystem(tuple(rules), ordering)


def complete(
    axioms: Sequence[Identity],
    ordering: TermOrdering = KBO,
    limits: Limits = Limits(),
) -> tuple[RewriteSystem, str]:
    """Saturate the axioms; returns the surviving system and a status."""
    internal = [identity_to_equation(a) for a in axioms]
    status, _, _, active, _ = _run_completion(internal, ordering, limits, ())
    return _system(active, ordering), status


def derive(
    axioms: Sequence[Identity],
    goals: Sequence[Identity],
    ordering: TermOrdering = KBO,
    limits: Limits = Limits(),
) -> ProofOutcome:
    """Run completion until every goal joins; record a replayable trace."""
    internal = [identity_to_equation(a) for a in axioms]
    status, goal_states, stats, active, steps = _run_completion(
        internal, ordering, limits, goals
    )
    results = [
        GoalResult(g.goal, g.skolemized, g.proved, g.method) for g in goal_states
    ]
    trace = (
        _extract_trace(steps, goal_states, ordering) if status == PROVED else None
    )
    return ProofOutcome(status, results, stats, _system(active, ordering), trace)


def ground_joins(
    system: RewriteSystem, identity: Identity, cache: Optional[dict] = None
) -> bool:
    """Do the identity's Skolemized sides reach a common normal form?"""
    eq = skolemize_identity(identity)
    compiled = rewrite_equations([r.equation() for r in system.rules], system.ordering)
    index = _RuleIndex(compiled)
    shared = {} if cache is None else cache
    lhs, _ = _normalize_used(eq[0], index, system.ordering, shared)
    rhs, _ = _normalize_used(eq[1], index, system.ordering, shared)
    return lhs == rhs
