"""Replayable proof traces for the completion prover.

A trace is a sequence of steps, one inference per line when serialized:

    id <TAB> kind <TAB> comma-separated parent ids <TAB> lhs = rhs

Kinds: 'axiom' (an input equation), 'cp' (a critical pair of its two
parents), 'simplify' (the first parent's equation normalized with the other
parents as rewrite equations), and 'goal' (a goal joined by rewriting with
the cited equations or subsumed by the last cited one).  Terms use the
prover serialization: vN variables, cN Skolem constants, full parentheses.
The replay checker re-derives every step with the same ordering, so a trace
that replays is a machine-checked proof.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .ordering import TermOrdering
from .termops import (
    Equation,
    canonical_equation,
    format_equation,
    match,
    parse_equation,
    renumber,
    variant,
)

AXIOM = "axiom"
CP = "cp"
SIMPLIFY = "simplify"
GOAL = "goal"


@dataclass(frozen=True)
class TraceStep:
    step_id: int
    kind: str
    parents: tuple[int, ...]
    equation: Equation

    def to_line(self) -> str:
        parents = ",".join(str(p) for p in self.parents)
        return f"{self.step_id}\t{self.kind}\t{parents}\t{format_equation(self.equation)}"

    @classmethod
    def from_line(cls, line: str) -> "TraceStep":
        fields = line.rstrip("\n").split("\t")
        if len(fields) != 4:
            raise ValueError(f"trace line needs 4 tab-separated fields: {line!r}")
        step_id = int(fields[0])
        kind = fields[1]
        if kind not in (AXIOM, CP, SIMPLIFY, GOAL):
            raise ValueError(f"unknown trace step kind {kind!r}")
        parents = tuple(int(p) for p in fields[2].split(",") if p)
        return cls(step_id, kind, parents, parse_equation(fields[3]))


@dataclass(frozen=True)
class ProofTrace:
    ordering: TermOrdering
    steps: tuple[TraceStep, ...]

    def serialize(self) -> str:
        lines = [f"# ordering\t{self.ordering.kind}"]
        lines += [step.to_line() for step in self.steps]
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "ProofTrace":
        ordering = TermOrdering()
        steps = []
        for line in text.splitlines():
            if not line.strip():
                continue
            if line.startswith("#"):
                fields = line.split("\t")
                if len(fields) == 2 and fields[0] == "# ordering":
                    ordering = TermOrdering(fields[1])
                continue
            steps.append(TraceStep.from_line(line))
        return cls(ordering, tuple(steps))


class ReplayError(ValueError):
    pass


def _subsumed_by(eq: Equation, goal: Equation) -> bool:
    lhs, rhs = eq
    sigma = match(lhs, goal[0])
    if sigma is not None and match(rhs, goal[1], sigma) is not None:
        return True
    sigma = match(lhs, goal[1])
    return sigma is not None and match(rhs, goal[0], sigma) is not None


def replay(
    trace: ProofTrace,
    axioms: Iterable[Equation],
    goals: Iterable[Equation],
) -> None:
    """Check every step; raises :class:`ReplayError` on the first invalid one.

    Requires the goal equations exactly as the prover skolemized them (the
    prover reports them in its outcome).
    """
    # Imported here: completion builds traces, so the module import order
    # must stay one-directional.
    from .completion import rewrite_equations, normalize_internal

    axiom_list = [renumber(eq) for eq in axioms]
    goals_left = {canonical_equation(g) for g in goals}
    seen: dict[int, TraceStep] = {}
    for step in trace.steps:
        if step.step_id in seen:
            raise ReplayError(f"duplicate step id {step.step_id}")
        for parent in step.parents:
            if parent not in seen:
                raise ReplayError(
                    f"step {step.step_id} cites unknown parent {parent}"
                )
        if step.kind == AXIOM:
            if not any(variant(step.equation, ax) for ax in axiom_list):
                raise ReplayError(f"step {step.step_id}: not an input axiom")
        elif step.kind == CP:
            if len(step.parents) != 2:
                raise ReplayError(f"step {step.step_id}: cp needs two parents")
            from .completion import critical_pairs_internal

            pairs = critical_pairs_internal(
                seen[step.parents[0]].equation,
                seen[step.parents[1]].equation,
                trace.ordering,
            )
            if not any(variant(step.equation, pair) for pair in pairs):
                raise ReplayError(
                    f"step {step.step_id}: not a critical pair of its parents"
                )
        elif step.kind == SIMPLIFY:
            if not step.parents:
                raise ReplayError(f"step {step.step_id}: simplify needs a source")
            source = seen[step.parents[0]].equation
            rules = rewrite_equations(
                [seen[p].equation for p in step.parents[1:]], trace.ordering
            )
            lhs = normalize_internal(source[0], rules, trace.ordering)
            rhs = normalize_internal(source[1], rules, trace.ordering)
            if not variant(step.equation, (lhs, rhs)):
                raise ReplayError(
                    f"step {step.step_id}: simplification does not reproduce"
                )
        elif step.kind == GOAL:
            cited = [seen[p].equation for p in step.parents]
            rules = rewrite_equations(cited, trace.ordering)
            lhs = normalize_internal(step.equation[0], rules, trace.ordering)
            rhs = normalize_internal(step.equation[1], rules, trace.ordering)
            ok = lhs == rhs or any(_subsumed_by(eq, (lhs, rhs)) for eq in cited)
            if not ok:
                raise ReplayError(f"step {step.step_id}: goal does not join")
            goals_left.discard(canonical_equation(step.equation))
        seen[step.step_id] = step
    if goals_left:
        raise ReplayError(f"{len(goals_left)} goal(s) never proved by the trace")
