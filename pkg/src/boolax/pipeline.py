"""Batch classification: parity, the two-element-group check, model evidence,
triviality evidence, and best-effort derivations, assembled into one verdict
per formula.

Reports are deterministic: entries keep input order, every dict is built in
a fixed key order, and the default proof budget is a critical-pair count
with no wall-clock limit, so two runs of the same batch are byte-identical
regardless of worker count.  Wall-clock stats are kept out of reports for
the same reason.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from .decision import parity_decide, z2_decide
from .fixtures import FIXTURES
from .models import (
    ModelQuery,
    TrivialityVerdict,
    find_models,
    is_boolean_group,
    is_trivializing,
)
from .prover import KBO, LPO, Limits, ProofOutcome, TermOrdering, derive
from .terms import (
    FormulaEntry,
    Identity,
    parse_formula_text,
    parse_identity,
    print_term,
)

BOOLEAN_GROUP_GOALS: tuple[Identity, ...] = (
    parse_identity("x·x = e"),
    parse_identity("e·x = x"),
    parse_identity("(x·y)·z = x·(y·z)"),
)
TRIVIAL_GOAL: Identity = parse_identity("x = e")

VERDICT_BOOLEAN = "boolean-theorem-candidate"
VERDICT_TRIVIALIZING = "trivializing"
VERDICT_INCONSISTENT = "inconsistent-evidence"


class InternalInvariantError(RuntimeError):
    """The parity criterion and the two-element-group oracle disagreed."""


@dataclass(frozen=True)
class PipelineConfig:
    """Classification knobs; the defaults are deterministic and desk-scale.

    The proof budget counts processed critical pairs only; set
    ``prover_seconds`` when wall-clock limits matter more than run-to-run
    determinism.
    """

    model_max_n: int = 4
    trivial_bound: int = 4
    attempt_proofs: bool = True
    prover_pairs: int = 550
    prover_seconds: Optional[float] = None
    prover_term_size: int = 60
    ordering: str = "kbo"
    workers: int = 1

    def prover_limits(self) -> Limits:
        return Limits(
            max_seconds=self.prover_seconds,
            max_processed=self.prover_pairs,
            max_term_size=self.prover_term_size,
        )

    def term_ordering(self) -> TermOrdering:
        return LPO if self.ordering == "lpo" else KBO


@dataclass(frozen=True)
class Classification:
    """Everything the pipeline established about one formula."""

    tag: Optional[str]
    identity: Identity
    parity: bool
    z2_agrees: bool
    model_evidence: tuple[dict, ...]
    trivial_evidence: Optional[TrivialityVerdict]
    proof: Optional[dict]
    final_verdict: str

    def to_dict(self) -> dict:
        return {
            "tag": self.tag,
            "identity": str(self.identity),
            "parity": self.parity,
            "z2_agrees": self.z2_agrees,
            "model_evidence": [dict(row) for row in self.model_evidence],
            "trivial_evidence": (
                self.trivial_evidence.to_json_dict() if self.trivial_evidence else None
            ),
            "proof": self.proof,
            "final_verdict": self.final_verdict,
        }


def _proof_record(target: str, outcome: ProofOutcome) -> dict:
    return {
        "target": target,
        "status": outcome.status,
        "goals": [
            {"goal": str(g.goal), "proved": g.proved, "method": g.method}
            for g in outcome.goals
        ],
        "pairs_processed": outcome.stats.pairs_processed,
        "equations_active": outcome.stats.equations_active,
    }


def classify(
    identity: Identity,
    config: PipelineConfig = PipelineConfig(),
    tag: Optional[str] = None,
) -> Classification:
    """Run every analysis on one identity and assemble the verdict."""
    parity = parity_decide(identity)
    z2 = z2_decide(identity)
    if parity != z2.is_theorem:
        raise InternalInvariantError(
            f"parity criterion ({parity}) and two-element-group oracle"
            f" ({z2.is_theorem}) disagree on {identity}"
        )

    evidence = []
    for n in range(1, config.model_max_n + 1):
        tables = find_models(ModelQuery((identity,), n))
        evidence.append(
            {
                "n": n,
                "count": len(tables),
                "all_boolean_groups": all(is_boolean_group(t) for t in tables),
            }
        )

    trivial: Optional[TrivialityVerdict] = None
    proof: Optional[dict] = None
    if parity:
        if config.attempt_proofs:
            outcome = derive(
                [identity],
                BOOLEAN_GROUP_GOALS,
                config.term_ordering(),
                config.prover_limits(),
            )
            proof = _proof_record("boolean-group-axioms", outcome)
        verdict = VERDICT_BOOLEAN
    else:
        trivial = is_trivializing(identity, config.trivial_bound)
        proved_collapse = False
        if config.attempt_proofs:
            outcome = derive(
                [identity],
                [TRIVIAL_GOAL],
                config.term_ordering(),
                config.prover_limits(),
            )
            proof = _proof_record("x-equals-e", outcome)
            proved_collapse = outcome.status == "proved"
        if proved_collapse and not trivial.trivializing:
            # A proof of x = e next to a nontrivial finite model cannot both
            # be right; surface it instead of picking a side.
            verdict = VERDICT_INCONSISTENT
        elif proved_collapse or trivial.trivializing:
            verdict = VERDICT_TRIVIALIZING
        else:
            verdict = VERDICT_INCONSISTENT
    return Classification(
        tag=tag,
        identity=identity,
        parity=parity,
        z2_agrees=True,
        model_evidence=tuple(evidence),
        trivial_evidence=trivial,
        proof=proof,
        final_verdict=verdict,
    )


# ---------------------------------------------------------------------------
# Batch runs


def run_batch(text: str, config: PipelineConfig = PipelineConfig()) -> dict:
    """Classify every entry of a formula file; the report is a plain dict.

    Entries appear in input order whatever the worker count; per-line parse
    errors are collected and the batch continues.
    """
    entries, errors = parse_formula_text(text)

    def work(entry: FormulaEntry) -> Classification:
        return classify(entry.identity, config, entry.tag)

    if config.workers > 1 and len(entries) > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(work, entries))
    else:
        results = [work(entry) for entry in entries]

    report_entries = []
    counts = {
        VERDICT_BOOLEAN: 0,
        VERDICT_TRIVIALIZING: 0,
        VERDICT_INCONSISTENT: 0,
    }
    parity_pass = 0
    for entry, result in zip(entries, results):
        record = result.to_dict()
        record["line"] = entry.lineno
        report_entries.append(record)
        counts[result.final_verdict] += 1
        parity_pass += 1 if result.parity else 0
    return {
        "entries": report_entries,
        "errors": [{"line": line, "message": message} for line, message in errors],
        "summary": {
            "total": len(report_entries),
            "parity_pass": parity_pass,
            "boolean_theorem_candidates": counts[VERDICT_BOOLEAN],
            "trivializing": counts[VERDICT_TRIVIALIZING],
            "inconsistent_evidence": counts[VERDICT_INCONSISTENT],
            "parse_errors": len(errors),
        },
    }


def render_report_json(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"

_TSV_COLUMNS = (
    "line",
    "tag",
    "identity",
    "parity",
    "verdict",
    "model_counts",
    "all_boolean",
    "trivializing_up_to",
    "proof_target",
    "proof_status",
)


def render_report_tsv(report: dict) -> str:
    lines = ["\t".join(_TSV_COLUMNS)]
    for entry in report["entries"]:
        trivial = entry["trivial_evidence"] or {}
        proof = entry["proof"] or {}
        lines.append(
            "\t".join(
                str(x)
                for x in (
                    entry["line"],
                    entry["tag"] or "",
                    entry["identity"],
                    entry["parity"],
                    entry["final_verdict"],
                    "/".join(str(row["count"]) for row in entry["model_evidence"]),
                    all(row["all_boolean_groups"] for row in entry["model_evidence"]),
                    trivial.get("trivializing_up_to", ""),
                    proof.get("target", ""),
                    proof.get("status", ""),
                )
            )
        )
    summary = report["summary"]
    lines.append(
        "# summary\t"
        + "\t".join(f"{key}={value}" for key, value in summary.items())
    )
    return "\n".join(lines) + "\n"
