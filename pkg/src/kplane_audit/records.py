"""Audit records and deterministic report emission.

JSON reports are written through a custom serializer: stable field order,
every float rendered with 17 significant digits (lossless for binary64), no
timestamps or runtimes.  Two runs with the same configuration therefore
produce byte-identical JSON.  Runtimes appear only in the markdown rendering.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

SCHEMA_VERSION = "kplane-audit-report/1"

PASS = "pass"
FAIL = "fail"
REPORT_ONLY = "report-only"


@dataclass(frozen=True)
class Measurement:
    name: str
    value: float
    stderr: float = 0.0


@dataclass
class AuditRecord:
    """One verified or measured claim.

    verdict is pass/fail only when a tolerance target exists; report-only
    records carry measured constants whose reference normalization is in
    question.  runtime is informational and never serialized to JSON.
    """

    claim: str
    suite: str
    measurements: list[Measurement] = field(default_factory=list)
    reference: float | None = None
    ratio: float | None = None
    tolerance: float | None = None
    verdict: str = REPORT_ONLY
    seed: int = 0
    note: str = ""
    runtime: float = 0.0

    def __post_init__(self):
        if self.verdict not in (PASS, FAIL, REPORT_ONLY):
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if self.verdict != REPORT_ONLY and self.tolerance is None:
            raise ValueError("pass/fail verdicts require a tolerance target")


def _fmt_float(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        raise ValueError(f"non-finite value cannot be serialized: {x!r}")
    return format(float(x), ".17g")


def _to_json(obj, out: list) -> None:
    if isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(",")
            out.append(json.dumps(k))
            out.append(":")
            _to_json(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(",")
            _to_json(v, out)
        out.append("]")
    elif isinstance(obj, bool) or obj is None:
        out.append(json.dumps(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_fmt_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_stable(obj) -> str:
    """Deterministic JSON with 17-significant-digit floats."""
    out: list = []
    _to_json(obj, out)
    return "".join(out)


def record_to_dict(r: AuditRecord) -> dict:
    return {
        "claim": r.claim,
        "suite": r.suite,
        "measurements": [{"name": m.name, "value": float(m.value), "stderr": float(m.stderr)} for m in r.measurements],
        "reference": None if r.reference is None else float(r.reference),
        "ratio": None if r.ratio is None else float(r.ratio),
        "tolerance": None if r.tolerance is None else float(r.tolerance),
        "verdict": r.verdict,
        "seed": int(r.seed),
        "note": r.note,
    }


def record_from_dict(dd: dict) -> AuditRecord:
    return AuditRecord(
        claim=dd["claim"],
        suite=dd["suite"],
        measurements=[Measurement(m["name"], m["value"], m["stderr"]) for m in dd["measurements"]],
        reference=dd["reference"],
        ratio=dd["ratio"],
        tolerance=dd["tolerance"],
        verdict=dd["verdict"],
        seed=dd["seed"],
        note=dd["note"],
    )


def emit_report(records: list[AuditRecord], format: str = "json") -> str:
    """Render records as a JSON document or a markdown table set."""
    if not records:
        raise ValueError("cannot emit a report for an empty record list")
    if format == "json":
        doc = {"schema": SCHEMA_VERSION, "records": [record_to_dict(r) for r in records]}
        return dumps_stable(doc) + "\n"
    if format == "markdown":
        return _emit_markdown(records)
    raise ValueError(f"unknown report format {format!r}")


def parse_report(text: str) -> list[AuditRecord]:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unknown report schema {doc.get('schema')!r}")
    return [record_from_dict(dd) for dd in doc["records"]]


def _emit_markdown(records: list[AuditRecord]) -> str:
    suites: dict[str, list[AuditRecord]] = {}
    for r in records:
        suites.setdefault(r.suite, []).append(r)
    lines: list[str] = []
    for suite, recs in suites.items():
        lines.append(f"## suite: {suite}")
        lines.append("")
        lines.append("| claim | measurements | reference | ratio | verdict | seed | runtime (s) |")
        lines.append("|---|---|---|---|---|---|---|")
        for r in recs:
            meas = "; ".join(
                f"{m.name}={m.value:.10g}" + (f" ± {m.stderr:.3g}" if m.stderr else "") for m in r.measurements
            )
            ref = "" if r.reference is None else f"{r.reference:.10g}"
            ratio = "" if r.ratio is None else f"{r.ratio:.10g}"
            lines.append(f"| {r.claim} | {meas} | {ref} | {ratio} | {r.verdict} | {r.seed} | {r.runtime:.2f} |")
        lines.append("")
        notes = [(r.claim, r.note) for r in recs if r.note]
        for claim, note in notes:
            lines.append(f"- **{claim}**: {note}")
        if notes:
            lines.append("")
    return "\n".join(lines)


def overall_exit_code(records: list[AuditRecord]) -> int:
    """0 when every pass/fail record passes, 1 otherwise."""
    return 1 if any(r.verdict == FAIL for r in records) else 0
