"""Unified audit report: transcript entries merged with rule and model findings.

The report is the contract between the pipeline and its consumers: the CLI's
static HTML rendering and the browser viewer both read the versioned
``report.json`` emitted here. Each entry carries its announcement, source
element, bounds, any findings addressed to it, and a heuristic category hint
used by the viewer's issue filter.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .audit import AuditFinding, FindingSource, finding_to_json
from .capture import ScreenCapture
from .geometry import BoundingBox
from .rules import RuleFinding
from .taxonomy import ErrorCategory
from .transcript import Transcript

REPORT_VERSION = 1


class CrossScreenError(Exception):
    pass


@dataclass
class ReportEntry:
    index: int
    transcript: str
    node_id: str
    bounds: BoundingBox
    findings: list[AuditFinding] = field(default_factory=list)
    category_hint: ErrorCategory | None = None


@dataclass(frozen=True)
class Provenance:
    prompt_variant: str
    provider: str
    generated_at: str  # ISO timestamp; excluded from HTML bodies for determinism


@dataclass
class Report:
    app_name: str
    screen_id: str
    screenshot: str | None
    entries: list[ReportEntry]
    summary: dict[str, int]
    provenance: Provenance


# Keyword mapping from finding text to taxonomy categories. This is a display
# heuristic for filtering, not a classification claim; order matters, most
# specific patterns first.
_CATEGORY_KEYWORDS: list[tuple[ErrorCategory, tuple[str, ...]]] = [
    (
        ErrorCategory.HEADING,
        ("heading", "header", "page title", "section title"),
    ),
    (
        ErrorCategory.MISSING_LABEL,
        ("unlabeled", "missing label", "no label", "not labeled", "without a label",
         "missing a label", "text alternative"),
    ),
    (
        ErrorCategory.FUNCTIONALITY,
        ("not focusable", "cannot be focused", "not announced", "keyboard",
         "status message", "not reachable", "state change"),
    ),
    (
        ErrorCategory.STRUCTURE_GROUPING,
        ("group", "order", "sequence", "structure", "related", "redundant",
         "repeat", "navigation"),
    ),
    (
        ErrorCategory.LABEL_QUALITY,
        ("label", "description", "identifier", "unclear", "confusing",
         "uninformative", "ambiguous", "context"),
    ),
]


def categorize_finding_text(text: str) -> ErrorCategory | None:
    lowered = text.lower()
    for category, keywords in _CATEGORY_KEYWORDS:
        for keyword in keywords:
            # word-start boundary so "order" does not fire inside "border"
            if re.search(r"\b" + re.escape(keyword), lowered):
                return category
    return None


def _rule_to_audit_finding(rule: RuleFinding, index: int, transcript_text: str) -> AuditFinding:
    return AuditFinding(
        index=index,
        transcript=transcript_text,
        issue=rule.message,
        explanation="",
        suggestion="",
        source=FindingSource.RULE,
    )


def build_report(
    transcript: Transcript,
    rule_findings: list[RuleFinding],
    llm_findings: list[AuditFinding],
    capture: ScreenCapture,
    provenance: Provenance | None = None,
) -> Report:
    """Aggregate findings onto transcript entries and compute the summary.

    Model findings address entries by index; rule findings address nodes and
    are attached to the entry announcing that node (rules on elements outside
    the transcript have no entry to anchor to and are dropped). When a rule
    and a model finding on the same entry carry identical issue text, only
    one is kept. Explicit no-issue records are not listed.
    """
    if transcript.screen_id != capture.screen_id:
        raise CrossScreenError(
            f"transcript is for {transcript.screen_id!r}, capture for {capture.screen_id!r}"
        )

    entries = [
        ReportEntry(
            index=entry.index,
            transcript=entry.transcript,
            node_id=entry.node_id,
            bounds=entry.bounds,
        )
        for entry in transcript.entries
    ]
    entry_by_node = {entry.node_id: entry for entry in entries}

    for finding in llm_findings:
        if not finding.issue:
            continue
        if 0 <= finding.index < len(entries):
            entries[finding.index].findings.append(finding)

    for rule in rule_findings:
        entry = entry_by_node.get(rule.node_id)
        if entry is None:
            continue
        entry.findings.append(_rule_to_audit_finding(rule, entry.index, entry.transcript))

    summary: dict[str, int] = {}
    for entry in entries:
        deduped: list[AuditFinding] = []
        seen_issues: set[str] = set()
        for finding in entry.findings:
            if finding.issue in seen_issues:
                continue
            seen_issues.add(finding.issue)
            deduped.append(finding)
        entry.findings = deduped
        if entry.findings:
            hint = categorize_finding_text(
                " ".join(f"{f.issue} {f.explanation}" for f in entry.findings)
            )
            entry.category_hint = hint
            key = hint.value if hint is not None else "unclassified"
            summary[key] = summary.get(key, 0) + 1

    if provenance is None:
        provenance = Provenance(prompt_variant="unknown", provider="unknown", generated_at="")

    return Report(
        app_name=transcript.app_name,
        screen_id=transcript.screen_id,
        screenshot=capture.screenshot_path,
        entries=entries,
        summary=summary,
        provenance=provenance,
    )


def recount_summary(report: Report) -> dict[str, int]:
    """Recompute the summary from entries; must equal ``report.summary``."""
    summary: dict[str, int] = {}
    for entry in report.entries:
        if entry.findings:
            key = entry.category_hint.value if entry.category_hint is not None else "unclassified"
            summary[key] = summary.get(key, 0) + 1
    return summary


def emit_json(report: Report) -> str:
    """Canonical serialization of the viewer contract (report_version 1)."""
    doc = {
        "report_version": REPORT_VERSION,
        "app_name": report.app_name,
        "screen_id": report.screen_id,
        "screenshot": report.screenshot,
        "provenance": {
            "prompt_variant": report.provenance.prompt_variant,
            "provider": report.provenance.provider,
            "generated_at": report.provenance.generated_at,
        },
        "summary": dict(sorted(report.summary.items())),
        "entries": [
            {
                "index": entry.index,
                "transcript": entry.transcript,
                "node_id": entry.node_id,
                "bounds": entry.bounds.to_json(),
                "category_hint": entry.category_hint.value if entry.category_hint else None,
                "findings": [
                    {**finding_to_json(finding), "source": finding.source.value}
                    for finding in entry.findings
                ],
            }
            for entry in report.entries
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


class ReportVersionError(Exception):
    pass


def parse_report(raw: bytes | str) -> Report:
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8")
    doc = json.loads(raw)
    version = doc.get("report_version")
    if version != REPORT_VERSION:
        raise ReportVersionError(f"unsupported report_version {version!r}")
    entries = []
    for raw_entry in doc["entries"]:
        findings = [
            AuditFinding(
                index=f["index"],
                transcript=f["transcript"],
                issue=f["issue"],
                explanation=f["explanation"],
                suggestion=f["suggestion"],
                source=FindingSource(f["source"]),
            )
            for f in raw_entry["findings"]
        ]
        hint = raw_entry.get("category_hint")
        entries.append(
            ReportEntry(
                index=raw_entry["index"],
                transcript=raw_entry["transcript"],
                node_id=raw_entry["node_id"],
                bounds=BoundingBox(**raw_entry["bounds"]),
                findings=findings,
                category_hint=ErrorCategory(hint) if hint else None,
            )
        )
    return Report(
        app_name=doc["app_name"],
        screen_id=doc["screen_id"],
        screenshot=doc.get("screenshot"),
        entries=entries,
        summary=dict(doc.get("summary", {})),
        provenance=Provenance(
            prompt_variant=doc["provenance"]["prompt_variant"],
            provider=doc["provenance"]["provider"],
            generated_at=doc["provenance"]["generated_at"],
        ),
    )
