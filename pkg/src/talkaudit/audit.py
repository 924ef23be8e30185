"""Findings schema, robust completion parsing, and the end-to-end audit of one screen.

Model output is ragged in practice: the JSON payload may arrive bare, inside a
code fence, or after triple-quoted reasoning steps, and individual entries may
be malformed. Parsing therefore degrades to partial results plus diagnostics
instead of failing the run; only a completion with no recoverable JSON at all
raises.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum

from .capture import ScreenCapture
from .prompts import PromptSpec, PromptVariant, assemble_prompt
from .providers import CompletionProvider, ProviderConfig, submit
from .transcript import DEFAULT_TRAVERSAL_CAP, Transcript, synthesize


class FindingSource(str, Enum):
    RULE = "rule"
    LLM = "llm"


@dataclass(frozen=True)
class AuditFinding:
    """One audited transcript entry. An empty ``issue`` is an explicit
    no-issue record and must carry no explanation or suggestion."""

    index: int
    transcript: str
    issue: str
    explanation: str = ""
    suggestion: str = ""
    source: FindingSource = FindingSource.LLM

    def __post_init__(self) -> None:
        if self.index < 0:
            raise ValueError("finding index must be >= 0")
        if not self.issue and (self.explanation or self.suggestion):
            raise ValueError("a no-issue finding cannot carry an explanation or suggestion")


class NoJsonFoundError(Exception):
    """The completion contained no recoverable audit JSON."""


@dataclass(frozen=True)
class ParseDiagnostic:
    kind: str  # schema-mismatch | out-of-range-index | normalized-empty-issue | trailing-comma-repair | unknown-keys
    detail: str
    entry_index: int | None = None


@dataclass
class AuditParse:
    findings: list[AuditFinding]
    diagnostics: list[ParseDiagnostic] = field(default_factory=list)


_FENCE = re.compile(r"```[a-zA-Z]*\n(.*?)```", re.DOTALL)
_TRAILING_COMMA = re.compile(r",(\s*[}\]])")


def _decode_candidates(text: str) -> dict | None:
    decoder = json.JSONDecoder()
    idx = text.find("{")
    while idx != -1:
        try:
            obj, _ = decoder.raw_decode(text, idx)
        except ValueError:
            pass
        else:
            if isinstance(obj, dict) and isinstance(obj.get("audit"), list):
                return obj
        idx = text.find("{", idx + 1)
    return None


def _extract_audit_object(completion: str, diagnostics: list[ParseDiagnostic]) -> dict:
    candidates = [match.group(1) for match in _FENCE.finditer(completion)]
    candidates.append(completion)
    for candidate in candidates:
        obj = _decode_candidates(candidate)
        if obj is not None:
            return obj
    # second pass: repair trailing commas, a common model slip
    for candidate in candidates:
        repaired = _TRAILING_COMMA.sub(r"\1", candidate)
        if repaired == candidate:
            continue
        obj = _decode_candidates(repaired)
        if obj is not None:
            diagnostics.append(
                ParseDiagnostic(
                    kind="trailing-comma-repair",
                    detail="removed trailing commas before parsing",
                )
            )
            return obj
    raise NoJsonFoundError("completion contains no JSON object with an 'audit' list")


_ENTRY_KEYS = {"index", "transcript", "issue", "explanation", "suggestion"}


def parse_audit(completion: str, transcript: Transcript | None = None) -> AuditParse:
    """Extract findings from a raw completion.

    Tolerates code-fence wrappers and triple-quoted step preambles. Entries
    that fail the schema are dropped with a diagnostic; entries whose index
    falls outside the transcript are kept but flagged. Findings with an empty
    issue are retained as explicit no-issue records.
    """
    diagnostics: list[ParseDiagnostic] = []
    audit_obj = _extract_audit_object(completion, diagnostics)

    findings: list[AuditFinding] = []
    for i, entry in enumerate(audit_obj["audit"]):
        if not isinstance(entry, dict):
            diagnostics.append(
                ParseDiagnostic("schema-mismatch", f"entry {i} is not an object", entry_index=None)
            )
            continue

        index = entry.get("index")
        if isinstance(index, bool) or not isinstance(index, int) or index < 0:
            diagnostics.append(
                ParseDiagnostic(
                    "schema-mismatch", f"entry {i} has invalid index {index!r}", entry_index=None
                )
            )
            continue

        def _text(key: str) -> str | None:
            value = entry.get(key, "")
            if value is None:
                return ""
            if not isinstance(value, str):
                diagnostics.append(
                    ParseDiagnostic(
                        "schema-mismatch",
                        f"entry {i} field {key!r} is not a string",
                        entry_index=index,
                    )
                )
                return None
            return value

        fields = {key: _text(key) for key in ("transcript", "issue", "explanation", "suggestion")}
        if any(value is None for value in fields.values()):
            continue

        unknown = set(entry) - _ENTRY_KEYS
        if unknown:
            diagnostics.append(
                ParseDiagnostic(
                    "unknown-keys",
                    f"entry {i} carries unknown keys {sorted(unknown)}",
                    entry_index=index,
                )
            )

        issue = fields["issue"]
        explanation = fields["explanation"]
        suggestion = fields["suggestion"]
        if not issue and (explanation or suggestion):
            diagnostics.append(
                ParseDiagnostic(
                    "normalized-empty-issue",
                    f"entry {i} has no issue; dropped its explanation/suggestion",
                    entry_index=index,
                )
            )
            explanation = ""
            suggestion = ""

        if transcript is not None and index >= len(transcript.entries):
            diagnostics.append(
                ParseDiagnostic(
                    "out-of-range-index",
                    f"index {index} exceeds transcript length {len(transcript.entries)}",
                    entry_index=index,
                )
            )

        findings.append(
            AuditFinding(
                index=index,
                transcript=fields["transcript"],
                issue=issue,
                explanation=explanation,
                suggestion=suggestion,
                source=FindingSource.LLM,
            )
        )

    return AuditParse(findings=findings, diagnostics=diagnostics)


def finding_to_json(finding: AuditFinding) -> dict:
    return {
        "index": finding.index,
        "transcript": finding.transcript,
        "issue": finding.issue,
        "explanation": finding.explanation,
        "suggestion": finding.suggestion,
    }


def serialize_findings(findings: list[AuditFinding]) -> str:
    """Canonical wire form of a finding list; ``parse_audit`` of the result
    reproduces the findings exactly."""
    doc = {"audit": [finding_to_json(finding) for finding in findings]}
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


@dataclass
class AuditResult:
    findings: list[AuditFinding]
    transcript: Transcript
    prompt: PromptSpec
    diagnostics: list[ParseDiagnostic]


def audit_screen(
    capture: ScreenCapture,
    variant: PromptVariant | str,
    config: ProviderConfig,
    provider: CompletionProvider | None = None,
    cap: int = DEFAULT_TRAVERSAL_CAP,
) -> AuditResult:
    """Synthesize the transcript, assemble the prompt, submit it, and parse
    the completion. An empty capture raises before any provider call."""
    transcript = synthesize(capture, cap=cap)
    prompt = assemble_prompt(variant, transcript)
    completion = submit(prompt, config, provider=provider)
    parsed = parse_audit(completion, transcript)
    return AuditResult(
        findings=parsed.findings,
        transcript=transcript,
        prompt=prompt,
        diagnostics=parsed.diagnostics,
    )
