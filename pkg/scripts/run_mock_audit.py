#!/usr/bin/env python3
"""Run the full offline pipeline over the shipped fixture screens.

Writes reports (JSON + HTML) to ``reports/`` and prints a findings summary.
A quick way to inspect end-to-end behavior without any provider credentials:

    python scripts/run_mock_audit.py [--variant general_contextual] [--out reports]
"""

import argparse
from datetime import datetime, timezone
from pathlib import Path

from talkaudit.audit import audit_screen
from talkaudit.capture import parse_capture, validate_corpus
from talkaudit.html_report import emit_html
from talkaudit.prompts import PromptVariant
from talkaudit.providers import ProviderConfig
from talkaudit.report import Provenance, build_report, emit_json
from talkaudit.rules import run_all_rules

ROOT = Path(__file__).resolve().parent.parent
CAPTURES = ROOT / "fixtures" / "captures"
MOCK_COMPLETIONS = ROOT / "fixtures" / "mock_completions"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--variant", default="general_contextual",
                        choices=[v.value for v in PromptVariant])
    parser.add_argument("--out", type=Path, default=ROOT / "reports")
    args = parser.parse_args()

    config = ProviderConfig(
        provider_name="mock", model_id="canned", endpoint=str(MOCK_COMPLETIONS),
        max_retries=0, timeout=5.0,
    )
    captures = [parse_capture(p.read_bytes()) for p in sorted(CAPTURES.glob("*.capture.json"))]

    for diagnostic in validate_corpus(captures):
        where = diagnostic.node_id or diagnostic.screen_id
        print(f"corpus diagnostic [{diagnostic.kind}] {where}: {diagnostic.message}")

    generated_at = datetime.now(timezone.utc).isoformat(timespec="seconds")
    for capture in captures:
        result = audit_screen(capture, args.variant, config)
        report = build_report(
            result.transcript,
            run_all_rules(capture),
            result.findings,
            capture,
            Provenance(args.variant, "mock:canned", generated_at),
        )
        target = args.out / capture.screen_id
        target.mkdir(parents=True, exist_ok=True)
        (target / "report.json").write_text(emit_json(report), encoding="utf-8")
        (target / "report.html").write_text(emit_html(report), encoding="utf-8")
        flagged = [e for e in report.entries if e.findings]
        print(f"{capture.screen_id}: {len(report.entries)} announcements, "
              f"{len(flagged)} flagged entries -> {target}/report.html")
        for entry in flagged:
            print(f"  [{entry.index}] {entry.transcript}")
            for finding in entry.findings:
                print(f"      ({finding.source.value}) {finding.issue}")


if __name__ == "__main__":
    main()
