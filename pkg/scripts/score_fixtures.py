#!/usr/bin/env python3
"""Score the mock pipeline against the shipped ground-truth labels.

Demonstrates the evaluation harness end to end: match findings to labeled
elements, apply verdicts (adjudication files where shipped, strict-auto
otherwise), and print a metrics table plus the per-category breakdown.

    python scripts/score_fixtures.py
"""

from pathlib import Path

from talkaudit.audit import audit_screen
from talkaudit.capture import parse_capture
from talkaudit.evaluate import category_breakdown, format_metrics_table, match_findings, score
from talkaudit.providers import ProviderConfig
from talkaudit.taxonomy import load_ground_truth, load_verdicts

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


def main() -> None:
    config = ProviderConfig(
        provider_name="mock", model_id="canned",
        endpoint=str(FIXTURES / "mock_completions"), max_retries=0, timeout=5.0,
    )
    rows = []
    for capture_path in sorted((FIXTURES / "captures").glob("*.capture.json")):
        capture = parse_capture(capture_path.read_bytes())
        labels = load_ground_truth(FIXTURES / "ground_truth" / f"{capture.screen_id}.json")
        verdict_path = FIXTURES / "verdicts" / f"{capture.screen_id}.verdicts.json"
        verdicts = load_verdicts(verdict_path) if verdict_path.exists() else None

        result = audit_screen(capture, "general_contextual", config)
        candidates = match_findings(result.findings, labels, result.transcript)
        metrics = score(candidates, verdicts, strict_auto=verdicts is None)
        rows.append((capture.screen_id, metrics))

        breakdown = category_breakdown(
            candidates, labels, verdicts, strict_auto=verdicts is None,
            transcript=result.transcript,
        )
        print(f"-- {capture.screen_id}")
        for category, stats in sorted(breakdown.items(), key=lambda kv: kv[0].value):
            print(f"   {category.value:<20} {stats.consistent}/{stats.total} "
                  f"(accuracy {stats.accuracy:.3f}, errors {stats.errors})")

    print()
    print(format_metrics_table(rows))


if __name__ == "__main__":
    main()
