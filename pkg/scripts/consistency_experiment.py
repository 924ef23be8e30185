#!/usr/bin/env python3
"""Multi-run consistency protocol on one screen.

Repeats the audit N times over the same corpus and reports per-run metrics
plus the mean and sample standard deviation of precision and recall, and the
F1 of the means. With the deterministic mock provider every run is identical
(stdev 0); pointing ``--preset`` at a live provider measures real run-to-run
spread.

    python scripts/consistency_experiment.py [--runs 5] [--preset mock]
"""

import argparse
from pathlib import Path

from talkaudit.audit import audit_screen
from talkaudit.capture import parse_capture
from talkaudit.evaluate import consistency_report
from talkaudit.providers import ProviderConfig, load_provider_presets
from talkaudit.taxonomy import load_ground_truth, load_verdicts

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--runs", type=int, default=5)
    parser.add_argument("--preset", default="mock")
    parser.add_argument("--screen", default="traintime_schedule")
    args = parser.parse_args()

    if args.preset == "mock":
        config = ProviderConfig(
            provider_name="mock", model_id="canned",
            endpoint=str(FIXTURES / "mock_completions"), max_retries=0, timeout=5.0,
        )
    else:
        config = load_provider_presets()[args.preset]

    capture = parse_capture(
        (FIXTURES / "captures" / f"{args.screen}.capture.json").read_bytes()
    )
    labels = load_ground_truth(FIXTURES / "ground_truth" / f"{args.screen}.json")
    verdict_path = FIXTURES / "verdicts" / f"{args.screen}.verdicts.json"
    verdicts = load_verdicts(verdict_path) if verdict_path.exists() else None

    runs = []
    transcript = None
    for i in range(args.runs):
        result = audit_screen(capture, "general_contextual", config)
        transcript = result.transcript
        runs.append(result.findings)
        print(f"run {i + 1}: {len(result.findings)} findings")

    verdicts_per_run = [verdicts] * args.runs if verdicts is not None else None
    report = consistency_report(
        runs, labels, transcript,
        verdicts_per_run=verdicts_per_run, strict_auto=verdicts is None,
    )
    for i, metrics in enumerate(report.per_run):
        print(f"run {i + 1}: precision={metrics.precision} recall={metrics.recall} f1={metrics.f1}")
    print(f"mean precision {report.mean_precision:.3f} (sd {report.stdev_precision:.3f})")
    print(f"mean recall    {report.mean_recall:.3f} (sd {report.stdev_recall:.3f})")
    print(f"overall F1     {report.overall_f1:.3f}")


if __name__ == "__main__":
    main()
