"""Command line interface.

``talkaudit audit`` drives the full pipeline for one or more capture files:
transcript synthesis, rule checks, prompt assembly, provider submission,
and report emission (JSON + static HTML). The remaining subcommands expose
the individual stages for inspection and scoring.
"""

from __future__ import annotations

import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import click

from . import report as report_mod
from .audit import FindingSource, audit_screen
from .capture import CaptureError, parse_capture, validate_corpus
from .evaluate import category_breakdown, format_metrics_table, match_findings, score
from .html_report import emit_html
from .prompts import PromptVariant, assemble_prompt
from .providers import ProviderConfig, load_provider_presets
from .rules import run_all_rules
from .taxonomy import load_ground_truth, load_verdicts
from .transcript import (
    DEFAULT_TRAVERSAL_CAP,
    Transcript,
    TranscriptEntry,
    synthesize,
    transcript_to_json,
)

_VARIANTS = [v.value for v in PromptVariant]


def _read_capture(path: Path):
    try:
        return parse_capture(path.read_bytes())
    except CaptureError as exc:
        raise click.ClickException(f"{path}: {exc}") from exc


def _resolve_config(preset: str, provider_config: str | None, mock_dir: str | None) -> ProviderConfig:
    if provider_config:
        fields = json.loads(Path(provider_config).read_text(encoding="utf-8"))
        config = ProviderConfig(**fields)
    else:
        presets = load_provider_presets()
        if preset not in presets:
            raise click.ClickException(
                f"unknown preset {preset!r}; available: {', '.join(sorted(presets))}"
            )
        config = presets[preset]
    if mock_dir:
        config = ProviderConfig(
            provider_name="mock",
            model_id=config.model_id,
            endpoint=mock_dir,
            temperature=config.temperature,
            max_retries=0,
            timeout=config.timeout,
        )
    return config


@click.group()
def main() -> None:
    """Simulate screen reader transcripts and audit them for accessibility errors."""


@main.command()
@click.argument("captures", nargs=-1, required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--prompt-variant", type=click.Choice(_VARIANTS), default="general_contextual",
              show_default=True, help="Prompt composition submitted to the provider.")
@click.option("--preset", default="mock", show_default=True,
              help="Named provider preset (see data/provider_presets.json).")
@click.option("--provider-config", type=click.Path(exists=True), default=None,
              help="JSON file with an explicit provider configuration.")
@click.option("--mock-dir", type=click.Path(exists=True, file_okay=False), default=None,
              help="Serve canned completions from this directory (forces the mock provider).")
@click.option("--out", type=click.Path(path_type=Path), default=Path("reports"),
              show_default=True, help="Output directory; one subdirectory per screen.")
@click.option("--cap", type=int, default=DEFAULT_TRAVERSAL_CAP, show_default=True,
              help="Traversal cap: maximum announcements per screen.")
@click.option("--rules/--no-rules", default=True, show_default=True,
              help="Merge rule-based checker findings into the report.")
def audit(captures, prompt_variant, preset, provider_config, mock_dir, out, cap, rules):
    """Audit capture files and write report.json + report.html for each."""
    config = _resolve_config(preset, provider_config, mock_dir)
    generated_at = datetime.now(timezone.utc).isoformat(timespec="seconds")
    for path in captures:
        capture = _read_capture(path)
        result = audit_screen(capture, prompt_variant, config, cap=cap)
        rule_findings = run_all_rules(capture) if rules else []
        provenance = report_mod.Provenance(
            prompt_variant=prompt_variant,
            provider=f"{config.provider_name}:{config.model_id}",
            generated_at=generated_at,
        )
        built = report_mod.build_report(
            result.transcript, rule_findings, result.findings, capture, provenance
        )
        target = out / capture.screen_id
        target.mkdir(parents=True, exist_ok=True)
        (target / "report.json").write_text(report_mod.emit_json(built), encoding="utf-8")
        (target / "report.html").write_text(emit_html(built), encoding="utf-8")
        total = sum(len(e.findings) for e in built.entries)
        click.echo(f"{capture.screen_id}: {len(built.entries)} entries, {total} findings -> {target}")
        for diagnostic in result.diagnostics:
            click.echo(f"  parse diagnostic [{diagnostic.kind}]: {diagnostic.detail}", err=True)


@main.command()
@click.argument("capture", type=click.Path(exists=True, path_type=Path))
@click.option("--cap", type=int, default=DEFAULT_TRAVERSAL_CAP, show_default=True)
@click.option("-o", "--out", type=click.Path(path_type=Path), default=None,
              help="Write to a file instead of stdout.")
def transcript(capture, cap, out):
    """Synthesize and print the screen reader transcript for a capture."""
    parsed = _read_capture(capture)
    text = transcript_to_json(synthesize(parsed, cap=cap))
    if out:
        out.write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


@main.command()
@click.argument("capture", type=click.Path(exists=True, path_type=Path))
@click.option("--prompt-variant", type=click.Choice(_VARIANTS), default="general_contextual",
              show_default=True)
@click.option("--cap", type=int, default=DEFAULT_TRAVERSAL_CAP, show_default=True)
def prompt(capture, prompt_variant, cap):
    """Print the fully assembled prompt for a capture."""
    parsed = _read_capture(capture)
    spec = assemble_prompt(prompt_variant, synthesize(parsed, cap=cap))
    click.echo(spec.text)


@main.command()
@click.argument("capture", type=click.Path(exists=True, path_type=Path))
def check(capture):
    """Run the rule-based checks on a capture and print findings as JSON."""
    parsed = _read_capture(capture)
    findings = run_all_rules(parsed)
    click.echo(
        json.dumps(
            [
                {"rule_id": f.rule_id.value, "node_id": f.node_id, "message": f.message}
                for f in findings
            ],
            indent=2,
        )
    )
    if findings:
        sys.exit(1)


@main.command()
@click.argument("captures", nargs=-1, required=True, type=click.Path(exists=True, path_type=Path))
def validate(captures):
    """Validate a corpus of captures and print diagnostics."""
    parsed = [_read_capture(path) for path in captures]
    diagnostics = validate_corpus(parsed)
    for diagnostic in diagnostics:
        where = diagnostic.node_id or diagnostic.screen_id
        click.echo(f"[{diagnostic.kind}] {where}: {diagnostic.message}")
    if diagnostics:
        sys.exit(1)
    click.echo(f"corpus clean: {len(parsed)} capture(s)")


@main.command(name="score")
@click.option("--report", "report_path", type=click.Path(exists=True, path_type=Path),
              required=True, help="report.json produced by `talkaudit audit`.")
@click.option("--labels", "labels_path", type=click.Path(exists=True, path_type=Path),
              required=True, help="Ground-truth label file for the same screen.")
@click.option("--verdicts", "verdicts_path", type=click.Path(exists=True, path_type=Path),
              default=None, help="Adjudication file; omit with --strict-auto.")
@click.option("--strict-auto", is_flag=True, default=False,
              help="Count any finding on a labeled-error element as consistent (upper bound).")
@click.option("--source", type=click.Choice(["llm", "rule", "all"]), default="llm",
              show_default=True, help="Which findings to score.")
@click.option("--name", default="talkaudit", show_default=True, help="Row name in the table.")
def score_cmd(report_path, labels_path, verdicts_path, strict_auto, source, name):
    """Score a report against ground truth and print metrics."""
    loaded = report_mod.parse_report(report_path.read_text(encoding="utf-8"))
    transcript = Transcript(
        app_name=loaded.app_name,
        screen_id=loaded.screen_id,
        entries=tuple(
            TranscriptEntry(e.index, e.transcript, e.node_id, e.bounds) for e in loaded.entries
        ),
    )
    findings = [
        finding
        for entry in loaded.entries
        for finding in entry.findings
        if source == "all" or finding.source == FindingSource(source)
    ]
    labels = load_ground_truth(labels_path)
    verdicts = load_verdicts(verdicts_path) if verdicts_path else None
    if verdicts is None and not strict_auto:
        raise click.ClickException("provide --verdicts or pass --strict-auto")

    candidates = match_findings(findings, labels, transcript)
    metrics = score(candidates, verdicts, strict_auto=strict_auto)
    breakdown = category_breakdown(
        candidates, labels, verdicts, strict_auto=strict_auto, transcript=transcript
    )

    click.echo(format_metrics_table([(name, metrics)]))
    click.echo("")
    payload = {
        "counts": {
            "tp": metrics.counts.tp,
            "fp": metrics.counts.fp,
            "fn": metrics.counts.fn,
            "tn": metrics.counts.tn,
        },
        "precision": metrics.precision,
        "recall": metrics.recall,
        "f1": metrics.f1,
        "per_category": {
            category.value: {
                "total": stats.total,
                "consistent": stats.consistent,
                "errors": stats.errors,
                "accuracy": round(stats.accuracy, 3),
            }
            for category, stats in sorted(breakdown.items(), key=lambda kv: kv[0].value)
        },
    }
    click.echo(json.dumps(payload, indent=2))


if __name__ == "__main__":
    main()
