import json

from click.testing import CliRunner

from talkaudit.cli import main
from talkaudit.report import parse_report

from conftest import CAPTURE_DIR, GROUND_TRUTH_DIR, MOCK_DIR, VERDICTS_DIR


def _run(args):
    return CliRunner().invoke(main, args, catch_exceptions=False)


def test_audit_writes_report_pair(tmp_path):
    result = _run(
        [
            "audit",
            str(CAPTURE_DIR / "traintime_schedule.capture.json"),
            "--mock-dir",
            str(MOCK_DIR),
            "--out",
            str(tmp_path),
        ]
    )
    assert result.exit_code == 0, result.output
    report_path = tmp_path / "traintime_schedule" / "report.json"
    html_path = tmp_path / "traintime_schedule" / "report.html"
    assert report_path.is_file() and html_path.is_file()
    report = parse_report(report_path.read_text())
    assert report.screen_id == "traintime_schedule"
    assert any(e.findings for e in report.entries)


def test_audit_no_rules_keeps_only_model_findings(tmp_path):
    result = _run(
        [
            "audit",
            str(CAPTURE_DIR / "amazon_music_home.capture.json"),
            "--mock-dir",
            str(MOCK_DIR),
            "--no-rules",
            "--out",
            str(tmp_path),
        ]
    )
    assert result.exit_code == 0, result.output
    report = parse_report((tmp_path / "amazon_music_home" / "report.json").read_text())
    sources = {f.source.value for e in report.entries for f in e.findings}
    assert sources == {"llm"}


def test_transcript_command(tmp_path):
    out = tmp_path / "t.json"
    result = _run(
        ["transcript", str(CAPTURE_DIR / "united_booking.capture.json"), "-o", str(out)]
    )
    assert result.exit_code == 0
    doc = json.loads(out.read_text())
    assert doc["app"] == "United"
    assert doc["entries"][0]["transcript"] == "Select departing flight. Heading"


def test_prompt_command_prints_variant():
    result = _run(
        [
            "prompt",
            str(CAPTURE_DIR / "united_booking.capture.json"),
            "--prompt-variant",
            "base",
        ]
    )
    assert result.exit_code == 0
    assert "## Your task" in result.output
    assert "## Basics of Accessibility" not in result.output


def test_check_command_reports_findings():
    result = CliRunner().invoke(
        main, ["check", str(CAPTURE_DIR / "amazon_music_home.capture.json")]
    )
    assert result.exit_code == 1  # findings present
    findings = json.loads(result.output)
    assert {f["rule_id"] for f in findings} >= {"missing-label", "duplicate-description"}


def test_validate_command_flags_unreachable_clickable():
    result = CliRunner().invoke(
        main, ["validate", str(CAPTURE_DIR / "traintime_schedule.capture.json")]
    )
    assert result.exit_code == 1
    assert "clickable-not-focusable" in result.output


def test_validate_clean_corpus():
    result = CliRunner().invoke(
        main, ["validate", str(CAPTURE_DIR / "united_booking.capture.json")]
    )
    assert result.exit_code == 0, result.output
    assert "corpus clean" in result.output


def test_score_command_with_verdicts(tmp_path):
    _run(
        [
            "audit",
            str(CAPTURE_DIR / "traintime_schedule.capture.json"),
            "--mock-dir",
            str(MOCK_DIR),
            "--out",
            str(tmp_path),
        ]
    )
    result = _run(
        [
            "score",
            "--report",
            str(tmp_path / "traintime_schedule" / "report.json"),
            "--labels",
            str(GROUND_TRUTH_DIR / "traintime_schedule.json"),
            "--verdicts",
            str(VERDICTS_DIR / "traintime_schedule.verdicts.json"),
        ]
    )
    assert result.exit_code == 0, result.output
    assert "Precision" in result.output
    payload = json.loads(result.output[result.output.index("{"):])
    # 3 consistent findings, 1 missed error (the unreachable switch), 4 clean elements
    assert payload["counts"] == {"tp": 3, "fp": 0, "fn": 1, "tn": 4}
    assert payload["precision"] == 1.0
    assert payload["recall"] == 0.75


def test_score_requires_verdicts_or_strict_auto(tmp_path):
    _run(
        [
            "audit",
            str(CAPTURE_DIR / "united_booking.capture.json"),
            "--mock-dir",
            str(MOCK_DIR),
            "--out",
            str(tmp_path),
        ]
    )
    result = CliRunner().invoke(
        main,
        [
            "score",
            "--report",
            str(tmp_path / "united_booking" / "report.json"),
            "--labels",
            str(GROUND_TRUTH_DIR / "united_booking.json"),
        ],
    )
    assert result.exit_code != 0
    assert "strict-auto" in result.output
