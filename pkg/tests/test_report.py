import pytest

from talkaudit.audit import AuditFinding, FindingSource, audit_screen
from talkaudit.providers import ProviderConfig
from talkaudit.html_report import emit_html
from talkaudit.report import (
    CrossScreenError,
    Provenance,
    build_report,
    categorize_finding_text,
    emit_json,
    parse_report,
    recount_summary,
    ReportVersionError,
)
from talkaudit.rules import RuleFinding, RuleId, run_all_rules
from talkaudit.taxonomy import ErrorCategory
from talkaudit.transcript import synthesize

from conftest import MOCK_DIR, load_fixture_capture, make_capture, make_node

PROVENANCE = Provenance(
    prompt_variant="general_contextual",
    provider="mock:canned",
    generated_at="2026-08-11T00:00:00+00:00",
)


def _three_entry_setup():
    nodes = [
        make_node("a", bounds=(0, 0, 100, 50), text="Alpha"),
        make_node("b", bounds=(0, 60, 100, 110), text="Beta"),
        make_node("c", bounds=(0, 120, 100, 170), text="Gamma"),
    ]
    capture = make_capture(nodes)
    transcript = synthesize(capture)
    return capture, transcript


def test_findings_attach_only_to_their_entry():
    capture, transcript = _three_entry_setup()
    finding = AuditFinding(index=1, transcript="Beta", issue="Too vague")
    report = build_report(transcript, [], [finding], capture, PROVENANCE)
    assert [len(e.findings) for e in report.entries] == [0, 1, 0]


def test_rule_and_llm_findings_coexist_with_sources():
    capture, transcript = _three_entry_setup()
    rule = RuleFinding(RuleId.MISSING_LABEL, "b", "This item may not have a label.")
    llm = AuditFinding(index=1, transcript="Beta", issue="Announcement is uninformative")
    report = build_report(transcript, [rule], [llm], capture, PROVENANCE)
    entry = report.entries[1]
    assert len(entry.findings) == 2
    assert {f.source for f in entry.findings} == {FindingSource.RULE, FindingSource.LLM}


def test_identical_issue_text_deduplicated_across_sources():
    capture, transcript = _three_entry_setup()
    text = "Same message"
    rule = RuleFinding(RuleId.MISSING_LABEL, "b", text)
    llm = AuditFinding(index=1, transcript="Beta", issue=text)
    report = build_report(transcript, [rule], [llm], capture, PROVENANCE)
    entry = report.entries[1]
    assert len(entry.findings) == 1
    assert entry.findings[0].source is FindingSource.LLM


def test_no_issue_records_not_listed():
    capture, transcript = _three_entry_setup()
    silent = AuditFinding(index=0, transcript="Alpha", issue="")
    report = build_report(transcript, [], [silent], capture, PROVENANCE)
    assert all(not e.findings for e in report.entries)


def test_rule_finding_on_unannounced_node_dropped():
    capture, transcript = _three_entry_setup()
    rule = RuleFinding(RuleId.MISSING_LABEL, "ghost", "msg")
    report = build_report(transcript, [rule], [], capture, PROVENANCE)
    assert all(not e.findings for e in report.entries)


def test_cross_screen_inputs_rejected():
    capture, transcript = _three_entry_setup()
    other = make_capture([make_node("z", text="Z")], screen_id="elsewhere")
    with pytest.raises(CrossScreenError):
        build_report(transcript, [], [], other, PROVENANCE)


def test_summary_counts_equal_entry_tallies():
    capture = load_fixture_capture("traintime_schedule")
    config = ProviderConfig(
        provider_name="mock", model_id="canned", endpoint=str(MOCK_DIR), max_retries=0, timeout=5
    )
    result = audit_screen(capture, "general_contextual", config)
    report = build_report(
        result.transcript, run_all_rules(capture), result.findings, capture, PROVENANCE
    )
    assert report.summary == recount_summary(report)
    assert sum(report.summary.values()) == sum(1 for e in report.entries if e.findings)


def test_amazon_fixture_internal_identifier_entry(amazon_capture):
    config = ProviderConfig(
        provider_name="mock", model_id="canned", endpoint=str(MOCK_DIR), max_retries=0, timeout=5
    )
    result = audit_screen(amazon_capture, "general_contextual", config)
    report = build_report(result.transcript, [], result.findings, amazon_capture, PROVENANCE)
    flagged = report.entries[2]
    assert flagged.findings[0].issue == "Using internal identifiers as labels"
    assert flagged.findings[0].suggestion  # actionable advice present


def test_category_hint_keywords():
    assert categorize_finding_text("The button is unlabeled") is ErrorCategory.MISSING_LABEL
    assert categorize_finding_text("Elements should be grouped") is ErrorCategory.STRUCTURE_GROUPING
    assert categorize_finding_text("No heading indication") is ErrorCategory.HEADING
    assert categorize_finding_text("Control is not focusable") is ErrorCategory.FUNCTIONALITY
    assert categorize_finding_text("Uses an internal identifier") is ErrorCategory.LABEL_QUALITY
    assert categorize_finding_text("The border is recorded") is None


# --- JSON round-trip ---------------------------------------------------------


def _fixture_report(name):
    capture = load_fixture_capture(name)
    config = ProviderConfig(
        provider_name="mock", model_id="canned", endpoint=str(MOCK_DIR), max_retries=0, timeout=5
    )
    result = audit_screen(capture, "general_contextual", config)
    return build_report(
        result.transcript, run_all_rules(capture), result.findings, capture, PROVENANCE
    )


@pytest.mark.parametrize(
    "name", ["amazon_music_home", "united_booking", "traintime_schedule"]
)
def test_fixture_reports_round_trip(name):
    report = _fixture_report(name)
    assert parse_report(emit_json(report)) == report


def test_empty_findings_report_round_trips():
    capture, transcript = _three_entry_setup()
    report = build_report(transcript, [], [], capture, PROVENANCE)
    assert parse_report(emit_json(report)) == report


def test_unicode_report_round_trips_byte_identically():
    nodes = [make_node("u1", text="Ναυτία — nausée ✓"), make_node("u2", bounds=(0, 60, 100, 110), text="на главную")]
    capture = make_capture(nodes)
    transcript = synthesize(capture)
    finding = AuditFinding(index=0, transcript="Ναυτία — nausée ✓", issue="Égalité check")
    report = build_report(transcript, [], [finding], capture, PROVENANCE)
    serialized = emit_json(report)
    assert emit_json(parse_report(serialized)) == serialized
    assert "Ναυτία" in serialized  # not ASCII-escaped


def test_unknown_report_version_rejected():
    report = _fixture_report("united_booking")
    tampered = emit_json(report).replace('"report_version": 1', '"report_version": 2')
    with pytest.raises(ReportVersionError):
        parse_report(tampered)


# --- HTML ----------------------------------------------------------------------


def test_html_zero_findings_states_clean_and_lists_transcript():
    capture, transcript = _three_entry_setup()
    report = build_report(transcript, [], [], capture, PROVENANCE)
    html = emit_html(report)
    assert "No accessibility issues were detected" in html
    for entry in report.entries:
        assert entry.transcript in html


def test_html_contains_suggestion_verbatim():
    capture, transcript = _three_entry_setup()
    finding = AuditFinding(
        index=1,
        transcript="Beta",
        issue="Too vague",
        explanation="Hard to tell apart.",
        suggestion="Rename to something descriptive.",
    )
    report = build_report(transcript, [], [finding], capture, PROVENANCE)
    html = emit_html(report)
    assert "Rename to something descriptive." in html


def test_html_highlight_boxes_match_entries_with_findings():
    report = _fixture_report("traintime_schedule")
    html = emit_html(report)
    flagged = sum(1 for e in report.entries if e.findings)
    assert html.count('class="hl"') == flagged
    assert flagged >= 2


def test_traintime_entries_1_and_12_expandable():
    report = _fixture_report("traintime_schedule")
    html = emit_html(report)
    assert 'id="entry-1"><details>' in html
    assert 'id="entry-12"><details>' in html


def test_html_deterministic_and_offline():
    report = _fixture_report("united_booking")
    assert emit_html(report) == emit_html(report)
    html = emit_html(report)
    assert "http://" not in html
    assert "https://" not in html
    assert PROVENANCE.generated_at not in html  # timestamps stay out of the body
