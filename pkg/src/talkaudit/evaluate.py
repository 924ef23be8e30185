"""Scoring harness: match findings to labeled elements, apply verdicts, compute metrics.

Correctness is an element-level judgment: a tool's output for an element is
either consistent with the expert label or not. Matching produces candidate
pairs (tp/fp/fn/tn); scoring turns adjudicated candidates into precision,
recall, F1, and per-category accuracy. Undefined ratios (zero denominators)
are reported as absent, never as zero.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from enum import Enum

from .audit import AuditFinding
from .taxonomy import Adjudication, ErrorCategory, GroundTruthLabel, Verdict
from .transcript import Transcript


class MatchKind(str, Enum):
    TP = "tp"  # labeled error, tool reported something
    FP = "fp"  # tool reported on an element with no labeled error
    FN = "fn"  # labeled error, tool silent
    TN = "tn"  # explicit no-error label, tool silent


class CrossScreenError(Exception):
    """Findings, labels, and transcript must all describe the same screen."""


class MissingVerdictError(Exception):
    """A tp candidate has no adjudication and strict-auto mode is off."""


class FewerThanTwoRunsError(Exception):
    pass


@dataclass(frozen=True)
class MatchCandidate:
    screen_id: str
    element_id: str
    kind: MatchKind
    findings: tuple[AuditFinding, ...] = ()
    label: GroundTruthLabel | None = None


def _resolve_label_element(label: GroundTruthLabel, transcript: Transcript) -> str:
    if label.node_id is not None:
        return label.node_id
    assert label.entry_index is not None
    if 0 <= label.entry_index < len(transcript.entries):
        return transcript.entries[label.entry_index].node_id
    return f"entry:{label.entry_index}"


def match_findings(
    findings: list[AuditFinding],
    labels: list[GroundTruthLabel],
    transcript: Transcript,
    per_error: bool = False,
) -> list[MatchCandidate]:
    """Pair findings with ground-truth labels element by element.

    Finding indices resolve to elements through the transcript. Findings with
    an empty issue are explicit no-issue records and count as silence.
    Multiple findings on one element collapse into a single candidate; with
    ``per_error`` each label on an element yields its own candidate instead.
    """
    screen_id = transcript.screen_id
    if any(label.screen_id != screen_id for label in labels):
        raise CrossScreenError("labels reference a different screen than the transcript")

    findings_by_element: dict[str, list[AuditFinding]] = {}
    for finding in findings:
        if not finding.issue:
            continue
        if 0 <= finding.index < len(transcript.entries):
            element = transcript.entries[finding.index].node_id
        else:
            element = f"entry:{finding.index}"
        findings_by_element.setdefault(element, []).append(finding)

    labels_by_element: dict[str, list[GroundTruthLabel]] = {}
    for label in labels:
        element = _resolve_label_element(label, transcript)
        labels_by_element.setdefault(element, []).append(label)

    candidates: list[MatchCandidate] = []
    for element, element_labels in labels_by_element.items():
        element_findings = tuple(findings_by_element.pop(element, ()))
        error_labels = [l for l in element_labels if l.category is not ErrorCategory.NO_ERROR]
        if per_error and error_labels:
            representative = error_labels
        else:
            representative = [error_labels[0]] if error_labels else [element_labels[0]]
        for label in representative:
            if label.category is ErrorCategory.NO_ERROR:
                kind = MatchKind.FP if element_findings else MatchKind.TN
            else:
                kind = MatchKind.TP if element_findings else MatchKind.FN
            candidates.append(
                MatchCandidate(
                    screen_id=screen_id,
                    element_id=element,
                    kind=kind,
                    findings=element_findings,
                    label=label,
                )
            )

    # findings on elements with no label at all are false positives
    for element, element_findings in findings_by_element.items():
        candidates.append(
            MatchCandidate(
                screen_id=screen_id,
                element_id=element,
                kind=MatchKind.FP,
                findings=tuple(element_findings),
                label=None,
            )
        )
    return candidates


@dataclass(frozen=True)
class Counts:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0


@dataclass(frozen=True)
class EvaluationMetrics:
    counts: Counts
    precision: float | None
    recall: float | None
    f1: float | None
    per_category_accuracy: dict[ErrorCategory, float] = field(default_factory=dict)


def f1_score(precision: float | None, recall: float | None) -> float | None:
    """Harmonic mean of precision and recall; absent when either is absent or both are zero."""
    if precision is None or recall is None:
        return None
    if precision + recall == 0:
        return None
    return 2 * precision * recall / (precision + recall)


def _ratio(numerator: int, denominator: int) -> float | None:
    if denominator == 0:
        return None
    return numerator / denominator


def _verdict_for(
    candidate: MatchCandidate,
    verdicts: dict[tuple[str, str], Verdict],
    strict_auto: bool,
) -> Verdict:
    key = (candidate.screen_id, candidate.element_id)
    if key in verdicts:
        return verdicts[key]
    if strict_auto:
        return Verdict.CONSISTENT
    raise MissingVerdictError(
        f"no verdict for element {candidate.element_id!r} on screen {candidate.screen_id!r}"
    )


def score(
    candidates: list[MatchCandidate],
    verdicts: list[Adjudication] | dict[tuple[str, str], Verdict] | None = None,
    strict_auto: bool = False,
) -> EvaluationMetrics:
    """Turn adjudicated candidates into metrics.

    A tp candidate judged consistent counts as a true positive; judged
    inconsistent it counts as both a false positive (the tool's claim was
    wrong) and a false negative (the real error went undetected). With
    ``strict_auto`` any finding on a labeled-error element counts as
    consistent, an upper bound useful for offline runs.
    """
    if verdicts is None:
        verdict_map: dict[tuple[str, str], Verdict] = {}
    elif isinstance(verdicts, dict):
        verdict_map = verdicts
    else:
        verdict_map = {(v.screen_id, v.node_id): v.verdict for v in verdicts}

    tp = fp = fn = tn = 0
    per_category_total: dict[ErrorCategory, int] = {}
    per_category_consistent: dict[ErrorCategory, int] = {}

    for candidate in candidates:
        consistent = False
        if candidate.kind is MatchKind.TP:
            verdict = _verdict_for(candidate, verdict_map, strict_auto)
            if verdict is Verdict.CONSISTENT:
                tp += 1
                consistent = True
            else:
                fp += 1
                fn += 1
        elif candidate.kind is MatchKind.FP:
            fp += 1
        elif candidate.kind is MatchKind.FN:
            fn += 1
        else:
            tn += 1
            consistent = True

        if candidate.label is not None:
            category = candidate.label.category
            per_category_total[category] = per_category_total.get(category, 0) + 1
            if consistent:
                per_category_consistent[category] = per_category_consistent.get(category, 0) + 1

    per_category_accuracy = {
        category: per_category_consistent.get(category, 0) / total
        for category, total in per_category_total.items()
    }

    precision = _ratio(tp, tp + fp)
    recall = _ratio(tp, tp + fn)
    return EvaluationMetrics(
        counts=Counts(tp=tp, fp=fp, fn=fn, tn=tn),
        precision=precision,
        recall=recall,
        f1=f1_score(precision, recall),
        per_category_accuracy=per_category_accuracy,
    )


@dataclass(frozen=True)
class ConsistencyReport:
    per_run: tuple[EvaluationMetrics, ...]
    mean_precision: float | None
    stdev_precision: float | None
    mean_recall: float | None
    stdev_recall: float | None
    overall_f1: float | None  # harmonic mean of the mean precision and mean recall


def consistency_report(
    runs: list[list[AuditFinding]],
    labels: list[GroundTruthLabel],
    transcript: Transcript,
    verdicts_per_run: list[list[Adjudication]] | None = None,
    strict_auto: bool = True,
) -> ConsistencyReport:
    """Score repeated runs over the same corpus and summarize their spread
    with the mean and sample standard deviation of precision and recall."""
    if len(runs) < 2:
        raise FewerThanTwoRunsError("consistency needs at least two runs")
    if verdicts_per_run is not None and len(verdicts_per_run) != len(runs):
        raise ValueError("verdicts_per_run must align with runs")

    per_run = []
    for i, findings in enumerate(runs):
        candidates = match_findings(findings, labels, transcript)
        run_verdicts = verdicts_per_run[i] if verdicts_per_run is not None else None
        per_run.append(score(candidates, run_verdicts, strict_auto=strict_auto))

    def summarize(values: list[float | None]) -> tuple[float | None, float | None]:
        if any(v is None for v in values):
            return None, None
        concrete = [v for v in values if v is not None]
        return statistics.mean(concrete), statistics.stdev(concrete)

    mean_p, sd_p = summarize([m.precision for m in per_run])
    mean_r, sd_r = summarize([m.recall for m in per_run])
    return ConsistencyReport(
        per_run=tuple(per_run),
        mean_precision=mean_p,
        stdev_precision=sd_p,
        mean_recall=mean_r,
        stdev_recall=sd_r,
        overall_f1=f1_score(mean_p, mean_r),
    )


@dataclass(frozen=True)
class CategoryStats:
    total: int  # number of labels in the category (the denominator)
    consistent: int  # true positives, or true negatives for the no-error class
    errors: int  # classification errors (the X bar in a stacked view)

    @property
    def accuracy(self) -> float:
        return self.consistent / self.total if self.total else 0.0


def category_breakdown(
    candidates: list[MatchCandidate],
    labels: list[GroundTruthLabel],
    verdicts: list[Adjudication] | dict[tuple[str, str], Verdict] | None = None,
    strict_auto: bool = False,
    transcript: Transcript | None = None,
) -> dict[ErrorCategory, CategoryStats]:
    """Per-category accuracy with stacked counts: consistent hits versus
    classification errors, denominated by the label tally of each category.

    ``transcript`` is only needed to resolve labels that reference an entry
    index rather than a node id.
    """
    if isinstance(verdicts, dict) or verdicts is None:
        verdict_map = verdicts or {}
    else:
        verdict_map = {(v.screen_id, v.node_id): v.verdict for v in verdicts}

    consistent_elements: set[tuple[str, str]] = set()
    for candidate in candidates:
        key = (candidate.screen_id, candidate.element_id)
        if candidate.kind is MatchKind.TN:
            consistent_elements.add(key)
        elif candidate.kind is MatchKind.TP:
            if _verdict_for(candidate, verdict_map, strict_auto) is Verdict.CONSISTENT:
                consistent_elements.add(key)

    element_by_label: dict[GroundTruthLabel, str] = {
        c.label: c.element_id for c in candidates if c.label is not None
    }

    totals: dict[ErrorCategory, int] = {}
    consistent: dict[ErrorCategory, int] = {}
    for label in labels:
        totals[label.category] = totals.get(label.category, 0) + 1
        if label.node_id is not None:
            element = label.node_id
        elif transcript is not None:
            element = _resolve_label_element(label, transcript)
        else:
            element = element_by_label.get(label)
        if element is not None and (label.screen_id, element) in consistent_elements:
            consistent[label.category] = consistent.get(label.category, 0) + 1

    return {
        category: CategoryStats(
            total=total,
            consistent=consistent.get(category, 0),
            errors=total - consistent.get(category, 0),
        )
        for category, total in totals.items()
    }


def format_metrics_table(rows: list[tuple[str, EvaluationMetrics]]) -> str:
    """Fixed-width text table of precision/recall/F1, rounded to three
    decimals at presentation time only; absent values render as a dash."""

    def fmt(value: float | None) -> str:
        return f"{value:.3f}" if value is not None else "-"

    name_width = max([len("Tool")] + [len(name) for name, _ in rows])
    header = f"{'Tool':<{name_width}}  {'Precision':>9}  {'Recall':>9}  {'F1':>9}"
    lines = [header, "-" * len(header)]
    for name, metrics in rows:
        lines.append(
            f"{name:<{name_width}}  {fmt(metrics.precision):>9}  "
            f"{fmt(metrics.recall):>9}  {fmt(metrics.f1):>9}"
        )
    return "\n".join(lines)
