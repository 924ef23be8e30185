"""Error taxonomy, ground-truth dataset schema, and adjudication records.

Element-level labels use a closed six-way taxonomy (five error categories plus
an explicit no-error class). Each error category maps to a fixed set of WCAG
2.1 success criteria; ground-truth labels may only cite criteria from their
category's set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path


class ErrorCategory(str, Enum):
    MISSING_LABEL = "missing_label"
    LABEL_QUALITY = "label_quality"
    STRUCTURE_GROUPING = "structure_grouping"
    HEADING = "heading"
    FUNCTIONALITY = "functionality"
    NO_ERROR = "no_error"


ERROR_CATEGORIES = tuple(c for c in ErrorCategory if c is not ErrorCategory.NO_ERROR)

# WCAG 2.1 success criteria admissible per category
WCAG_CRITERIA: dict[ErrorCategory, tuple[str, ...]] = {
    ErrorCategory.MISSING_LABEL: ("1.1.1",),
    ErrorCategory.LABEL_QUALITY: ("2.4.4", "2.4.6", "4.1.2"),
    ErrorCategory.STRUCTURE_GROUPING: ("1.3.1", "1.3.2", "2.4.3", "3.2.3"),
    ErrorCategory.HEADING: ("2.4.2", "2.4.10"),
    ErrorCategory.FUNCTIONALITY: ("2.1.1", "3.2.1", "3.2.2", "4.1.3"),
    ErrorCategory.NO_ERROR: (),
}


class Verdict(str, Enum):
    CONSISTENT = "consistent"
    INCONSISTENT = "inconsistent"


class GroundTruthError(Exception):
    """A ground-truth or verdict file violates its schema."""


@dataclass(frozen=True)
class GroundTruthLabel:
    """Expert determination for one UI element: either an error category with
    a description, or an explicit no-error."""

    screen_id: str
    category: ErrorCategory
    node_id: str | None = None
    entry_index: int | None = None
    description: str = ""
    wcag_refs: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if (self.node_id is None) == (self.entry_index is None):
            raise ValueError("label must reference exactly one of node_id or entry_index")
        if self.category is not ErrorCategory.NO_ERROR:
            allowed = set(WCAG_CRITERIA[self.category])
            bad = [ref for ref in self.wcag_refs if ref not in allowed]
            if bad:
                raise ValueError(
                    f"wcag refs {bad} are not admissible for category {self.category.value}"
                )


@dataclass(frozen=True)
class Adjudication:
    """Human judgment of one tool output against the ground truth for an element."""

    screen_id: str
    node_id: str
    tool_name: str
    verdict: Verdict


def load_ground_truth(path: str | Path) -> list[GroundTruthLabel]:
    """Load one screen's label file: ``{"screen_id": ..., "labels": [...]}``
    where each label has ``node_id`` or ``entry_index``, ``category``,
    ``description``, and ``wcag``."""
    path = Path(path)
    doc = json.loads(path.read_text(encoding="utf-8"))
    if not isinstance(doc, dict) or "screen_id" not in doc or "labels" not in doc:
        raise GroundTruthError(f"{path}: expected an object with screen_id and labels")
    screen_id = doc["screen_id"]
    labels = []
    for i, raw in enumerate(doc["labels"]):
        try:
            category = ErrorCategory(raw["category"])
            labels.append(
                GroundTruthLabel(
                    screen_id=screen_id,
                    category=category,
                    node_id=raw.get("node_id"),
                    entry_index=raw.get("entry_index"),
                    description=raw.get("description", ""),
                    wcag_refs=tuple(raw.get("wcag", [])),
                )
            )
        except (KeyError, ValueError) as exc:
            raise GroundTruthError(f"{path}: label {i}: {exc}") from exc
    return labels


def load_ground_truth_corpus(directory: str | Path) -> list[GroundTruthLabel]:
    """All labels from every ``*.json`` file in a directory, sorted by filename."""
    labels: list[GroundTruthLabel] = []
    for path in sorted(Path(directory).glob("*.json")):
        labels.extend(load_ground_truth(path))
    return labels


def load_verdicts(path: str | Path) -> list[Adjudication]:
    """Load a verdict file: a JSON list of ``{screen_id, node_id, tool, verdict}``."""
    path = Path(path)
    doc = json.loads(path.read_text(encoding="utf-8"))
    if not isinstance(doc, list):
        raise GroundTruthError(f"{path}: expected a JSON list of verdict records")
    verdicts = []
    for i, raw in enumerate(doc):
        try:
            verdicts.append(
                Adjudication(
                    screen_id=raw["screen_id"],
                    node_id=raw["node_id"],
                    tool_name=raw["tool"],
                    verdict=Verdict(raw["verdict"]),
                )
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise GroundTruthError(f"{path}: record {i}: {exc}") from exc
    return verdicts


def category_counts(labels: list[GroundTruthLabel]) -> dict[ErrorCategory, int]:
    """Label tally per category, including zero counts; the dataset's bookkeeping view."""
    counts = {category: 0 for category in ErrorCategory}
    for label in labels:
        counts[label.category] += 1
    return counts
