"""Rule-based accessibility checks in the style of static scanner baselines.

Four deterministic rules over the view hierarchy. They are intentionally a
small, high-precision set; the audit pipeline runs them alongside the
model-based auditor and merges both into one report.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .capture import NodeRole, ScreenCapture, ViewNode
from .geometry import iou
from .transcript import DEFAULT_ASSOCIATION_THRESHOLD, label_is_fallback, resolve_label


class RuleId(str, Enum):
    MISSING_LABEL = "missing-label"
    DUPLICATE_DESCRIPTION = "duplicate-description"
    OVERLAPPING_CLICKABLES = "overlapping-clickables"
    UNINFORMATIVE_LABEL = "uninformative-label"


@dataclass(frozen=True)
class RuleFinding:
    rule_id: RuleId
    node_id: str
    message: str


_LABELLESS_ROLES = {NodeRole.IMAGE, NodeRole.BUTTON}

# drawable/layout resource paths leaking into speech, e.g. res/drawable/ic_action_more.xml
_RESOURCE_PATH = re.compile(r"^\w+[/:][\w/.]+$|\.xml$|\.png$")


def check_missing_label(capture: ScreenCapture) -> list[RuleFinding]:
    """Image and button elements with neither a content description nor text."""
    findings = []
    for node in capture.root.iter_preorder():
        if node.class_role in _LABELLESS_ROLES and not node.text and not node.content_description:
            findings.append(
                RuleFinding(
                    rule_id=RuleId.MISSING_LABEL,
                    node_id=node.node_id,
                    message="This item may not have a label readable by screen readers.",
                )
            )
    return findings


def check_duplicate_description(capture: ScreenCapture) -> list[RuleFinding]:
    """Groups of two or more focusable elements announcing identical labels."""
    by_label: dict[str, list[ViewNode]] = {}
    for node in capture.root.iter_preorder():
        if not node.is_focusable_by_screen_reader:
            continue
        label = resolve_label(node)
        if label:
            by_label.setdefault(label, []).append(node)
    findings = []
    for node in capture.root.iter_preorder():
        label = resolve_label(node)
        if (
            node.is_focusable_by_screen_reader
            and label
            and len(by_label[label]) >= 2
        ):
            findings.append(
                RuleFinding(
                    rule_id=RuleId.DUPLICATE_DESCRIPTION,
                    node_id=node.node_id,
                    message="Multiple items have the same description.",
                )
            )
    return findings


def check_overlapping_clickables(
    capture: ScreenCapture, threshold: float = DEFAULT_ASSOCIATION_THRESHOLD
) -> list[RuleFinding]:
    """Pairs of clickable elements whose bounds overlap more than ``threshold`` IoU."""
    clickables = [n for n in capture.root.iter_preorder() if n.is_clickable]
    flagged: set[str] = set()
    for i, a in enumerate(clickables):
        for b in clickables[i + 1 :]:
            if iou(a.bounds, b.bounds) > threshold:
                flagged.add(a.node_id)
                flagged.add(b.node_id)
    findings = []
    for node in clickables:
        if node.node_id in flagged:
            findings.append(
                RuleFinding(
                    rule_id=RuleId.OVERLAPPING_CLICKABLES,
                    node_id=node.node_id,
                    message="Multiple clickable items share this location on the screen.",
                )
            )
    return findings


def check_uninformative_label(capture: ScreenCapture) -> list[RuleFinding]:
    """Focusable elements speaking an auto-generated fallback label (a resource
    identifier) or a bare punctuation glyph instead of a descriptive label."""
    findings = []
    for node in capture.root.iter_preorder():
        if not node.is_focusable_by_screen_reader:
            continue
        label = resolve_label(node)
        if not label:
            continue
        glyph = len(label) == 1 and not label.isalnum()
        if label_is_fallback(node) or glyph or _RESOURCE_PATH.search(label):
            findings.append(
                RuleFinding(
                    rule_id=RuleId.UNINFORMATIVE_LABEL,
                    node_id=node.node_id,
                    message="Item label may be uninformative to screen reader users.",
                )
            )
    return findings


def run_all_rules(
    capture: ScreenCapture, overlap_threshold: float = DEFAULT_ASSOCIATION_THRESHOLD
) -> list[RuleFinding]:
    findings = []
    findings.extend(check_missing_label(capture))
    findings.extend(check_duplicate_description(capture))
    findings.extend(check_overlapping_clickables(capture, overlap_threshold))
    findings.extend(check_uninformative_label(capture))
    return findings
