"""Deterministic screen-reader transcript synthesis.

Given a validated capture, this module reproduces what a TalkBack user would
hear when swiping linearly through the screen: which elements receive focus
and in what order, how each announcement is worded, where traversal stops,
and how mid-traversal content changes are folded in.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator

from .capture import (
    ChangeEvent,
    CollectionKind,
    NodeRole,
    NodeState,
    ScreenCapture,
    ViewNode,
)
from .geometry import BoundingBox, iou

DEFAULT_TRAVERSAL_CAP = 40
DEFAULT_ASSOCIATION_THRESHOLD = 0.5

CLICK_HINT = "Double-tap to activate"
LONG_CLICK_HINT = "Double-tap and hold to long press"

_ROLE_PHRASES = {
    NodeRole.BUTTON: "Button",
    NodeRole.IMAGE: None,  # images announce their label bare, like static text
    NodeRole.TEXT: None,
    NodeRole.TAB: "Tab",
    NodeRole.CHECKBOX: "Checkbox",
    NodeRole.EDIT_FIELD: "Edit box",
    NodeRole.HEADING: "Heading",
    NodeRole.LIST_ITEM: None,
    NodeRole.CONTAINER: None,
    NodeRole.OTHER: None,
}

_STATE_WORDS = [
    (NodeState.SELECTED, "Selected"),
    (NodeState.CHECKED, "Checked"),
    (NodeState.DISABLED, "Disabled"),
]

_COLLECTION_WORDS = {
    CollectionKind.TAB: "Tab",
    CollectionKind.LIST: "Item",
    CollectionKind.GRID: "Item",
}


class NotAnnounceableError(Exception):
    """The node has no label, no fallback, and no announceable descendants."""


@dataclass(frozen=True)
class TranscriptEntry:
    index: int
    transcript: str
    node_id: str
    bounds: BoundingBox


@dataclass(frozen=True)
class Transcript:
    app_name: str
    screen_id: str
    entries: tuple[TranscriptEntry, ...]


def resolve_label(node: ViewNode) -> str | None:
    """Label precedence: developer content description, visible text, then the
    screen reader's auto-generated fallback (the resource identifier verbatim)."""
    if node.content_description:
        return node.content_description
    if node.text:
        return node.text
    if node.resource_id:
        return node.resource_id
    return None


def label_is_fallback(node: ViewNode) -> bool:
    """True when the announced label is auto-generated rather than authored."""
    return not node.content_description and not node.text and bool(node.resource_id)


def _own_or_group_label(node: ViewNode) -> str | None:
    """A focused container speaks its own label plus its descendants', in tree order."""
    parts: list[str] = []
    own = resolve_label(node)
    if own:
        parts.append(own)
    for child in node.children:
        for descendant in child.iter_preorder():
            label = resolve_label(descendant)
            if label:
                parts.append(label)
    if not parts:
        return None
    return ", ".join(parts)


def _spoken_states(node: ViewNode) -> list[str]:
    return [word for flag, word in _STATE_WORDS if flag in node.state]


def is_announceable(node: ViewNode) -> bool:
    return _own_or_group_label(node) is not None or bool(_spoken_states(node))


def compose_announcement(node: ViewNode) -> str:
    """Assemble the spoken announcement: state, label, role or collection
    position, then usage hint.

    State flags are followed by a comma; every other segment except the last
    is terminated by a period, so a lone label (static text or a fallback
    identifier) is emitted bare. A node with no label but a spoken state flag
    announces just the state. Raises ``NotAnnounceableError`` for a node with
    nothing to say.
    """
    label = _own_or_group_label(node)
    states = _spoken_states(node)
    if label is None and not states:
        raise NotAnnounceableError(f"node {node.node_id!r} has no label, state, or fallback")

    # (text, terminator) pairs; terminator applies only when a segment follows
    segments: list[tuple[str, str]] = []
    for word in states:
        segments.append((word, ","))
    if label is not None:
        segments.append((label, "."))

    if node.collection_info is not None:
        info = node.collection_info
        word = _COLLECTION_WORDS[info.kind]
        role_phrase = _ROLE_PHRASES[node.class_role]
        # avoid "Tab. Tab 1 of 4" when the role word repeats the collection word
        if role_phrase and role_phrase != word:
            segments.append((role_phrase, "."))
        segments.append((f"{word} {info.position} of {info.total}", "."))
    else:
        role_phrase = _ROLE_PHRASES[node.class_role]
        if role_phrase:
            segments.append((role_phrase, "."))

    if NodeState.DISABLED not in node.state:
        if node.is_clickable:
            segments.append((CLICK_HINT, "."))
        if node.is_long_clickable:
            segments.append((LONG_CLICK_HINT, "."))

    parts: list[str] = []
    for i, (text, terminator) in enumerate(segments):
        last = i == len(segments) - 1
        if not last and not text.endswith((".", ",", "!", "?")):
            text += terminator
        parts.append(text)
    return " ".join(parts)


def _focus_targets(root: ViewNode) -> list[ViewNode]:
    """Focusable announce targets of one snapshot tree, in reading order.

    A focusable node consumes its subtree (descendants are spoken as part of
    its group announcement, never focused separately). Containers and leaves
    with nothing to say are skipped; skipped containers still expose their
    children.
    """
    targets: list[tuple[int, ViewNode]] = []
    counter = 0

    def walk(node: ViewNode) -> None:
        nonlocal counter
        order = counter
        counter += 1
        if node.is_focusable_by_screen_reader and is_announceable(node):
            targets.append((order, node))
            return
        for child in node.children:
            walk(child)

    walk(root)

    def reading_key(item: tuple[int, ViewNode]) -> tuple[int, int, int]:
        order, node = item
        return (node.bounds.top, node.bounds.left, order)

    default = sorted(
        (t for t in targets if NodeState.FOCUSED_BY_DEFAULT in t[1].state), key=reading_key
    )
    rest = sorted(
        (t for t in targets if NodeState.FOCUSED_BY_DEFAULT not in t[1].state), key=reading_key
    )
    return [node for _, node in default + rest]


def focus_order(capture: ScreenCapture) -> list[ViewNode]:
    """Traversal order for the capture's base tree: the default-focus element
    first, then remaining focusable elements top-to-bottom, left-to-right,
    with remaining ties broken by pre-order position."""
    return _focus_targets(capture.root)


def synthesize(capture: ScreenCapture, cap: int = DEFAULT_TRAVERSAL_CAP) -> Transcript:
    """Simulate a full linear traversal and return the transcript.

    Traversal walks the focus order, stops at the first element that has left
    the visible viewport ("first screen") or after ``cap`` entries, and applies
    recorded change events: when an event fires, focus continues over the
    replacement tree, skipping elements already announced (matched by node_id).
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")

    entries: list[TranscriptEntry] = []
    pending: list[ChangeEvent] = list(capture.events)
    viewport = capture.root.bounds
    targets = _focus_targets(capture.root)
    visited: set[str] = set()
    pos = 0

    def apply_event(event: ChangeEvent) -> None:
        nonlocal targets, pos, viewport
        if event.replacement_root is not None:
            targets = _focus_targets(event.replacement_root)
            viewport = event.replacement_root.bounds
            pos = 0

    while len(entries) < cap:
        if pos >= len(targets):
            if pending:
                apply_event(pending.pop(0))
                continue
            break
        node = targets[pos]
        pos += 1
        if node.node_id in visited:
            continue
        if not node.bounds.intersects(viewport):
            # reading order is top-down: the first off-screen element ends this snapshot
            pos = len(targets)
            continue
        entries.append(
            TranscriptEntry(
                index=len(entries),
                transcript=compose_announcement(node),
                node_id=node.node_id,
                bounds=node.bounds,
            )
        )
        for consumed in node.iter_preorder():
            visited.add(consumed.node_id)
        while pending and pending[0].after_entry_index <= len(entries) - 1:
            apply_event(pending.pop(0))

    return Transcript(
        app_name=capture.app_name, screen_id=capture.screen_id, entries=tuple(entries)
    )


def associate(
    transcript: Transcript,
    capture: ScreenCapture,
    threshold: float = DEFAULT_ASSOCIATION_THRESHOLD,
) -> dict[int, str | None]:
    """Map each entry index to the capture node whose bounds best overlap it.

    The winner is the node maximizing intersection-over-union with the entry
    bounds; overlaps under ``threshold`` leave the entry unassociated (None).
    """
    nodes = list(capture.iter_nodes())
    mapping: dict[int, str | None] = {}
    for entry in transcript.entries:
        best_id: str | None = None
        best_score = 0.0
        for node in nodes:
            score = iou(entry.bounds, node.bounds)
            if score > best_score:
                best_score = score
                best_id = node.node_id
        mapping[entry.index] = best_id if best_score >= threshold else None
    return mapping


def transcript_to_json(transcript: Transcript) -> str:
    doc = {
        "app": transcript.app_name,
        "screen_id": transcript.screen_id,
        "entries": [
            {
                "index": entry.index,
                "transcript": entry.transcript,
                "node_id": entry.node_id,
                "bounds": entry.bounds.to_json(),
            }
            for entry in transcript.entries
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def transcript_from_json(raw: bytes | str) -> Transcript:
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8")
    doc = json.loads(raw)
    entries = tuple(
        TranscriptEntry(
            index=item["index"],
            transcript=item["transcript"],
            node_id=item["node_id"],
            bounds=BoundingBox(**item["bounds"]),
        )
        for item in doc["entries"]
    )
    return Transcript(app_name=doc["app"], screen_id=doc["screen_id"], entries=entries)


def iter_entry_nodes(transcript: Transcript, capture: ScreenCapture) -> Iterator[tuple[TranscriptEntry, ViewNode | None]]:
    by_id = {node.node_id: node for node in capture.iter_nodes()}
    for entry in transcript.entries:
        yield entry, by_id.get(entry.node_id)
