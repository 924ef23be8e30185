"""Capture file model: a serialized screen snapshot with view hierarchy and accessibility metadata.

The on-disk format is a UTF-8 JSON document (``*.capture.json``) with top-level
keys ``format_version`` (must be 1), ``app_name``, ``screen_id``, ``screenshot``
(optional file reference), ``root`` (the view tree), and ``events`` (dynamic
changes observed during traversal). Node objects use exactly the ``ViewNode``
field names in snake_case. Optional node keys may be omitted on input; the
serializer always writes the full canonical form, so ``parse`` after
``serialize`` reproduces the capture exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterator

from .geometry import BoundingBox


class NodeRole(str, Enum):
    BUTTON = "button"
    IMAGE = "image"
    TEXT = "text"
    TAB = "tab"
    CHECKBOX = "checkbox"
    EDIT_FIELD = "edit-field"
    HEADING = "heading"
    LIST_ITEM = "list-item"
    CONTAINER = "container"
    OTHER = "other"


class NodeState(str, Enum):
    SELECTED = "selected"
    CHECKED = "checked"
    DISABLED = "disabled"
    FOCUSED_BY_DEFAULT = "focused-by-default"


class CollectionKind(str, Enum):
    TAB = "tab"
    LIST = "list"
    GRID = "grid"


class ChangeKind(str, Enum):
    SCROLLED = "scrolled"
    CONTENT_CHANGED = "content-changed"


class CaptureError(Exception):
    """Base class for capture parsing failures."""


class CaptureSyntaxError(CaptureError):
    """Input is not well-formed JSON; carries the offending position."""

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class CaptureSchemaError(CaptureError):
    """Input is JSON but violates the capture schema; carries field and reason."""

    def __init__(self, fieldname: str, reason: str) -> None:
        super().__init__(f"{fieldname}: {reason}")
        self.field = fieldname
        self.reason = reason


class DuplicateNodeIdError(CaptureError):
    def __init__(self, node_id: str) -> None:
        super().__init__(f"duplicate node_id {node_id!r}")
        self.node_id = node_id


@dataclass(frozen=True)
class CollectionInfo:
    position: int  # 1-based
    total: int
    kind: CollectionKind

    def __post_init__(self) -> None:
        if not 1 <= self.position <= self.total:
            raise ValueError(f"collection position {self.position} outside [1, {self.total}]")


@dataclass
class ViewNode:
    node_id: str
    class_role: NodeRole
    bounds: BoundingBox
    text: str | None = None
    content_description: str | None = None
    resource_id: str | None = None
    state: frozenset[NodeState] = frozenset()
    is_clickable: bool = False
    is_long_clickable: bool = False
    is_focusable_by_screen_reader: bool = False
    collection_info: CollectionInfo | None = None
    children: list["ViewNode"] = field(default_factory=list)

    @property
    def is_pure_container(self) -> bool:
        """A node with children and no text or content description of its own."""
        return bool(self.children) and self.text is None and self.content_description is None

    def iter_preorder(self) -> Iterator["ViewNode"]:
        yield self
        for child in self.children:
            yield from child.iter_preorder()


@dataclass
class ChangeEvent:
    kind: ChangeKind
    after_entry_index: int
    replacement_root: ViewNode | None = None

    def __post_init__(self) -> None:
        if self.after_entry_index < 0:
            raise ValueError("after_entry_index must be >= 0")


@dataclass
class ScreenCapture:
    app_name: str
    screen_id: str
    root: ViewNode
    screenshot_path: str | None = None
    events: list[ChangeEvent] = field(default_factory=list)

    def iter_nodes(self) -> Iterator[ViewNode]:
        """All nodes of the base tree followed by every replacement tree."""
        yield from self.root.iter_preorder()
        for event in self.events:
            if event.replacement_root is not None:
                yield from event.replacement_root.iter_preorder()

    def find_node(self, node_id: str) -> ViewNode | None:
        for node in self.iter_nodes():
            if node.node_id == node_id:
                return node
        return None


FORMAT_VERSION = 1

_NODE_KEYS = {
    "node_id",
    "class_role",
    "text",
    "content_description",
    "resource_id",
    "bounds",
    "state",
    "is_clickable",
    "is_long_clickable",
    "is_focusable_by_screen_reader",
    "collection_info",
    "children",
}

_TOP_KEYS = {"format_version", "app_name", "screen_id", "screenshot", "root", "events"}


def _expect(value: Any, types: type | tuple, fieldname: str, what: str) -> Any:
    if not isinstance(value, types) or isinstance(value, bool) and types is int:
        raise CaptureSchemaError(fieldname, f"expected {what}, got {type(value).__name__}")
    return value


def _parse_bounds(raw: Any, fieldname: str) -> BoundingBox:
    if not isinstance(raw, dict):
        raise CaptureSchemaError(fieldname, "bounds must be an object with left/top/right/bottom")
    coords = {}
    for key in ("left", "top", "right", "bottom"):
        if key not in raw:
            raise CaptureSchemaError(f"{fieldname}.{key}", "missing coordinate")
        value = raw[key]
        if not isinstance(value, int) or isinstance(value, bool):
            raise CaptureSchemaError(f"{fieldname}.{key}", "coordinate must be an integer")
        coords[key] = value
    extra = set(raw) - {"left", "top", "right", "bottom"}
    if extra:
        raise CaptureSchemaError(fieldname, f"unknown bounds keys {sorted(extra)}")
    try:
        return BoundingBox(**coords)
    except ValueError as exc:
        raise CaptureSchemaError(fieldname, str(exc)) from exc


def _parse_node(raw: Any, fieldname: str, seen_ids: set[str]) -> ViewNode:
    if not isinstance(raw, dict):
        raise CaptureSchemaError(fieldname, "node must be an object")
    extra = set(raw) - _NODE_KEYS
    if extra:
        raise CaptureSchemaError(fieldname, f"unknown node keys {sorted(extra)}")
    for required in ("node_id", "class_role", "bounds"):
        if required not in raw:
            raise CaptureSchemaError(f"{fieldname}.{required}", "missing required key")

    node_id = _expect(raw["node_id"], str, f"{fieldname}.node_id", "string")
    if not node_id:
        raise CaptureSchemaError(f"{fieldname}.node_id", "must be non-empty")
    if node_id in seen_ids:
        raise DuplicateNodeIdError(node_id)
    seen_ids.add(node_id)

    try:
        role = NodeRole(_expect(raw["class_role"], str, f"{fieldname}.class_role", "string"))
    except ValueError:
        raise CaptureSchemaError(
            f"{fieldname}.class_role",
            f"unknown role {raw['class_role']!r}; expected one of {[r.value for r in NodeRole]}",
        ) from None

    bounds = _parse_bounds(raw["bounds"], f"{fieldname}.bounds")

    def _opt_str(key: str) -> str | None:
        value = raw.get(key)
        if value is None:
            return None
        return _expect(value, str, f"{fieldname}.{key}", "string or null")

    states: set[NodeState] = set()
    for i, flag in enumerate(_expect(raw.get("state", []), list, f"{fieldname}.state", "list")):
        try:
            states.add(NodeState(_expect(flag, str, f"{fieldname}.state[{i}]", "string")))
        except ValueError:
            raise CaptureSchemaError(
                f"{fieldname}.state[{i}]", f"unknown state flag {flag!r}"
            ) from None

    def _flag(key: str) -> bool:
        value = raw.get(key, False)
        if not isinstance(value, bool):
            raise CaptureSchemaError(f"{fieldname}.{key}", "must be a boolean")
        return value

    collection = None
    if raw.get("collection_info") is not None:
        ci = raw["collection_info"]
        if not isinstance(ci, dict) or set(ci) != {"position", "total", "kind"}:
            raise CaptureSchemaError(
                f"{fieldname}.collection_info", "must be an object with position/total/kind"
            )
        try:
            kind = CollectionKind(ci["kind"])
        except ValueError:
            raise CaptureSchemaError(
                f"{fieldname}.collection_info.kind", f"unknown kind {ci['kind']!r}"
            ) from None
        position = _expect(ci["position"], int, f"{fieldname}.collection_info.position", "integer")
        total = _expect(ci["total"], int, f"{fieldname}.collection_info.total", "integer")
        try:
            collection = CollectionInfo(position=position, total=total, kind=kind)
        except ValueError as exc:
            raise CaptureSchemaError(f"{fieldname}.collection_info", str(exc)) from exc

    children_raw = _expect(raw.get("children", []), list, f"{fieldname}.children", "list")
    children = [
        _parse_node(child, f"{fieldname}.children[{i}]", seen_ids)
        for i, child in enumerate(children_raw)
    ]

    return ViewNode(
        node_id=node_id,
        class_role=role,
        bounds=bounds,
        text=_opt_str("text"),
        content_description=_opt_str("content_description"),
        resource_id=_opt_str("resource_id"),
        state=frozenset(states),
        is_clickable=_flag("is_clickable"),
        is_long_clickable=_flag("is_long_clickable"),
        is_focusable_by_screen_reader=_flag("is_focusable_by_screen_reader"),
        collection_info=collection,
        children=children,
    )


def parse_capture(raw: bytes | str) -> ScreenCapture:
    """Parse and validate a capture document.

    Raises ``CaptureSyntaxError`` for malformed JSON (with position),
    ``CaptureSchemaError`` for schema violations (with field and reason), and
    ``DuplicateNodeIdError`` when two nodes share a ``node_id``.
    """
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise CaptureSyntaxError(exc.msg, exc.lineno, exc.colno) from exc

    if not isinstance(doc, dict):
        raise CaptureSchemaError("<document>", "top level must be an object")
    extra = set(doc) - _TOP_KEYS
    if extra:
        raise CaptureSchemaError("<document>", f"unknown top-level keys {sorted(extra)}")

    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise CaptureSchemaError(
            "format_version", f"unsupported version {version!r}; this reader handles {FORMAT_VERSION}"
        )

    for required in ("app_name", "screen_id", "root"):
        if required not in doc:
            raise CaptureSchemaError(required, "missing required key")
    app_name = _expect(doc["app_name"], str, "app_name", "string")
    screen_id = _expect(doc["screen_id"], str, "screen_id", "string")
    if not screen_id:
        raise CaptureSchemaError("screen_id", "must be non-empty")

    screenshot = doc.get("screenshot")
    if screenshot is not None:
        screenshot = _expect(screenshot, str, "screenshot", "string or null")

    seen_ids: set[str] = set()
    root = _parse_node(doc["root"], "root", seen_ids)

    events: list[ChangeEvent] = []
    for i, raw_event in enumerate(_expect(doc.get("events", []), list, "events", "list")):
        fieldname = f"events[{i}]"
        if not isinstance(raw_event, dict):
            raise CaptureSchemaError(fieldname, "event must be an object")
        extra = set(raw_event) - {"kind", "after_entry_index", "replacement_root"}
        if extra:
            raise CaptureSchemaError(fieldname, f"unknown event keys {sorted(extra)}")
        try:
            kind = ChangeKind(raw_event.get("kind"))
        except ValueError:
            raise CaptureSchemaError(
                f"{fieldname}.kind",
                f"unknown kind {raw_event.get('kind')!r}; expected scrolled or content-changed",
            ) from None
        index = _expect(
            raw_event.get("after_entry_index"), int, f"{fieldname}.after_entry_index", "integer"
        )
        replacement = None
        if raw_event.get("replacement_root") is not None:
            # A replacement tree is a fresh snapshot of the same screen: elements
            # that stayed on screen keep their node_id, which is how traversal
            # knows what was already announced. Uniqueness is per snapshot tree.
            replacement = _parse_node(
                raw_event["replacement_root"], f"{fieldname}.replacement_root", set()
            )
        try:
            events.append(
                ChangeEvent(kind=kind, after_entry_index=index, replacement_root=replacement)
            )
        except ValueError as exc:
            raise CaptureSchemaError(f"{fieldname}.after_entry_index", str(exc)) from exc

    return ScreenCapture(
        app_name=app_name,
        screen_id=screen_id,
        root=root,
        screenshot_path=screenshot,
        events=events,
    )


def _node_to_json(node: ViewNode) -> dict:
    return {
        "node_id": node.node_id,
        "class_role": node.class_role.value,
        "text": node.text,
        "content_description": node.content_description,
        "resource_id": node.resource_id,
        "bounds": node.bounds.to_json(),
        "state": sorted(flag.value for flag in node.state),
        "is_clickable": node.is_clickable,
        "is_long_clickable": node.is_long_clickable,
        "is_focusable_by_screen_reader": node.is_focusable_by_screen_reader,
        "collection_info": (
            None
            if node.collection_info is None
            else {
                "position": node.collection_info.position,
                "total": node.collection_info.total,
                "kind": node.collection_info.kind.value,
            }
        ),
        "children": [_node_to_json(child) for child in node.children],
    }


def serialize_capture(capture: ScreenCapture) -> str:
    """Canonical JSON form; ``parse_capture`` of the result reproduces the input exactly."""
    doc = {
        "format_version": FORMAT_VERSION,
        "app_name": capture.app_name,
        "screen_id": capture.screen_id,
        "screenshot": capture.screenshot_path,
        "root": _node_to_json(capture.root),
        "events": [
            {
                "kind": event.kind.value,
                "after_entry_index": event.after_entry_index,
                "replacement_root": (
                    None
                    if event.replacement_root is None
                    else _node_to_json(event.replacement_root)
                ),
            }
            for event in capture.events
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


@dataclass(frozen=True)
class ValidationDiagnostic:
    kind: str  # duplicate-screen-id | clipped-bounds | empty-tree | clickable-not-focusable
    screen_id: str
    message: str
    node_id: str | None = None


def validate_corpus(captures: list[ScreenCapture]) -> list[ValidationDiagnostic]:
    """Cross-capture sanity checks. Diagnostics are data, not failures; a clean corpus yields []."""
    diagnostics: list[ValidationDiagnostic] = []

    seen: dict[str, int] = {}
    for capture in captures:
        seen[capture.screen_id] = seen.get(capture.screen_id, 0) + 1
    for screen_id, count in seen.items():
        if count > 1:
            diagnostics.append(
                ValidationDiagnostic(
                    kind="duplicate-screen-id",
                    screen_id=screen_id,
                    message=f"screen_id {screen_id!r} appears in {count} captures",
                )
            )

    for capture in captures:
        root_bounds = capture.root.bounds
        has_content = False
        for node in capture.root.iter_preorder():
            if node.is_focusable_by_screen_reader or node.text or node.content_description:
                has_content = True
            if not root_bounds.contains(node.bounds):
                diagnostics.append(
                    ValidationDiagnostic(
                        kind="clipped-bounds",
                        screen_id=capture.screen_id,
                        node_id=node.node_id,
                        message=(
                            f"node {node.node_id!r} bounds extend outside the root; "
                            "it will be clipped on screen"
                        ),
                    )
                )
            if node.is_clickable and not node.is_focusable_by_screen_reader:
                diagnostics.append(
                    ValidationDiagnostic(
                        kind="clickable-not-focusable",
                        screen_id=capture.screen_id,
                        node_id=node.node_id,
                        message=(
                            f"node {node.node_id!r} is clickable but cannot receive "
                            "screen reader focus, so it will never be announced"
                        ),
                    )
                )
        if not has_content:
            diagnostics.append(
                ValidationDiagnostic(
                    kind="empty-tree",
                    screen_id=capture.screen_id,
                    message="capture has no focusable or labeled nodes; nothing to announce",
                )
            )

    return diagnostics
