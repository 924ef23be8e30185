"""Shared builders and fixture paths for the test suite."""

from __future__ import annotations

from pathlib import Path

import pytest

from talkaudit.capture import (
    CollectionInfo,
    CollectionKind,
    NodeRole,
    NodeState,
    ScreenCapture,
    ViewNode,
    parse_capture,
)
from talkaudit.geometry import BoundingBox

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
CAPTURE_DIR = FIXTURES / "captures"
MOCK_DIR = FIXTURES / "mock_completions"
GROUND_TRUTH_DIR = FIXTURES / "ground_truth"
VERDICTS_DIR = FIXTURES / "verdicts"

FIXTURE_SCREENS = ["amazon_music_home", "united_booking", "traintime_schedule"]


def bb(left: int, top: int, right: int, bottom: int) -> BoundingBox:
    return BoundingBox(left, top, right, bottom)


def make_node(
    node_id: str,
    role: NodeRole | str = NodeRole.TEXT,
    bounds: tuple[int, int, int, int] = (0, 0, 100, 50),
    text: str | None = None,
    content_description: str | None = None,
    resource_id: str | None = None,
    state: frozenset[NodeState] | set[NodeState] = frozenset(),
    clickable: bool = False,
    long_clickable: bool = False,
    focusable: bool = True,
    collection: tuple[int, int, CollectionKind] | None = None,
    children: list[ViewNode] | None = None,
) -> ViewNode:
    return ViewNode(
        node_id=node_id,
        class_role=NodeRole(role),
        bounds=BoundingBox(*bounds),
        text=text,
        content_description=content_description,
        resource_id=resource_id,
        state=frozenset(state),
        is_clickable=clickable,
        is_long_clickable=long_clickable,
        is_focusable_by_screen_reader=focusable,
        collection_info=CollectionInfo(*collection) if collection else None,
        children=list(children or []),
    )


def make_capture(
    children: list[ViewNode],
    screen_id: str = "screen-1",
    app_name: str = "Test App",
    root_bounds: tuple[int, int, int, int] = (0, 0, 1000, 2000),
    events=(),
) -> ScreenCapture:
    root = ViewNode(
        node_id="root",
        class_role=NodeRole.CONTAINER,
        bounds=BoundingBox(*root_bounds),
        is_focusable_by_screen_reader=False,
        children=list(children),
    )
    return ScreenCapture(
        app_name=app_name, screen_id=screen_id, root=root, events=list(events)
    )


def load_fixture_capture(name: str) -> ScreenCapture:
    return parse_capture((CAPTURE_DIR / f"{name}.capture.json").read_bytes())


@pytest.fixture
def amazon_capture() -> ScreenCapture:
    return load_fixture_capture("amazon_music_home")


@pytest.fixture
def united_capture() -> ScreenCapture:
    return load_fixture_capture("united_booking")


@pytest.fixture
def traintime_capture() -> ScreenCapture:
    return load_fixture_capture("traintime_schedule")
