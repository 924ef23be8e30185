"""Screen-pixel rectangles and the IoU matching used to associate announcements with elements."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned rectangle in screen pixels; edges are inclusive-left, exclusive-right."""

    left: int
    top: int
    right: int
    bottom: int

    def __post_init__(self) -> None:
        if self.left > self.right:
            raise ValueError(f"bounds left {self.left} > right {self.right}")
        if self.top > self.bottom:
            raise ValueError(f"bounds top {self.top} > bottom {self.bottom}")
        if min(self.left, self.top, self.right, self.bottom) < 0:
            raise ValueError("bounds coordinates must be non-negative")

    @property
    def width(self) -> int:
        return self.right - self.left

    @property
    def height(self) -> int:
        return self.bottom - self.top

    @property
    def area(self) -> int:
        return self.width * self.height

    def contains(self, other: "BoundingBox") -> bool:
        return (
            self.left <= other.left
            and self.top <= other.top
            and self.right >= other.right
            and self.bottom >= other.bottom
        )

    def intersects(self, other: "BoundingBox") -> bool:
        """True when the rectangles share screen area.

        Zero-width or zero-height boxes count as intersecting when they fall
        inside the other box; boxes that merely share an edge do not.
        """
        return not (
            self.left >= other.right
            or self.right <= other.left
            or self.top >= other.bottom
            or self.bottom <= other.top
        )

    def translate(self, dx: int, dy: int) -> "BoundingBox":
        return BoundingBox(self.left + dx, self.top + dy, self.right + dx, self.bottom + dy)

    def to_json(self) -> dict:
        return {"left": self.left, "top": self.top, "right": self.right, "bottom": self.bottom}


def intersection_area(a: BoundingBox, b: BoundingBox) -> int:
    w = min(a.right, b.right) - max(a.left, b.left)
    h = min(a.bottom, b.bottom) - max(a.top, b.top)
    if w <= 0 or h <= 0:
        return 0
    return w * h


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection-over-union of two boxes; 0.0 when the union is degenerate."""
    inter = intersection_area(a, b)
    union = a.area + b.area - inter
    if union <= 0:
        return 0.0
    return inter / union
