"""Domain types shared by every other module.

Angle convention used throughout the package: angles are in degrees,
measured from straight-ahead, and positive values lie to the LEFT of
straight-ahead. All types here are immutable value objects and safe to
share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Union


class SimplifiedDirection(IntEnum):
    """One of the five guidance instructions, ordered right to left.

    The integer value is the ordinal: larger angle (further left) means
    larger ordinal, so quantization is monotone in the angle.
    """

    SHARP_RIGHT = 0
    SLIGHT_RIGHT = 1
    STRAIGHT = 2
    SLIGHT_LEFT = 3
    SHARP_LEFT = 4

    @property
    def token(self) -> str:
        """Wire token, e.g. ``"slight_left"``."""
        return self.name.lower()

    @classmethod
    def from_token(cls, token: str) -> "SimplifiedDirection":
        try:
            return cls[token.upper()]
        except KeyError:
            raise ValueError(
                f"unknown direction token {token!r}; expected one of "
                f"{[d.token for d in cls]}"
            ) from None


def ordinal_distance(a: SimplifiedDirection, b: SimplifiedDirection) -> int:
    """Level deviation between two instructions on the 5-point scale (0-4)."""
    return abs(int(a) - int(b))


@dataclass(frozen=True)
class DirectionAngle:
    """Signed heading offset in degrees, positive to the left.

    Construction rejects non-finite values and anything outside
    [-90, +90]; out-of-range data must be handled (clamped, reported)
    before it becomes a DirectionAngle.
    """

    degrees: float

    def __post_init__(self):
        if isinstance(self.degrees, (str, bool)):
            raise TypeError(f"direction angle must be a number, got {self.degrees!r}")
        object.__setattr__(self, "degrees", float(self.degrees))
        if not math.isfinite(self.degrees):
            raise ValueError(f"direction angle must be finite, got {self.degrees!r}")
        if not -90.0 <= self.degrees <= 90.0:
            raise ValueError(
                f"direction angle must be within [-90, 90] degrees, got {self.degrees}"
            )

    def __float__(self) -> float:
        return self.degrees


AngleLike = Union[DirectionAngle, float, int]


def as_degrees(angle: AngleLike) -> float:
    """Coerce an angle (DirectionAngle or bare number) to validated degrees."""
    if isinstance(angle, DirectionAngle):
        return angle.degrees
    return DirectionAngle(angle).degrees


@dataclass(frozen=True)
class AngleDeviation:
    """Absolute difference between two direction angles, in degrees."""

    degrees: float

    def __post_init__(self):
        object.__setattr__(self, "degrees", float(self.degrees))
        if not math.isfinite(self.degrees) or not 0.0 <= self.degrees <= 180.0:
            raise ValueError(f"angle deviation must be in [0, 180], got {self.degrees!r}")

    def __float__(self) -> float:
        return self.degrees


@dataclass(frozen=True)
class Accuracy:
    """Soft score in [0, 1]; 1 means the decision sits inside its reference range."""

    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        if not math.isfinite(self.value) or not 0.0 <= self.value <= 1.0:
            raise ValueError(f"accuracy must be in [0, 1], got {self.value!r}")

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class Roi:
    """Axis-aligned rectangle in pixel coordinates, origin at the image top-left."""

    x: float
    y: float
    width: float
    height: float

    def __post_init__(self):
        for name in ("x", "y", "width", "height"):
            object.__setattr__(self, name, float(getattr(self, name)))
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"roi {name} must be finite")
        if self.width <= 0 or self.height <= 0:
            raise ValueError(
                f"roi must have positive size, got {self.width} x {self.height}"
            )

    @property
    def centroid(self) -> tuple[float, float]:
        return (self.x + self.width / 2.0, self.y + self.height / 2.0)

    def inside(self, frame_width: float, frame_height: float) -> bool:
        """True when the rectangle lies entirely within the frame bounds."""
        return (
            self.x >= 0
            and self.y >= 0
            and self.x + self.width <= frame_width
            and self.y + self.height <= frame_height
        )


@dataclass(frozen=True)
class VideoFrameRef:
    """A frame identified inside a video file rather than a standalone image."""

    path: str
    frame_index: int

    def __post_init__(self):
        if self.frame_index < 0:
            raise ValueError("frame_index must be >= 0")


@dataclass(frozen=True)
class FrameRecord:
    """Metadata for one evaluatable frame. Pixel data stays on disk."""

    frame_id: str
    source: Union[str, VideoFrameRef]
    width: int
    height: int
    scene_kind: str = ""

    def __post_init__(self):
        if not self.frame_id:
            raise ValueError("frame_id must be non-empty")
        if self.width <= 0 or self.height <= 0:
            raise ValueError(
                f"frame {self.frame_id!r} must have positive dimensions, "
                f"got {self.width} x {self.height}"
            )

    @property
    def source_path(self) -> str:
        return self.source.path if isinstance(self.source, VideoFrameRef) else self.source
