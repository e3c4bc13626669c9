"""Scoring kernel: angle quantization, deviation, and soft accuracy.

Every direction owns a closed plateau of angles where its accuracy is 1.
Outside the plateau the accuracy decays as a Gaussian of the distance to
the nearest plateau boundary, and drops to 0 once that distance reaches
``ramp_width``. All functions are pure and safe to call concurrently.

Conventions baked into the defaults: positive angles lie left, the
straight plateau is [-20, 20], slight turns plateau between 20 and 50
degrees of turn, sharp turns beyond 50, the decay ramp is 15 degrees
wide with Gaussian coefficient 0.03 per squared degree.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields
from typing import Sequence

import numpy as np

from .core import (
    Accuracy,
    AngleDeviation,
    AngleLike,
    SimplifiedDirection,
    as_degrees,
)
from .errors import ValidationError


@dataclass(frozen=True)
class CriterionConfig:
    """Angular layout of the five instructions plus the decay parameters.

    straight_halfwidth: half-width of the straight plateau, degrees
    slight_outer: where slight turns hand over to sharp turns, degrees
    full_range: outer edge of the instruction fan, degrees
    ramp_width: width of the Gaussian decay band outside a plateau, degrees
    gaussian_k: decay coefficient, 1/degrees^2
    """

    straight_halfwidth: float = 20.0
    slight_outer: float = 50.0
    full_range: float = 90.0
    ramp_width: float = 15.0
    gaussian_k: float = 0.03

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            object.__setattr__(self, f.name, float(value))
            if not math.isfinite(getattr(self, f.name)):
                raise ValidationError(f"{f.name} must be finite")
        if not 0.0 < self.straight_halfwidth < self.slight_outer < self.full_range:
            raise ValidationError(
                "expected 0 < straight_halfwidth < slight_outer < full_range, got "
                f"{self.straight_halfwidth}, {self.slight_outer}, {self.full_range}"
            )
        if self.ramp_width <= 0:
            raise ValidationError("ramp_width must be positive")
        if self.ramp_width > self.slight_outer - self.straight_halfwidth:
            raise ValidationError(
                "ramp_width must not exceed slight_outer - straight_halfwidth "
                f"({self.slight_outer - self.straight_halfwidth})"
            )
        if self.gaussian_k <= 0:
            raise ValidationError("gaussian_k must be positive")

    def plateau(self, direction: SimplifiedDirection) -> tuple[float, float]:
        """Closed plateau interval of a direction, clipped to the angle domain.

        Internally the sharp plateaus are open toward the domain edge, so
        quantization and scoring stay consistent for any configuration; this
        reports them clipped to [-full_range, full_range] for display.
        """
        lo, hi = self._plateau_bounds(direction)
        return (max(lo, -self.full_range), min(hi, self.full_range))

    def _plateau_bounds(self, direction: SimplifiedDirection) -> tuple[float, float]:
        s, o = self.straight_halfwidth, self.slight_outer
        if direction is SimplifiedDirection.SHARP_RIGHT:
            return (-math.inf, -o)
        if direction is SimplifiedDirection.SLIGHT_RIGHT:
            return (-o, -s)
        if direction is SimplifiedDirection.STRAIGHT:
            return (-s, s)
        if direction is SimplifiedDirection.SLIGHT_LEFT:
            return (s, o)
        return (o, math.inf)

    def to_mapping(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_mapping(cls, mapping: dict) -> "CriterionConfig":
        """Build a config from a mapping; absent fields keep their defaults."""
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(mapping) - known)
        if unknown:
            raise ValidationError(
                f"unknown criterion config fields {unknown}; known fields are {sorted(known)}"
            )
        kwargs = {}
        for name, value in mapping.items():
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ValidationError(f"criterion config field {name!r} must be a number")
            kwargs[name] = float(value)
        return cls(**kwargs)


DEFAULT_CONFIG = CriterionConfig()


def load_config(path) -> CriterionConfig:
    """Read a criterion config from a JSON file; absent fields take defaults."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"criterion config {path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ValidationError(f"criterion config {path}: expected a JSON object")
    return CriterionConfig.from_mapping(data)


def quantize(
    alpha: AngleLike, cfg: CriterionConfig = DEFAULT_CONFIG
) -> SimplifiedDirection:
    """Map a direction angle to its instruction.

    Bins ascend half-open, so with defaults: [-90,-50) sharp right,
    [-50,-20) slight right, [-20,20) straight, [20,50) slight left and
    [50,90] sharp left. Shared boundaries go to the upper bin, which keeps
    every quantized angle inside its instruction's closed plateau.
    """
    deg = as_degrees(alpha)
    s, o = cfg.straight_halfwidth, cfg.slight_outer
    if deg < -o:
        return SimplifiedDirection.SHARP_RIGHT
    if deg < -s:
        return SimplifiedDirection.SLIGHT_RIGHT
    if deg < s:
        return SimplifiedDirection.STRAIGHT
    if deg < o:
        return SimplifiedDirection.SLIGHT_LEFT
    return SimplifiedDirection.SHARP_LEFT


def angle_deviation(alpha_a: AngleLike, alpha_b: AngleLike) -> AngleDeviation:
    """Absolute difference between two direction angles, in degrees."""
    return AngleDeviation(abs(as_degrees(alpha_a) - as_degrees(alpha_b)))


def plateau_distance(
    gt: SimplifiedDirection, alpha: AngleLike, cfg: CriterionConfig = DEFAULT_CONFIG
) -> float:
    """Degrees between an angle and the nearest edge of gt's plateau (0 inside)."""
    deg = as_degrees(alpha)
    lo, hi = cfg._plateau_bounds(gt)
    return max(lo - deg, deg - hi, 0.0)


def soft_accuracy(
    gt: SimplifiedDirection, alpha: AngleLike, cfg: CriterionConfig = DEFAULT_CONFIG
) -> Accuracy:
    """Score a predicted angle against a reference instruction.

    1 on the instruction's closed plateau, exp(-gaussian_k * d^2) for a
    plateau distance d inside the open ramp, and exactly 0 once d reaches
    ramp_width.
    """
    d = plateau_distance(gt, alpha, cfg)
    if d <= 0.0:
        return Accuracy(1.0)
    if d >= cfg.ramp_width:
        return Accuracy(0.0)
    return Accuracy(math.exp(-cfg.gaussian_k * d * d))


def soft_accuracy_sweep(
    gt: SimplifiedDirection,
    angles: Sequence[float] | np.ndarray,
    cfg: CriterionConfig = DEFAULT_CONFIG,
) -> np.ndarray:
    """Vectorized soft_accuracy over an array of angles in degrees."""
    deg = np.asarray(angles, dtype=float)
    if deg.size and (not np.all(np.isfinite(deg)) or np.any(np.abs(deg) > 90.0)):
        raise ValidationError("angles must be finite and within [-90, 90] degrees")
    lo, hi = cfg._plateau_bounds(gt)
    d = np.maximum(np.maximum(lo - deg, deg - hi), 0.0)
    return np.where(d < cfg.ramp_width, np.exp(-cfg.gaussian_k * d * d), 0.0)


def curve_angles(step: float) -> list[float]:
    """Sample grid -90, -90+step, ... over the angle domain, always ending at 90."""
    if not 0.0 < step <= 90.0:
        raise ValidationError(f"step must be in (0, 90], got {step}")
    angles = []
    k = 0
    while True:
        a = -90.0 + k * step
        if a >= 90.0 - 1e-12:
            break
        angles.append(a)
        k += 1
    angles.append(90.0)
    return angles


def criterion_curve(
    gt: SimplifiedDirection, step: float, cfg: CriterionConfig = DEFAULT_CONFIG
) -> list[tuple[float, float]]:
    """Sample (angle, accuracy) pairs for one direction across the domain."""
    angles = curve_angles(step)
    values = soft_accuracy_sweep(gt, angles, cfg)
    return list(zip(angles, values.tolist()))
