"""Gaussian-mixture ambient power fields and the resulting capped transmit power.

A beacon parked at a position converts whatever ambient power is available
there into transmit power, up to its hardware cap; conversion is lossless up
to the cap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import Position2D, positions_to_array

__all__ = [
    "Rect",
    "GaussianComponent",
    "AmbientMap",
    "ambient_power",
    "ambient_power_xy",
    "transmit_power",
    "transmit_power_xy",
    "example_map",
]


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle in meters."""

    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self):
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError(
                f"rectangle must have positive extent, got x [{self.x_min}, {self.x_max}], "
                f"y [{self.y_min}, {self.y_max}]"
            )

    def contains(self, x: float, y: float) -> bool:
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max

    def clamp(self, xy: np.ndarray) -> np.ndarray:
        """Clamp an (n, 2) array of points into the rectangle."""
        out = np.array(xy, dtype=float, copy=True).reshape(-1, 2)
        out[:, 0] = np.clip(out[:, 0], self.x_min, self.x_max)
        out[:, 1] = np.clip(out[:, 1], self.y_min, self.y_max)
        return out


@dataclass(frozen=True)
class GaussianComponent:
    """One ambient hot spot: peak available power (W), center, isotropic width (m)."""

    weight: float
    center: Position2D
    width: float

    def __post_init__(self):
        if self.weight < 0:
            raise ValueError(f"weight must be >= 0, got {self.weight}")
        if self.width <= 0:
            raise ValueError(f"width must be > 0, got {self.width}")


@dataclass(frozen=True)
class AmbientMap:
    """Average ambient power over an area as a sum of Gaussian components."""

    components: tuple[GaussianComponent, ...]
    area: Rect

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise ValueError("ambient map needs at least one component")


def ambient_power_xy(amap: AmbientMap, xy, validate: bool = True) -> np.ndarray:
    """Vectorized ambient power (W) at each row of ``xy``."""
    pts = positions_to_array(xy)
    if validate:
        a = amap.area
        inside = (
            (pts[:, 0] >= a.x_min)
            & (pts[:, 0] <= a.x_max)
            & (pts[:, 1] >= a.y_min)
            & (pts[:, 1] <= a.y_max)
        )
        if not np.all(inside):
            bad = pts[~inside][0]
            raise ValueError(f"position ({bad[0]}, {bad[1]}) lies outside the map area")
    total = np.zeros(pts.shape[0])
    for c in amap.components:
        d2 = (pts[:, 0] - c.center.x) ** 2 + (pts[:, 1] - c.center.y) ** 2
        total += c.weight * np.exp(-d2 / (2.0 * c.width**2))
    return total


def ambient_power(amap: AmbientMap, pos) -> float:
    """Average ambient power (W) available at ``pos``; errors outside the area."""
    return float(ambient_power_xy(amap, [pos])[0])


def transmit_power(amap: AmbientMap, pos, cap: float) -> float:
    """Ambient-limited transmit power: the local ambient power clipped at ``cap``."""
    if cap <= 0:
        raise ValueError(f"cap must be > 0, got {cap}")
    return min(ambient_power(amap, pos), cap)


def transmit_power_xy(amap: AmbientMap, xy, cap: float, validate: bool = True) -> np.ndarray:
    if cap <= 0:
        raise ValueError(f"cap must be > 0, got {cap}")
    return np.minimum(ambient_power_xy(amap, xy, validate=validate), cap)


def example_map() -> AmbientMap:
    """A 40x40 m example field with four ambient sources of watt-scale peaks.

    This map ships as the default scenario for the deployment experiment; the
    peaks sit away from the area center so placement has to trade proximity to
    devices against available ambient energy.
    """
    return AmbientMap(
        components=(
            GaussianComponent(4.0, Position2D(-12.0, 10.0), 4.0),
            GaussianComponent(3.0, Position2D(8.0, 14.0), 5.0),
            GaussianComponent(2.5, Position2D(12.0, -8.0), 4.0),
            GaussianComponent(1.5, Position2D(-6.0, -14.0), 6.0),
        ),
        area=Rect(-20.0, -20.0, 20.0, 20.0),
    )
