"""Log-distance propagation, Poisson transmitter fields, and Rician ULA channels.

All samplers take an explicit ``seed`` (an int, a ``numpy.random.SeedSequence``,
or a ``Generator``) and are pure functions of their inputs, so draws can be
evaluated in any order or in parallel without changing results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "Position2D",
    "PathLossParams",
    "RicianParams",
    "ArrayConfig",
    "TransmitterField",
    "positions_to_array",
    "path_gain",
    "sample_hppp",
    "steering_vector",
    "sample_channel",
    "sample_channels",
]


@dataclass(frozen=True)
class Position2D:
    """A point in the deployment plane, in meters."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"coordinates must be finite, got ({self.x}, {self.y})")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)


def positions_to_array(positions) -> np.ndarray:
    """Stack positions (``Position2D`` or (x, y) pairs) into an (n, 2) array."""
    if isinstance(positions, np.ndarray):
        arr = np.asarray(positions, dtype=float)
        if arr.ndim == 1 and arr.size == 2:
            arr = arr.reshape(1, 2)
    else:
        rows = []
        for p in positions:
            if isinstance(p, Position2D):
                rows.append((p.x, p.y))
            else:
                rows.append((float(p[0]), float(p[1])))
        arr = np.array(rows, dtype=float).reshape(-1, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected (n, 2) positions, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class PathLossParams:
    """Log-distance path loss: a fixed loss plus a distance power law.

    The power law is clamped below ``reference_distance`` so the model stays
    finite in the near field.
    """

    exponent: float
    fixed_loss_db: float = 0.0
    reference_distance: float = 1.0

    def __post_init__(self):
        if self.exponent <= 0:
            raise ValueError(f"path loss exponent must be > 0, got {self.exponent}")
        if self.reference_distance <= 0:
            raise ValueError(f"reference_distance must be > 0, got {self.reference_distance}")
        if self.fixed_loss_db < 0:
            raise ValueError(f"fixed_loss_db must be >= 0, got {self.fixed_loss_db}")


@dataclass(frozen=True)
class RicianParams:
    """Rician fading with linear K-factor; K=0 is Rayleigh, large K is pure LoS."""

    k_factor: float

    def __post_init__(self):
        if self.k_factor < 0:
            raise ValueError(f"k_factor must be >= 0, got {self.k_factor}")


@dataclass(frozen=True)
class ArrayConfig:
    """Uniform linear array; element spacing is in wavelengths."""

    n_antennas: int
    element_spacing: float = 0.5

    def __post_init__(self):
        if int(self.n_antennas) != self.n_antennas or self.n_antennas < 1:
            raise ValueError(f"n_antennas must be an integer >= 1, got {self.n_antennas}")
        if self.element_spacing <= 0:
            raise ValueError(f"element_spacing must be > 0, got {self.element_spacing}")


@dataclass(frozen=True)
class TransmitterField:
    """Transmitter locations sharing one transmit power level (watts each)."""

    positions: np.ndarray
    tx_power: float

    def __post_init__(self):
        object.__setattr__(self, "positions", positions_to_array(self.positions))
        if self.tx_power <= 0:
            raise ValueError(f"tx_power must be > 0, got {self.tx_power}")


def path_gain(d, params: PathLossParams):
    """Linear power gain at distance ``d`` meters (scalar or array).

    Returns ``10**(-fixed_loss_db/10) * (max(d, d0)/d0)**(-exponent)`` where
    ``d0`` is the reference distance; distances inside ``d0`` evaluate to the
    gain at ``d0``.
    """
    arr = np.asarray(d, dtype=float)
    if np.any(arr < 0):
        raise ValueError("distance must be >= 0")
    fixed = 10.0 ** (-params.fixed_loss_db / 10.0)
    ratio = np.maximum(arr, params.reference_distance) / params.reference_distance
    gain = fixed * ratio ** (-params.exponent)
    if arr.ndim == 0:
        return float(gain)
    return gain


def sample_hppp(density: float, radius: float, seed) -> np.ndarray:
    """Sample transmitter positions from a homogeneous PPP over a disk.

    The count is Poisson with mean ``density * pi * radius**2`` and positions
    are i.i.d. uniform over the disk centered at the origin. Returns an
    (n, 2) array; identical seeds give identical fields.
    """
    if density < 0:
        raise ValueError(f"density must be >= 0, got {density}")
    if radius <= 0:
        raise ValueError(f"radius must be > 0, got {radius}")
    rng = np.random.default_rng(seed)
    n = int(rng.poisson(density * math.pi * radius**2))
    r = radius * np.sqrt(rng.uniform(size=n))
    phi = rng.uniform(0.0, 2.0 * math.pi, size=n)
    return np.column_stack((r * np.cos(phi), r * np.sin(phi)))


def steering_vector(theta: float, array: ArrayConfig) -> np.ndarray:
    """ULA response for a plane wave at angle ``theta`` off broadside.

    Element m carries phase ``2*pi*spacing*m*sin(theta)``; entries have unit
    modulus and element 0 is the phase reference.
    """
    m = np.arange(array.n_antennas)
    return np.exp(2j * math.pi * array.element_spacing * m * np.sin(theta))


def sample_channels(
    sources,
    device,
    array: ArrayConfig,
    rician: RicianParams,
    pathloss: PathLossParams,
    seed,
) -> np.ndarray:
    """Draw one Rician channel vector per source toward a ULA at ``device``.

    Returns an (n_sources, n_antennas) complex array whose rows satisfy
    ``E[|h_m|**2] = path_gain(distance)``. The array axis runs along y so
    broadside faces +x; each source's LoS component is steered to its
    geometric angle ``atan2(dy, dx)`` as seen from the device.
    """
    rng = np.random.default_rng(seed)
    pts = positions_to_array(sources)
    dev = device.as_array() if isinstance(device, Position2D) else np.asarray(device, dtype=float)
    diff = pts - dev.reshape(1, 2)
    dist = np.hypot(diff[:, 0], diff[:, 1])
    theta = np.arctan2(diff[:, 1], diff[:, 0])

    n, m = pts.shape[0], array.n_antennas
    los = np.exp(2j * math.pi * array.element_spacing * np.outer(np.sin(theta), np.arange(m)))
    scatter = (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))) / math.sqrt(2.0)
    k = rician.k_factor
    mix = math.sqrt(k / (k + 1.0)) * los + math.sqrt(1.0 / (k + 1.0)) * scatter
    amp = np.sqrt(path_gain(dist, pathloss))
    return amp[:, None] * mix


def sample_channel(
    source,
    device,
    array: ArrayConfig,
    rician: RicianParams,
    pathloss: PathLossParams,
    seed,
    size: int | None = None,
) -> np.ndarray:
    """Single-link version of :func:`sample_channels`.

    With ``size=None`` returns one (n_antennas,) vector; with an integer
    ``size`` returns (size, n_antennas) i.i.d. fading draws of the same link.
    """
    draws = 1 if size is None else int(size)
    if draws < 1:
        raise ValueError(f"size must be >= 1, got {size}")
    src = positions_to_array([source] if isinstance(source, (Position2D, tuple, list)) else source)
    pts = np.tile(src[:1], (draws, 1))
    h = sample_channels(pts, device, array, rician, pathloss, seed)
    return h[0] if size is None else h
