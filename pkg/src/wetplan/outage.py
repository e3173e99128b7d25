"""Monte Carlo estimation of ambient-harvesting outage versus transmitter density.

Each trial owns a seed derived from (scenario seed, trial index), so estimates
are reproducible and independent of execution order or worker count. Density
sweeps derive per-density sub-seeds from the density value itself, so
duplicate densities produce identical results.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import ArrayConfig, PathLossParams, Position2D, RicianParams, sample_channels, sample_hppp
from .harvesting import ARCHITECTURES, HarvesterCurve, dft_codebook, harvest_architecture

__all__ = [
    "OutageConfig",
    "OutageResult",
    "field_harvest",
    "run_trial",
    "run_outage",
    "sweep_density",
]


@dataclass(frozen=True)
class OutageConfig:
    """One Monte Carlo scenario: a device at the disk center harvesting from a
    Poisson field of ambient transmitters."""

    density: float
    disk_radius: float = 10.0
    tx_power: float = 1.0
    pathloss: PathLossParams = PathLossParams(exponent=2.7, fixed_loss_db=40.0, reference_distance=1.0)
    rician: RicianParams = RicianParams(10.0)
    target: float = 1e-3
    arch: str = "single"
    n_antennas: int = 1
    curve: HarvesterCurve = HarvesterCurve()
    trials: int = 10_000
    seed: int = 0

    def __post_init__(self):
        if self.density < 0:
            raise ValueError(f"density must be >= 0, got {self.density}")
        if self.disk_radius <= 0:
            raise ValueError(f"disk_radius must be > 0, got {self.disk_radius}")
        if self.tx_power <= 0:
            raise ValueError(f"tx_power must be > 0, got {self.tx_power}")
        if self.target <= 0:
            raise ValueError(f"target must be > 0, got {self.target}")
        if self.arch not in ARCHITECTURES:
            raise ValueError(f"unknown architecture {self.arch!r}; expected one of {ARCHITECTURES}")
        if self.n_antennas < 1:
            raise ValueError(f"n_antennas must be >= 1, got {self.n_antennas}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.seed < 0:
            raise ValueError(f"seed must be >= 0, got {self.seed}")


@dataclass(frozen=True)
class OutageResult:
    outage_estimate: float
    ci95_halfwidth: float
    trials: int
    mean_harvested: float


def field_harvest(config: OutageConfig, positions, seed) -> float:
    """Harvested power (W) for a fixed transmitter layout around the device."""
    pts = np.asarray(positions, dtype=float).reshape(-1, 2)
    if pts.shape[0] == 0:
        return 0.0
    h = sample_channels(
        pts,
        Position2D(0.0, 0.0),
        ArrayConfig(config.n_antennas),
        config.rician,
        config.pathloss,
        seed,
    )
    codebook = dft_codebook(config.n_antennas) if config.arch == "rf" else None
    return harvest_architecture((h, config.tx_power), config.arch, config.curve, codebook)


def trial_seed(seed: int, index: int) -> np.random.SeedSequence:
    """Counter-based per-trial seed; pure function of (seed, trial index)."""
    return np.random.SeedSequence([int(seed), int(index)])


def run_trial(config: OutageConfig, seed) -> float:
    """One Monte Carlo draw: sample the field, then the channels, then rectify."""
    rng = np.random.default_rng(seed)
    positions = sample_hppp(config.density, config.disk_radius, rng)
    return field_harvest(config, positions, rng)


def _run_range(config: OutageConfig, lo: int, hi: int, out: np.ndarray) -> None:
    for t in range(lo, hi):
        out[t] = run_trial(config, trial_seed(config.seed, t))


def run_outage(config: OutageConfig, workers: int = 1) -> OutageResult:
    """Estimate the probability that harvested power misses the target.

    The result is bit-identical for any ``workers`` value: every trial owns a
    counter-based seed and results aggregate by trial index.
    """
    n = config.trials
    harvested = np.empty(n)
    if workers <= 1:
        _run_range(config, 0, n, harvested)
    else:
        chunk = math.ceil(n / workers)
        bounds = [(lo, min(lo + chunk, n)) for lo in range(0, n, chunk)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_range, config, lo, hi, harvested) for lo, hi in bounds]
            for f in futures:
                f.result()
    p_hat = float(np.mean(harvested < config.target))
    half = 1.96 * math.sqrt(p_hat * (1.0 - p_hat) / n)
    return OutageResult(p_hat, half, n, float(np.mean(harvested)))


def _density_seed(seed: int, density: float) -> int:
    bits = int(np.float64(density).view(np.uint64))
    return int(np.random.SeedSequence([int(seed), bits]).generate_state(1, dtype=np.uint64)[0])


def sweep_density(config: OutageConfig, densities, workers: int = 1) -> list[OutageResult]:
    """Run the outage estimator once per density, in input order.

    Sub-seeds derive from each density's value, so repeated entries give
    identical results.
    """
    values = list(densities)
    if not values:
        raise ValueError("density list must be non-empty")
    results = []
    for d in values:
        sub = dataclasses.replace(config, density=float(d), seed=_density_seed(config.seed, float(d)))
        results.append(run_outage(sub, workers=workers))
    return results
