"""Minimum-power multicast energy precoding and the RF-chain consumption sweep.

The precoder problem (min ||w||^2 s.t. |h_i^H w|^2 >= gamma for every device)
is solved through its semidefinite relaxation with a penalized projected-
gradient scheme (PSD projection via eigenvalue clipping), followed by rank-1
extraction: Gaussian samples of the relaxed solution plus matched-filter and
leading-eigenvector candidates, each rescaled to exact feasibility, cheapest
kept. Beacon consumption follows the linear amplifier + per-chain model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ArrayConfig, PathLossParams, Position2D, RicianParams, sample_channels

__all__ = [
    "MulticastProblem",
    "PrecoderSolution",
    "PrecoderError",
    "ConsumptionPoint",
    "RfChainSweep",
    "ChannelModel",
    "consumption",
    "min_power_precoder",
    "draw_device_positions",
    "sweep_rf_chains",
]


class PrecoderError(RuntimeError):
    """Raised when the relaxation fails to converge; carries the best feasible
    candidate found so far (or None)."""

    def __init__(self, message: str, best: "PrecoderSolution | None" = None):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class MulticastProblem:
    """Device channels (rows, path loss included) and the common power floor."""

    channels: np.ndarray
    gamma: float

    def __post_init__(self):
        h = np.atleast_2d(np.asarray(self.channels, dtype=complex))
        object.__setattr__(self, "channels", h)
        if h.shape[0] < 1 or h.shape[1] < 1:
            raise ValueError("need at least one device channel with one antenna")
        if self.gamma <= 0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        if np.any(np.linalg.norm(h, axis=1) == 0):
            raise ValueError("channels must not contain an all-zero row")

    @property
    def n_devices(self) -> int:
        return self.channels.shape[0]

    @property
    def n_antennas(self) -> int:
        return self.channels.shape[1]


@dataclass(frozen=True)
class PrecoderSolution:
    precoder: np.ndarray
    tx_power: float
    feasible: bool
    sdr_lower_bound: float


@dataclass(frozen=True)
class ConsumptionPoint:
    n_rf: int
    tx_power: float
    total_consumption: float


@dataclass(frozen=True)
class RfChainSweep:
    points: tuple[ConsumptionPoint, ...]
    optimum_n_rf: int


def consumption(tx_power: float, n_rf: int, pa_efficiency: float = 0.35, p_rf: float = 0.5) -> float:
    """Beacon power draw: amplifier input at the given efficiency plus the
    per-RF-chain overhead."""
    if tx_power < 0:
        raise ValueError(f"tx_power must be >= 0, got {tx_power}")
    if not 0.0 < pa_efficiency <= 1.0:
        raise ValueError(f"pa_efficiency must be in (0, 1], got {pa_efficiency}")
    if n_rf < 0 or p_rf < 0:
        raise ValueError("n_rf and p_rf must be >= 0")
    return tx_power / pa_efficiency + n_rf * p_rf


def _margins(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Real quadratic forms u_i^H V u_i for every row of u."""
    return np.real(np.sum((u.conj() @ v) * u, axis=1))


def _psd_project(v: np.ndarray) -> np.ndarray:
    v = 0.5 * (v + v.conj().T)
    w, phi = np.linalg.eigh(v)
    w = np.maximum(w, 0.0)
    return (phi * w) @ phi.conj().T


class _RelaxationState:
    """Best feasibility-scaled primal and best certified dual bound so far."""

    def __init__(self):
        self.primal = math.inf
        self.v_feasible: np.ndarray | None = None
        self.dual = 0.0

    def update(self, hhat: np.ndarray, tau: np.ndarray, v: np.ndarray, rho: float) -> None:
        marg = _margins(hhat, v)
        ratio = float(np.min(marg / tau))
        if ratio > 0:
            primal = float(np.real(np.trace(v))) / ratio
            if primal < self.primal:
                self.primal = primal
                self.v_feasible = v / ratio
        # Any lam >= 0 certifies sum(lam*tau)/lambda_max(sum lam_i a_i a_i^H)
        # as a lower bound on the relaxation value; the penalty gradient
        # supplies multiplier estimates lam_i = 2*rho*shortfall_i.
        lam = 2.0 * rho * np.maximum(0.0, tau - marg)
        if np.any(lam > 0):
            mat = (hhat.T * lam) @ hhat.conj()
            lmax = float(np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))[-1])
            if lmax > 0:
                self.dual = max(self.dual, float(lam @ tau) / lmax)

    def gap_closed(self, tol: float) -> bool:
        return (
            self.dual > 0.0
            and math.isfinite(self.primal)
            and self.primal - self.dual <= tol * self.primal
        )


def _solve_relaxation(
    hhat: np.ndarray, tau: np.ndarray, tol: float, max_outer: int, max_inner: int
) -> tuple[np.ndarray | None, float, float, bool]:
    """min tr(V) s.t. hhat_i^H V hhat_i >= tau_i, V PSD, by penalty + FISTA.

    ``hhat`` rows are unit vectors, ``tau`` lies in (0, 1] with max 1. Returns
    (feasibility-scaled V, primal value, certified dual bound, converged).
    """
    n, m = hhat.shape
    eye = np.eye(m)
    v = np.eye(m, dtype=complex)  # feasible start: margins = 1 >= tau
    state = _RelaxationState()
    rho = 8.0
    for _ in range(max_outer):
        step = 1.0 / (1.0 + 2.0 * rho * n)
        y = v.copy()
        t_mom = 1.0
        for it in range(max_inner):
            shortfall = np.maximum(0.0, tau - _margins(hhat, y))
            grad = eye - 2.0 * rho * (hhat.T * shortfall) @ hhat.conj()
            v_new = _psd_project(y - step * grad)
            # Nesterov momentum with gradient-based restart.
            if np.real(np.vdot(y - v_new, v_new - v)) > 0:
                t_mom = 1.0
                y = v_new
            else:
                t_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t_mom * t_mom))
                y = v_new + ((t_mom - 1.0) / t_next) * (v_new - v)
                t_mom = t_next
            delta = np.linalg.norm(v_new - v) / max(1.0, np.linalg.norm(v))
            v = v_new
            if (it + 1) % 50 == 0:
                state.update(hhat, tau, v, rho)
                if state.gap_closed(tol):
                    return state.v_feasible, state.primal, state.dual, True
            if delta < 1e-11:
                break
        state.update(hhat, tau, v, rho)
        if state.gap_closed(tol):
            return state.v_feasible, state.primal, state.dual, True
        rho *= 10.0
    return state.v_feasible, state.primal, state.dual, False


def _best_candidate(
    hhat: np.ndarray, tau: np.ndarray, v: np.ndarray | None, n_random: int, rng, extra: tuple
) -> tuple[np.ndarray, float] | None:
    """Cheapest candidate direction scaled so min_i margins_i/tau_i = 1.

    Returns (scaled vector, cost) in normalized units; the original transmit
    power is ``cstar * cost``.
    """
    n, m = hhat.shape
    candidates = [hhat]
    if v is not None:
        w_eig, phi = np.linalg.eigh(0.5 * (v + v.conj().T))
        w_eig = np.maximum(w_eig, 0.0)
        z = (rng.standard_normal((n_random, m)) + 1j * rng.standard_normal((n_random, m))) / math.sqrt(2.0)
        candidates.append((z * np.sqrt(w_eig)) @ phi.T)
        candidates.append(phi[:, -1][None, :])
    candidates.extend(np.asarray(e, dtype=complex).reshape(1, -1) for e in extra)
    pool = np.vstack(candidates)

    margins = np.abs(pool @ hhat.conj().T) ** 2  # (n_cand, n_dev)
    worst = (margins / tau[None, :]).min(axis=1)
    norms = np.sum(np.abs(pool) ** 2, axis=1)
    valid = (worst > 0.0) & np.isfinite(worst) & (norms > 0.0)
    if not np.any(valid):
        return None
    cost = np.where(valid, norms / worst, np.inf)
    j = int(np.argmin(cost))
    w = pool[j] / math.sqrt(worst[j])
    return w, float(cost[j])


def min_power_precoder(
    problem: MulticastProblem,
    tol: float = 1e-4,
    n_randomizations: int = 200,
    seed: int = 0,
    max_outer: int = 8,
    max_inner: int = 2000,
    extra_candidates: tuple = (),
) -> PrecoderSolution:
    """Minimum-transmit-power precoder meeting every device's received floor.

    The returned precoder satisfies |h_i^H w|^2 >= gamma exactly at the worst
    device. ``sdr_lower_bound`` is a certified value of the semidefinite
    relaxation's dual, so it lower-bounds every feasible transmit power; the
    solver stops once the relaxation's primal-dual gap closes within ``tol``.
    """
    h = problem.channels
    gamma = problem.gamma
    norms = np.linalg.norm(h, axis=1)
    hhat = h / norms[:, None]
    thresholds = gamma / norms**2  # per-device floor on |hhat_i^H w|^2
    cstar = float(np.max(thresholds))
    tau = thresholds / cstar

    # The optimum is supported on span{h_i}: any orthogonal precoder (or V)
    # component changes no margin and only adds power. Solving in that
    # subspace keeps the SDP at most n_devices-dimensional.
    basis, _ = np.linalg.qr(hhat.T)  # (M, r) orthonormal columns
    reduced = hhat @ basis.conj()  # rows c_i with h_i^H (B y) = c_i^H y

    v, _, dual, converged = _solve_relaxation(reduced, tau, tol, max_outer, max_inner)
    rng = np.random.default_rng(np.random.SeedSequence([int(seed)]))
    extras = tuple(np.asarray(e, dtype=complex).ravel() @ basis.conj() for e in extra_candidates)
    picked = _best_candidate(reduced, tau, v, n_randomizations, rng, extras)

    precoder, tx_power = None, math.inf
    if picked is not None:
        w_norm, cost = picked
        precoder = math.sqrt(cstar) * (basis @ w_norm)
        tx_power = cstar * cost
    if not converged:
        best = None
        if picked is not None:
            best = PrecoderSolution(precoder, tx_power, True, math.nan)
        raise PrecoderError(
            f"relaxation did not converge within {max_outer} outer rounds (tol {tol})", best=best
        )
    if picked is None:
        raise PrecoderError("no feasible rank-1 candidate found", best=None)
    return PrecoderSolution(
        precoder=precoder,
        tx_power=tx_power,
        feasible=True,
        sdr_lower_bound=cstar * dual,
    )


@dataclass(frozen=True)
class ChannelModel:
    """Link model used to draw device channels for the RF-chain sweep."""

    pathloss: PathLossParams = PathLossParams(exponent=2.7, fixed_loss_db=40.0, reference_distance=1.0)
    rician: RicianParams = RicianParams(10.0)
    element_spacing: float = 0.5
    disk_radius: float = 10.0

    def __post_init__(self):
        if self.disk_radius <= 0:
            raise ValueError(f"disk_radius must be > 0, got {self.disk_radius}")


def draw_device_positions(n: int, radius: float, seed) -> list[Position2D]:
    """Uniform device positions in a disk of ``radius`` around the beacon."""
    if n < 1:
        raise ValueError(f"need at least one device, got {n}")
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.uniform(size=n))
    phi = rng.uniform(0.0, 2.0 * math.pi, size=n)
    return [Position2D(float(x), float(y)) for x, y in zip(r * np.cos(phi), r * np.sin(phi))]


def sweep_rf_chains(
    devices,
    gamma: float,
    m_values,
    model: ChannelModel | None = None,
    seed: int = 0,
    pa_efficiency: float = 0.35,
    p_rf: float = 0.5,
    tol: float = 1e-4,
    n_randomizations: int = 200,
) -> RfChainSweep:
    """Transmit power and total consumption across antenna/RF-chain counts.

    ``devices`` is a device count (positions drawn uniformly in the model
    disk) or explicit positions. Channels are drawn once at max(m_values) and
    truncated, so the M-antenna channel is a prefix of the (M+1)-antenna one;
    the previous best precoder is zero-padded into the next candidate pool,
    which makes tx_power(M) non-increasing by construction. Ties in total
    consumption resolve to the smallest M.
    """
    model = model or ChannelModel()
    ms = [int(m) for m in m_values]
    if not ms:
        raise ValueError("m_values must be non-empty")
    if any(b <= a for a, b in zip(ms, ms[1:])) or ms[0] < 1:
        raise ValueError("m_values must be strictly increasing integers >= 1")
    if gamma <= 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")

    if isinstance(devices, (int, np.integer)):
        positions = draw_device_positions(int(devices), model.disk_radius, np.random.SeedSequence([int(seed), 0]))
    else:
        positions = list(devices)

    m_max = ms[-1]
    h_full = sample_channels(
        positions,
        Position2D(0.0, 0.0),
        ArrayConfig(m_max, model.element_spacing),
        model.rician,
        model.pathloss,
        seed=np.random.SeedSequence([int(seed), 1]),
    )

    points: list[ConsumptionPoint] = []
    prev_w: np.ndarray | None = None
    for m in ms:
        extras = ()
        if prev_w is not None:
            extras = (np.concatenate([prev_w, np.zeros(m - prev_w.shape[0], dtype=complex)]),)
        try:
            sol = min_power_precoder(
                MulticastProblem(h_full[:, :m], gamma),
                tol=tol,
                n_randomizations=n_randomizations,
                seed=int(
                    np.random.SeedSequence([int(seed), 2, m]).generate_state(1, dtype=np.uint64)[0]
                ),
                extra_candidates=extras,
            )
        except PrecoderError as err:
            raise PrecoderError(f"precoder failed at m={m}: {err}", best=err.best) from err
        points.append(ConsumptionPoint(m, sol.tx_power, consumption(sol.tx_power, m, pa_efficiency, p_rf)))
        prev_w = sol.precoder

    best = min(points, key=lambda pt: (pt.total_consumption, pt.n_rf))
    return RfChainSweep(tuple(points), best.n_rf)
