"""Feasibility of concurrent transmissions under SINR, power, delay and energy caps.

A rate choice per link fixes per-link SINR targets. Whether any power vector
can meet all targets at once reduces to the spectral radius of the normalized
interference matrix being below one; when it is, the component-wise minimum
power vector solves a linear system and meets every target with equality.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .model import GainMatrix, RadioConfig, RateTable, ValidationError

__all__ = [
    "Verdict",
    "FeasibilityReport",
    "NumericalError",
    "spectral_radius",
    "min_power_vector",
    "check_targets",
    "check_rate_vector",
    "achieved_sinr",
]


class NumericalError(RuntimeError):
    """The linear solve for the minimum power vector broke down numerically."""


class Verdict(enum.Enum):
    FEASIBLE = "feasible"
    INFEASIBLE_SPECTRAL = "infeasible_spectral"
    INFEASIBLE_MAX_POWER = "infeasible_max_power"
    INFEASIBLE_DELAY = "infeasible_delay"
    INFEASIBLE_ENERGY = "infeasible_energy"


@dataclass(frozen=True)
class FeasibilityReport:
    """Verdict plus the minimum power vector (present whenever it exists).

    ``min_powers`` is set whenever the spectral condition holds, even if a
    later power/delay/energy check fails. The checks run in a fixed order
    (spectral, max power, delay, energy) so the verdict labels are
    deterministic; any single failure already means the vector is infeasible.
    """

    verdict: Verdict
    spectral_radius: float
    min_powers: np.ndarray | None = None

    @property
    def feasible(self) -> bool:
        return self.verdict is Verdict.FEASIBLE


def spectral_radius(f: np.ndarray) -> float:
    """Largest eigenvalue magnitude of the normalized interference matrix.

    Computed with a dense eigensolve. The matrices here are tiny (one row per
    concurrent link), so this is both faster and more robust than iterative
    estimates, which stall on the cyclic interference pattern of two links.
    """
    n = f.shape[0]
    if n <= 1:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(f))))


def _interference_system(gains: GainMatrix, targets: np.ndarray, noise: float):
    """Build F and u with F[i,j] = target_i * g[j,i] / g[i,i], u_i = target_i*N/g[i,i]."""
    g = gains.g
    diag = np.diag(g)
    f = (g.T * (targets / diag)[:, None]).copy()
    np.fill_diagonal(f, 0.0)
    u = targets * noise / diag
    return f, u


def min_power_vector(
    gains: GainMatrix, sinr_targets, noise: float
) -> tuple[np.ndarray | None, float]:
    """Component-wise minimum powers meeting the given per-link SINR targets.

    Returns ``(powers, rho)`` where ``rho`` is the spectral radius of the
    normalized interference matrix. Targets are jointly achievable iff
    ``rho < 1`` (strictly); otherwise ``powers`` is None. At the returned
    vector every link meets its target with equality, and any other feasible
    power vector dominates it component-wise.

    Raises NumericalError if the solve fails or returns a non-positive power
    even though ``rho < 1``; that signals numerical breakdown rather than
    infeasibility, and must never be reported as a silent wrong answer.
    """
    targets = np.asarray(sinr_targets, dtype=float)
    if targets.shape != (gains.n,):
        raise ValidationError("one SINR target per link required")
    if not np.all(targets > 0):
        raise ValidationError("SINR targets must be > 0")
    f, u = _interference_system(gains, targets, noise)
    if not np.all(np.isfinite(f)):
        return None, math.inf
    rho = spectral_radius(f)
    if not rho < 1.0:
        return None, rho
    try:
        powers = np.linalg.solve(np.eye(gains.n) - f, u)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"singular interference system despite spectral radius {rho}"
        ) from exc
    if not np.all(np.isfinite(powers)) or not np.all(powers > 0):
        raise NumericalError(f"non-positive minimum power with spectral radius {rho}")
    return powers, rho


def check_targets(
    gains: GainMatrix,
    sinr_targets,
    radio: RadioConfig,
    times,
    delays,
    energies,
) -> FeasibilityReport:
    """Ordered constraint check for explicit SINR targets and per-link times.

    Checks, in order: existence of a power solution (spectral radius < 1),
    p <= p_max per link, time <= delay per link, time * power <= energy per
    link. The first failing check fixes the verdict.
    """
    powers, rho = min_power_vector(gains, sinr_targets, radio.noise_power)
    if powers is None:
        return FeasibilityReport(Verdict.INFEASIBLE_SPECTRAL, rho)
    times = np.asarray(times, dtype=float)
    delays = np.asarray(delays, dtype=float)
    energies = np.asarray(energies, dtype=float)
    if np.any(powers > radio.p_max):
        return FeasibilityReport(Verdict.INFEASIBLE_MAX_POWER, rho, powers)
    if np.any(times > delays):
        return FeasibilityReport(Verdict.INFEASIBLE_DELAY, rho, powers)
    if np.any(times * powers > energies):
        return FeasibilityReport(Verdict.INFEASIBLE_ENERGY, rho, powers)
    return FeasibilityReport(Verdict.FEASIBLE, rho, powers)


def check_rate_vector(
    nodes,
    gains: GainMatrix,
    rates,
    table: RateTable,
    radio: RadioConfig,
) -> FeasibilityReport:
    """Feasibility of one discrete rate vector for a subset of nodes.

    Every rate must be an exact entry of the table; its SINR threshold becomes
    the link's target. Node order must match the gain matrix rows.
    """
    nodes = list(nodes)
    rates = list(rates)
    if len(nodes) != gains.n or len(rates) != gains.n:
        raise ValidationError("nodes, rates and gain matrix sizes must agree")
    targets = np.array([table.threshold_for_rate(r) for r in rates])
    times = np.array([n.packet_bits / r for n, r in zip(nodes, rates)])
    delays = np.array([n.delay_bound for n in nodes])
    energies = np.array([n.energy_budget for n in nodes])
    return check_targets(gains, targets, radio, times, delays, energies)


def achieved_sinr(gains: GainMatrix, powers, noise: float) -> np.ndarray:
    """Per-link SINR produced by a given power vector."""
    g = gains.g
    p = np.asarray(powers, dtype=float)
    received = g.T @ p
    desired = np.diag(g) * p
    return desired / (noise + received - desired)
