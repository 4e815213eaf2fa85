"""Minimum-slot-length rate and power assignment for one concurrent subset.

Three solvers share the same constraint checks:

* ``lttf`` walks the discrete rate ladder, always raising the rate of the
  link that currently takes longest, and keeps the last feasible vector.
* ``brute_force_optimal`` enumerates every rate vector (small subsets only)
  and serves as the optimality oracle.
* ``continuous_optimal`` drops the ladder and bisects on the slot length with
  capacity-derived SINR targets, giving the continuous-rate baseline.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .feasibility import FeasibilityReport, Verdict, check_rate_vector, check_targets
from .model import (
    AllocationResult,
    GainMatrix,
    RadioConfig,
    RateTable,
    ValidationError,
)

__all__ = ["lttf", "brute_force_optimal", "continuous_optimal"]


def _result_for(nodes, rates, report: FeasibilityReport) -> AllocationResult:
    times = tuple(n.packet_bits / r for n, r in zip(nodes, rates))
    return AllocationResult(
        feasible=True,
        slot=max(times),
        rates=tuple(rates),
        powers=tuple(report.min_powers),
        times=times,
    )


def lttf(nodes, gains: GainMatrix, table: RateTable, radio: RadioConfig) -> AllocationResult:
    """Longest-transmission-time-first rate assignment.

    Each link starts at the lowest rate level that meets its delay bound; if
    some link has no such level the subset is infeasible outright. While the
    current vector is feasible, the link with the largest transmission time
    gets its rate raised one level (ties broken by lowest position). The walk
    stops when that link already sits at the top level or the raise breaks
    feasibility, and the last feasible vector is returned together with its
    minimum power vector and slot length. Runs at most num_levels * len(nodes)
    feasibility checks.
    """
    nodes = list(nodes)
    if not nodes:
        raise ValidationError("subset must be nonempty")
    top = table.num_levels - 1
    levels = []
    for n in nodes:
        q = table.lowest_level_within(n.packet_bits, n.delay_bound)
        if q is None:
            return AllocationResult.infeasible()
        levels.append(q)

    best: AllocationResult | None = None
    while True:
        rates = [table.rate(q) for q in levels]
        report = check_rate_vector(nodes, gains, rates, table, radio)
        if not report.feasible:
            break
        times = [n.packet_bits / r for n, r in zip(nodes, rates)]
        j = max(range(len(nodes)), key=lambda i: (times[i], -i))
        best = _result_for(nodes, rates, report)
        if levels[j] == top:
            break
        levels[j] += 1
    return best if best is not None else AllocationResult.infeasible()


def brute_force_optimal(
    nodes, gains: GainMatrix, table: RateTable, radio: RadioConfig
) -> AllocationResult:
    """Exhaustive optimality oracle over all rate vectors.

    Guarded to at most 4 links and 8 usable levels. Ties on the slot length
    are broken by the lexicographically smallest level-index vector, which the
    enumeration order delivers for free.
    """
    nodes = list(nodes)
    if not nodes:
        raise ValidationError("subset must be nonempty")
    if len(nodes) > 4:
        raise ValidationError("brute force limited to 4 links")
    if table.num_levels > 8:
        raise ValidationError("brute force limited to 8 rate levels")
    best: AllocationResult | None = None
    for combo in itertools.product(range(table.num_levels), repeat=len(nodes)):
        rates = [table.rate(q) for q in combo]
        report = check_rate_vector(nodes, gains, rates, table, radio)
        if not report.feasible:
            continue
        slot = max(n.packet_bits / r for n, r in zip(nodes, rates))
        if best is None or slot < best.slot:
            best = _result_for(nodes, rates, report)
    return best if best is not None else AllocationResult.infeasible()


def _capacity_targets(packet_bits: np.ndarray, slot: float, bandwidth: float) -> np.ndarray:
    # SINR needed for each link to carry its packet in `slot` seconds.
    return np.expm1(packet_bits * (math.log(2.0) / (slot * bandwidth)))


def continuous_optimal(
    nodes, gains: GainMatrix, radio: RadioConfig, rel_tol: float = 1e-6
) -> AllocationResult:
    """Minimum common slot length under capacity-derived (continuous) rates.

    All links transmit for the whole slot t at rate packet_bits/t, so the
    search is a bisection on t between the interference-free single-link bound
    and the tightest delay bound. Feasibility of a trial t reuses the ordered
    spectral/power/delay/energy checks. The energy constraint need not be
    monotone in t; if it ever rejects a trial point, the bracket cannot be
    trusted and the search falls back to a 512-point grid scan refined around
    the best feasible point.
    """
    nodes = list(nodes)
    if not nodes:
        raise ValidationError("subset must be nonempty")
    bits = np.array([n.packet_bits for n in nodes])
    delays = np.array([n.delay_bound for n in nodes])
    energies = np.array([n.energy_budget for n in nodes])
    diag = np.diag(gains.g)
    snr_cap = radio.p_max * diag / radio.noise_power

    def probe(t: float) -> FeasibilityReport:
        with np.errstate(over="ignore"):
            targets = _capacity_targets(bits, t, radio.bandwidth_hz)
        return check_targets(
            gains, targets, radio, np.full(len(nodes), t), delays, energies
        )

    def allocation_at(t: float, report: FeasibilityReport) -> AllocationResult:
        rates = tuple(b / t for b in bits)
        return AllocationResult(
            feasible=True,
            slot=t,
            rates=rates,
            powers=tuple(report.min_powers),
            times=(t,) * len(nodes),
        )

    t_hi = float(np.min(delays))
    if not math.isfinite(t_hi):
        raise ValidationError("continuous baseline needs finite delay bounds")
    t_lo = float(np.max(bits / (radio.bandwidth_hz * np.log2(1.0 + snr_cap))))
    if t_lo > t_hi:
        return AllocationResult.infeasible()
    hi_report = probe(t_hi)
    if not hi_report.feasible:
        return AllocationResult.infeasible()
    lo_report = probe(t_lo)
    if lo_report.feasible:
        return allocation_at(t_lo, lo_report)

    energy_hit = lo_report.verdict is Verdict.INFEASIBLE_ENERGY
    lo, hi = t_lo, t_hi
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        report = probe(mid)
        if report.verdict is Verdict.INFEASIBLE_ENERGY:
            energy_hit = True
        if report.feasible:
            hi, hi_report = mid, report
        else:
            lo = mid

    if energy_hit:
        return _grid_fallback(probe, allocation_at, t_lo, t_hi, rel_tol)
    return allocation_at(hi, hi_report)


def _grid_fallback(probe, allocation_at, t_lo, t_hi, rel_tol, points: int = 512):
    """Scan for the smallest feasible slot when feasibility is not an interval."""
    grid = np.linspace(t_lo, t_hi, points)
    best_idx, best_report = None, None
    for idx, t in enumerate(grid):
        report = probe(float(t))
        if report.feasible:
            best_idx, best_report = idx, report
            break
    if best_idx is None:
        return AllocationResult.infeasible()
    if best_idx == 0:
        return allocation_at(float(grid[0]), best_report)
    lo, hi = float(grid[best_idx - 1]), float(grid[best_idx])
    hi_report = best_report
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        report = probe(mid)
        if report.feasible:
            hi, hi_report = mid, report
        else:
            lo = mid
    return allocation_at(hi, hi_report)
