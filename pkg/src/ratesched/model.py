"""Core domain types for SINR-constrained power/rate allocation and TDMA scheduling.

Unit conventions used throughout the package:

* powers in watts, noise in watts (total receiver noise, not a density)
* bandwidth in Hz, rates in bits/second, packets in bits
* times (delays, slots, subframes) in seconds
* channel gains are linear power gains, SINR thresholds are linear ratios

All types are immutable after construction and safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ValidationError",
    "RateTable",
    "build_rate_table",
    "disc4_table",
    "disc8_table",
    "DISC4_THRESHOLDS_DB",
    "DISC8_THRESHOLDS_DB",
    "NodeSpec",
    "RadioConfig",
    "GainMatrix",
    "AllocationResult",
    "Instance",
    "validate_instance",
]


class ValidationError(ValueError):
    """Raised when an input object violates a documented invariant."""


# Threshold ladders for the two bundled discrete-rate models. The -inf entry
# stands for "no transmission" and is dropped from the usable levels.
DISC4_THRESHOLDS_DB = (-math.inf, 10.0, 20.0, 30.0)
DISC8_THRESHOLDS_DB = (-math.inf, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)


@dataclass(frozen=True)
class RateTable:
    """Ordered ladder of (SINR threshold, rate) pairs a link may transmit at.

    ``levels[q] = (threshold, rate)`` with thresholds as linear ratios and
    rates in bits/s. A link may use level q only if its SINR is at least
    ``levels[q][0]``. Levels are strictly increasing in both coordinates, and
    the threshold->rate map must be concave over the listed points (slopes
    non-increasing), which every Shannon-derived ladder satisfies.
    """

    levels: tuple[tuple[float, float], ...]
    bandwidth_hz: float
    dropped_db: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if not self.levels:
            raise ValidationError("no positive rate levels")
        if not self.bandwidth_hz > 0:
            raise ValidationError("bandwidth must be > 0")
        prev_g, prev_r = -math.inf, 0.0
        for g, r in self.levels:
            if not (g > prev_g and r > prev_r):
                raise ValidationError(
                    "rate levels must be strictly increasing in threshold and rate"
                )
            if r <= 0:
                raise ValidationError("all usable rates must be > 0")
            prev_g, prev_r = g, r
        # Concavity over the listed points: chord slopes must not increase.
        # The leading chord from the origin is included so that rate/threshold
        # stays non-increasing along the ladder.
        pts = [(0.0, 0.0)] + list(self.levels)
        slopes = [
            (pts[i + 1][1] - pts[i][1]) / (pts[i + 1][0] - pts[i][0])
            for i in range(len(pts) - 1)
        ]
        for a, b in zip(slopes, slopes[1:]):
            if b > a * (1 + 1e-12):
                raise ValidationError("threshold->rate map must be concave")

    @property
    def num_levels(self) -> int:
        return len(self.levels)

    def rate(self, q: int) -> float:
        return self.levels[q][1]

    def threshold(self, q: int) -> float:
        return self.levels[q][0]

    @property
    def rates(self) -> tuple[float, ...]:
        return tuple(r for _, r in self.levels)

    def index_of(self, rate: float) -> int:
        """Level index of an exact rate value; raises if the rate is unknown."""
        for q, (_, r) in enumerate(self.levels):
            if r == rate:
                return q
        raise ValidationError(f"rate {rate!r} not in table")

    def threshold_for_rate(self, rate: float) -> float:
        return self.levels[self.index_of(rate)][0]

    def lowest_level_within(self, packet_bits: float, deadline_s: float) -> int | None:
        """Smallest level whose rate transmits ``packet_bits`` within the deadline.

        Returns None when even the top rate is too slow.
        """
        for q, (_, r) in enumerate(self.levels):
            if packet_bits / r <= deadline_s:
                return q
        return None


def build_rate_table(sinr_thresholds_db, bandwidth_hz: float) -> RateTable:
    """Build a rate ladder from dB thresholds using the AWGN capacity map.

    Each threshold ``x`` dB becomes a linear ratio ``g = 10**(x/10)`` with rate
    ``bandwidth_hz * log2(1 + g)``. Levels with nonpositive rate (the -inf dB
    "silent" entry) are excluded from the usable ladder and recorded in
    ``dropped_db``.
    """
    if not bandwidth_hz > 0:
        raise ValidationError("bandwidth must be > 0")
    thresholds = list(sinr_thresholds_db)
    for a, b in zip(thresholds, thresholds[1:]):
        if not b > a:
            raise ValidationError("thresholds must be strictly increasing")
    levels = []
    dropped = []
    for db in thresholds:
        g = 10.0 ** (db / 10.0) if db != -math.inf else 0.0
        r = bandwidth_hz * math.log2(1.0 + g)
        if r > 0:
            levels.append((g, r))
        else:
            dropped.append(db)
    if not levels:
        raise ValidationError("no positive rate levels")
    return RateTable(tuple(levels), float(bandwidth_hz), tuple(dropped))


def disc4_table(bandwidth_hz: float) -> RateTable:
    """Four-level ladder (thresholds -inf/10/20/30 dB; three usable rates)."""
    return build_rate_table(DISC4_THRESHOLDS_DB, bandwidth_hz)


def disc8_table(bandwidth_hz: float) -> RateTable:
    """Eight-level ladder (thresholds -inf and 0..30 dB in 5 dB steps)."""
    return build_rate_table(DISC8_THRESHOLDS_DB, bandwidth_hz)


@dataclass(frozen=True)
class NodeSpec:
    """One sensor link.

    ``period`` counts subframes between packets, ``delay_bound`` caps the
    transmission time of one packet and ``energy_budget`` caps the per-packet
    transmit energy (``math.inf`` means not binding).
    """

    id: int
    controller_id: int
    packet_bits: float
    period: int
    delay_bound: float
    energy_budget: float = math.inf

    def __post_init__(self):
        if not self.packet_bits > 0:
            raise ValidationError(f"node {self.id}: packet_bits must be > 0")
        if not (isinstance(self.period, int) and self.period >= 1):
            raise ValidationError(f"node {self.id}: period must be an integer >= 1")
        if not self.delay_bound > 0:
            raise ValidationError(f"node {self.id}: delay_bound must be > 0")
        if not self.energy_budget > 0:
            raise ValidationError(f"node {self.id}: energy_budget must be > 0")


@dataclass(frozen=True)
class RadioConfig:
    """Radio-wide constants: max transmit power, receiver noise power, bandwidth."""

    p_max: float
    noise_power: float
    bandwidth_hz: float

    def __post_init__(self):
        if not (self.p_max > 0 and self.noise_power > 0 and self.bandwidth_hz > 0):
            raise ValidationError("radio parameters must all be > 0")


class GainMatrix:
    """Square matrix of linear power gains for a set of concurrent links.

    ``g[l, k]`` is the gain from the transmitter of link l to the receiver
    (controller) of link k, so row l describes where link l's power lands.
    The array is validated, copied and frozen on construction.
    """

    __slots__ = ("g",)

    def __init__(self, g):
        arr = np.array(g, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValidationError("gain matrix must be square")
        if not np.all(np.isfinite(arr)) or not np.all(arr > 0):
            raise ValidationError("gains must be finite and > 0")
        arr.setflags(write=False)
        self.g = arr

    @property
    def n(self) -> int:
        return self.g.shape[0]

    def __repr__(self):
        return f"GainMatrix(n={self.n})"


@dataclass(frozen=True)
class AllocationResult:
    """Outcome of a rate/power assignment for one concurrent subset.

    When ``feasible``, ``slot`` equals ``max(times)`` and ``times[i]`` is
    packet_bits/rate for link i. Infeasible results carry ``slot = inf`` and
    no per-link detail. Results produced from externally supplied slot prices
    (schedule fixtures) may also omit per-link detail.
    """

    feasible: bool
    slot: float
    rates: tuple[float, ...] | None = None
    powers: tuple[float, ...] | None = None
    times: tuple[float, ...] | None = None

    @classmethod
    def infeasible(cls) -> "AllocationResult":
        return cls(feasible=False, slot=math.inf)


@dataclass(frozen=True)
class Instance:
    """A validated set of nodes plus shared radio and rate-table context.

    ``periods[id]`` is the node period in subframes and ``subframe_count`` is
    the largest period, so one frame covers every node's cycle. Canonical
    instances have a smallest period of 1 (the subframe is defined as the
    shortest packet period); the experiment sampler renormalizes its draws
    into this form.
    """

    nodes: tuple[NodeSpec, ...]
    radio: RadioConfig
    table: RateTable
    subframe_count: int
    periods: dict[int, int]

    def node(self, node_id: int) -> NodeSpec:
        return self._by_id[node_id]

    def __post_init__(self):
        object.__setattr__(self, "_by_id", {n.id: n for n in self.nodes})

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(n.id for n in self.nodes)


def _is_power_of_two(x: int) -> bool:
    return x > 0 and (x & (x - 1)) == 0


def validate_instance(nodes, radio: RadioConfig, table: RateTable) -> Instance:
    """Check a node set for consistency and derive the frame geometry.

    Rejects duplicate ids and period sets that do not nest (every period must
    be a power-of-two multiple of the smallest one). NodeSpec/RadioConfig
    field invariants are enforced by their constructors.
    """
    nodes = tuple(nodes)
    if not nodes:
        raise ValidationError("instance must contain at least one node")
    seen = set()
    for n in nodes:
        if n.id in seen:
            raise ValidationError(f"duplicate node id {n.id}")
        seen.add(n.id)
    min_p = min(n.period for n in nodes)
    periods = {}
    for n in nodes:
        if n.period % min_p != 0 or not _is_power_of_two(n.period // min_p):
            raise ValidationError(
                f"non-nested periods: {n.period} is not a power-of-two "
                f"multiple of {min_p}"
            )
        periods[n.id] = n.period
    return Instance(nodes, radio, table, max(periods.values()), periods)
