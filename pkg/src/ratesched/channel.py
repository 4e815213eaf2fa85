"""Random topologies and channel gains: uniform placement, log-distance path
loss with log-normal shadowing, and unit-mean exponential (Rayleigh power)
fading.

Every draw is reproducible from an integer seed; identical seeds give
bit-identical results.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .model import GainMatrix, ValidationError

__all__ = [
    "Topology",
    "ChannelRealization",
    "generate_topology",
    "realize_channel",
    "path_loss_db",
    "mean_gain",
    "topology_to_json",
    "topology_from_json",
]


@dataclass(frozen=True)
class Topology:
    """Sensor and controller positions in a square of the requested density.

    Each sensor is attached to its nearest controller, which maximizes the
    expected desired-link gain. Density counts sensors only.
    """

    side: float
    sensors: np.ndarray
    controllers: np.ndarray
    controller_of: tuple[int, ...]
    density: float
    seed: int | None

    def __post_init__(self):
        self.sensors.setflags(write=False)
        self.controllers.setflags(write=False)

    @property
    def n_sensors(self) -> int:
        return self.sensors.shape[0]

    @property
    def n_controllers(self) -> int:
        return self.controllers.shape[0]


def generate_topology(
    n_sensors: int, n_controllers: int, density: float, seed=None
) -> Topology:
    """Place sensors and controllers uniformly in a square of side
    sqrt(n_sensors / density) meters."""
    if n_sensors < 1 or n_controllers < 1:
        raise ValidationError("need at least one sensor and one controller")
    if not density > 0:
        raise ValidationError("density must be > 0")
    side = math.sqrt(n_sensors / density)
    rng = np.random.default_rng(seed)
    sensors = rng.uniform(0.0, side, size=(n_sensors, 2))
    controllers = rng.uniform(0.0, side, size=(n_controllers, 2))
    dist = np.linalg.norm(sensors[:, None, :] - controllers[None, :, :], axis=-1)
    controller_of = tuple(int(k) for k in np.argmin(dist, axis=1))
    return Topology(side, sensors, controllers, controller_of, float(density), seed)


def path_loss_db(
    distance_m, pl_d0_db: float = 70.0, alpha: float = 3.5, d0: float = 1.0
):
    """Log-distance path loss in dB (no shadowing term)."""
    d = np.maximum(np.asarray(distance_m, dtype=float), 1e-9)
    return pl_d0_db + 10.0 * alpha * np.log10(d / d0)


def mean_gain(distance_m, pl_d0_db: float = 70.0, alpha: float = 3.5, d0: float = 1.0):
    """Mean linear power gain at a distance, capped at 1 (0 dB loss).

    The cap keeps very short links physical; without it the log-distance
    model would amplify below ``d0 * 10**(-pl_d0_db / (10 * alpha))``.
    """
    return np.minimum(1.0, 10.0 ** (-path_loss_db(distance_m, pl_d0_db, alpha, d0) / 10.0))


@dataclass(frozen=True)
class ChannelRealization:
    """Gains from every sensor transmitter to every controller receiver.

    ``gains[l, c]`` is a linear power gain. ``shadowing_db`` and ``fading``
    hold the drawn log-normal and exponential components for diagnostics.
    """

    gains: np.ndarray
    controller_of: tuple[int, ...]
    shadowing_db: np.ndarray
    fading: np.ndarray
    seed: int | None

    def __post_init__(self):
        for arr in (self.gains, self.shadowing_db, self.fading):
            arr.setflags(write=False)

    def link_gains(self, sensor_ids) -> GainMatrix:
        """Gain matrix for a concurrent subset: entry (l, k) is the gain from
        transmitter ``sensor_ids[l]`` to the controller of ``sensor_ids[k]``."""
        ids = list(sensor_ids)
        cols = [self.controller_of[i] for i in ids]
        return GainMatrix(self.gains[np.ix_(ids, cols)])


def realize_channel(
    topology: Topology,
    pl_d0_db: float = 70.0,
    alpha: float = 3.5,
    sigma_z_db: float = 4.0,
    d0: float = 1.0,
    seed=None,
) -> ChannelRealization:
    """Draw one static channel over all sensor-to-controller pairs.

    Large-scale loss is ``pl_d0_db + 10*alpha*log10(d/d0) + Z`` dB with
    ``Z ~ Normal(0, sigma_z_db**2)``; the resulting mean gain (capped at 1)
    scales a unit-mean exponential fading factor, so the average received
    power matches the large-scale level. The same physical pair (sensor,
    controller) always gets the same gain, whichever link it interferes with.
    """
    rng = np.random.default_rng(seed)
    dist = np.linalg.norm(
        topology.sensors[:, None, :] - topology.controllers[None, :, :], axis=-1
    )
    shape = dist.shape
    shadowing = rng.normal(0.0, sigma_z_db, size=shape)
    fading = rng.exponential(1.0, size=shape)
    pl = path_loss_db(dist, pl_d0_db, alpha, d0) + shadowing
    gains = np.minimum(1.0, 10.0 ** (-pl / 10.0)) * fading
    return ChannelRealization(gains, topology.controller_of, shadowing, fading, seed)


def topology_to_json(topology: Topology) -> str:
    doc = {
        "side": topology.side,
        "density": topology.density,
        "seed": topology.seed,
        "sensors": topology.sensors.tolist(),
        "controllers": topology.controllers.tolist(),
        "controller_of": list(topology.controller_of),
    }
    return json.dumps(doc, indent=2)


def topology_from_json(text: str) -> Topology:
    doc = json.loads(text)
    return Topology(
        side=float(doc["side"]),
        sensors=np.array(doc["sensors"], dtype=float),
        controllers=np.array(doc["controllers"], dtype=float),
        controller_of=tuple(int(k) for k in doc["controller_of"]),
        density=float(doc["density"]),
        seed=doc["seed"],
    )
