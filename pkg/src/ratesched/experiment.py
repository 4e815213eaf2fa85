"""Seeded scheduling experiments over random topologies.

A run sweeps either the sensor count or the density. For every sweep point it
draws independent topologies, channels and traffic, schedules each instance
under every configured rate model and strategy, and reports the maximum total
active length normalized by a continuous-rate reference: the exhaustive
optimum when the instance is small enough, otherwise the best continuous-rate
heuristic (the reference kind used is counted per sweep point).

Seeds fan out from one master seed through counter-style spawn keys, so any
(sweep point, topology) pair can be reproduced in isolation and a fixed
config always produces byte-identical output files.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .channel import generate_topology, realize_channel
from .model import (
    Instance,
    NodeSpec,
    RadioConfig,
    RateTable,
    ValidationError,
    disc4_table,
    disc8_table,
    validate_instance,
)
from .scheduling import (
    ContinuousPricer,
    InfeasibleInstanceError,
    STRATEGIES,
    TablePricer,
    exhaustive_schedule,
    schedule,
)

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "ExperimentResults",
    "run_experiment",
    "emit_results",
    "RESULT_COLUMNS",
    "subseed",
]

RESULT_COLUMNS = (
    "sweep_var",
    "value",
    "strategy",
    "rate_model",
    "seed_count",
    "infeasible_count",
    "mean_norm",
    "std_norm",
    "mean_max_active_s",
)

RATE_MODELS = ("cont", "disc4", "disc8")

# Hard size limits of the exhaustive reference scheduler.
_EXHAUSTIVE_MAX_NODES = 8
_EXHAUSTIVE_MAX_SUBFRAMES = 4


class ConfigError(ValueError):
    """Bad experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Experiment description; any field may come from a JSON config file.

    Exactly one of ``n_sensors`` and ``density`` may be a list, which makes it
    the sweep variable. ``delay_rule`` is either the string "subframe" (delay
    bound equals the effective subframe duration) or a fixed number of
    seconds. ``energy_scale`` scales the default per-packet energy budget
    p_max * delay_bound; at 1.0 the budget never binds.
    """

    n_sensors: object = 8
    n_controllers: int = 3
    density: object = 5.0
    seeds: int = 100
    master_seed: int = 1
    rate_models: tuple[str, ...] = RATE_MODELS
    strategies: tuple[str, ...] = STRATEGIES
    radio: RadioConfig = field(
        default_factory=lambda: RadioConfig(p_max=0.25, noise_power=1e-8, bandwidth_hz=1e8)
    )
    period_set: tuple[int, ...] = (1, 2, 4, 8)
    packet_bits_set: tuple[float, ...] = (50.0, 100.0)
    delay_rule: object = "subframe"
    energy_scale: float = 1.0
    exhaustive_guard: int = 8
    base_period_s: float = 1e-3

    def __post_init__(self):
        for model in self.rate_models:
            if model not in RATE_MODELS:
                raise ConfigError(f"unknown rate model {model!r}")
        for strategy in self.strategies:
            if strategy not in STRATEGIES:
                raise ConfigError(f"unknown strategy {strategy!r}")
        if isinstance(self.n_sensors, list) and isinstance(self.density, list):
            raise ConfigError("only one of n_sensors and density may sweep")
        if self.seeds < 1:
            raise ConfigError("seeds must be >= 1")
        if not self.period_set or any(
            not isinstance(p, int) or p < 1 for p in self.period_set
        ):
            raise ConfigError("period_set must be positive integers")
        if self.delay_rule != "subframe" and not (
            isinstance(self.delay_rule, (int, float)) and self.delay_rule > 0
        ):
            raise ConfigError("delay_rule must be 'subframe' or a positive number")

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        doc = dict(doc)
        unknown = set(doc) - {
            "n_sensors",
            "n_controllers",
            "density",
            "seeds",
            "master_seed",
            "rate_models",
            "strategies",
            "radio",
            "period_set",
            "packet_bits_set",
            "delay_rule",
            "energy_scale",
            "exhaustive_guard",
            "base_period_s",
        }
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "radio" in doc:
            radio = doc["radio"]
            try:
                doc["radio"] = RadioConfig(
                    p_max=float(radio.get("p_max", 0.25)),
                    noise_power=float(radio.get("noise_power", 1e-8)),
                    bandwidth_hz=float(radio.get("bandwidth_hz", 1e8)),
                )
            except (TypeError, AttributeError, ValidationError) as exc:
                raise ConfigError(f"bad radio overrides: {exc}") from exc
        for key in ("rate_models", "strategies", "period_set", "packet_bits_set"):
            if key in doc:
                doc[key] = tuple(doc[key])
        try:
            return cls(**doc)
        except (TypeError, ValidationError) as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_json_file(cls, path) -> "ExperimentConfig":
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(doc)

    def sweep(self) -> tuple[str, list]:
        if isinstance(self.n_sensors, list):
            return "n_sensors", list(self.n_sensors)
        if isinstance(self.density, list):
            return "density", list(self.density)
        return "n_sensors", [self.n_sensors]


@dataclass
class ExperimentResults:
    rows: list[dict]
    reference_counts: dict
    per_seed: list[dict]

    @property
    def all_infeasible(self) -> bool:
        return all(row["seed_count"] == 0 for row in self.rows)


def subseed(master_seed: int, *key: int) -> int:
    """Deterministic child seed for a (sweep point, topology, role) counter."""
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(key))
    return int(ss.generate_state(1, np.uint64)[0])


def _table_for(model: str, bandwidth_hz: float) -> RateTable:
    # The continuous model carries a table too so that instance validation is
    # uniform; continuous pricing never reads it.
    return disc4_table(bandwidth_hz) if model == "disc4" else disc8_table(bandwidth_hz)


def _draw_instance(cfg: ExperimentConfig, n: int, density: float, point: int, k: int):
    """Topology, channel and traffic for one seeded instance."""
    topo = generate_topology(
        n, cfg.n_controllers, density, subseed(cfg.master_seed, point, k, 0)
    )
    chan = realize_channel(topo, seed=subseed(cfg.master_seed, point, k, 1))
    rng = np.random.default_rng(subseed(cfg.master_seed, point, k, 2))
    drawn = [int(p) for p in rng.choice(cfg.period_set, size=n)]
    packets = [float(b) for b in rng.choice(cfg.packet_bits_set, size=n)]
    # canonical form: the subframe is the shortest drawn period
    min_p = min(drawn)
    periods = [p // min_p for p in drawn]
    subframe_s = cfg.base_period_s * min_p
    delay = subframe_s if cfg.delay_rule == "subframe" else float(cfg.delay_rule)
    energy = cfg.energy_scale * cfg.radio.p_max * delay
    nodes = [
        NodeSpec(
            id=i,
            controller_id=topo.controller_of[i],
            packet_bits=packets[i],
            period=periods[i],
            delay_bound=delay,
            energy_budget=energy,
        )
        for i in range(n)
    ]
    gains = chan.link_gains(range(n))
    return nodes, gains, subframe_s


def _run_seed(cfg: ExperimentConfig, n: int, density: float, point: int, k: int):
    """All (strategy, model) max-actives plus the reference for one seed.

    Raises InfeasibleInstanceError if any configured run or the reference
    cannot be scheduled, so that averages always compare the same seeds.
    """
    nodes, gains, subframe_s = _draw_instance(cfg, n, density, point, k)
    instances: dict[str, Instance] = {}
    pricers: dict[str, object] = {}
    needed = cfg.rate_models if "cont" in cfg.rate_models else ("cont",) + cfg.rate_models
    for model in needed:
        inst = validate_instance(nodes, cfg.radio, _table_for(model, cfg.radio.bandwidth_hz))
        pricer = (
            ContinuousPricer(inst, gains)
            if model == "cont"
            else TablePricer(inst, gains)
        )
        instances[model], pricers[model] = inst, pricer

    inst_cont = instances["cont"]
    within_guard = (
        n <= min(cfg.exhaustive_guard, _EXHAUSTIVE_MAX_NODES)
        and inst_cont.subframe_count <= _EXHAUSTIVE_MAX_SUBFRAMES
    )
    cont_heuristics = {}
    max_active: dict[tuple[str, str], float] = {}
    for strategy in cfg.strategies:
        for model in needed:
            _, metrics = schedule(
                instances[model],
                gains,
                strategy,
                subframe_duration=subframe_s,
                pricer=pricers[model],
            )
            if model in cfg.rate_models:
                max_active[(strategy, model)] = metrics.max_active
            if model == "cont":
                cont_heuristics[strategy] = metrics.max_active

    if within_guard:
        _, opt = exhaustive_schedule(
            inst_cont, gains, subframe_duration=subframe_s, pricer=pricers["cont"]
        )
        reference, ref_kind = opt.max_active, "exhaustive"
    else:
        reference, ref_kind = min(cont_heuristics.values()), "heuristic"
    return max_active, reference, ref_kind


def run_experiment(cfg: ExperimentConfig) -> ExperimentResults:
    """Execute the configured sweep; infeasible seeds are counted and skipped."""
    sweep_var, values = cfg.sweep()
    rows = []
    reference_counts = {}
    per_seed = []
    for point, value in enumerate(values):
        n = int(value) if sweep_var == "n_sensors" else int(cfg.n_sensors)
        density = float(cfg.density) if sweep_var == "n_sensors" else float(value)
        kept: list[tuple[int, dict, float]] = []
        ref_kinds = {"exhaustive": 0, "heuristic": 0}
        infeasible = 0
        for k in range(cfg.seeds):
            try:
                max_active, reference, ref_kind = _run_seed(cfg, n, density, point, k)
            except InfeasibleInstanceError:
                infeasible += 1
                continue
            ref_kinds[ref_kind] += 1
            kept.append((k, max_active, reference))
            per_seed.append(
                {
                    "sweep_var": sweep_var,
                    "value": value,
                    "seed_index": k,
                    "reference": reference,
                    "reference_kind": ref_kind,
                    "max_active": {f"{s}/{m}": t for (s, m), t in max_active.items()},
                }
            )
        reference_counts[(sweep_var, value)] = dict(ref_kinds, infeasible=infeasible)
        for strategy in cfg.strategies:
            for model in cfg.rate_models:
                norms = [ma[(strategy, model)] / ref for _, ma, ref in kept]
                raws = [ma[(strategy, model)] for _, ma, _ in kept]
                rows.append(
                    {
                        "sweep_var": sweep_var,
                        "value": value,
                        "strategy": strategy,
                        "rate_model": model,
                        "seed_count": len(kept),
                        "infeasible_count": infeasible,
                        "mean_norm": float(np.mean(norms)) if norms else math.nan,
                        "std_norm": float(np.std(norms)) if norms else math.nan,
                        "mean_max_active_s": float(np.mean(raws)) if raws else math.nan,
                    }
                )
    return ExperimentResults(rows, reference_counts, per_seed)


def emit_results(results, path, fmt: str = "csv") -> None:
    """Write result rows with a fixed column order to a CSV or JSON file."""
    rows = results.rows if isinstance(results, ExperimentResults) else list(results)
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=RESULT_COLUMNS)
            writer.writeheader()
            for row in rows:
                writer.writerow(row)
    elif fmt == "json":
        with open(path, "w") as fh:
            json.dump([{c: row[c] for c in RESULT_COLUMNS} for row in rows], fh, indent=2)
            fh.write("\n")
    else:
        raise ConfigError(f"unknown output format {fmt!r}")
