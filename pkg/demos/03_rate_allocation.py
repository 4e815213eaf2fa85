#!/usr/bin/env python3
"""Minimum-slot rate assignment for a concurrent subset.

Three solvers on the same two-link instance:

* the ladder walk starts every link at the slowest rate meeting its delay
  bound and repeatedly speeds up whichever link currently takes longest;
* the brute-force oracle enumerates every rate vector (small subsets only);
* the continuous baseline drops the ladder and bisects on the slot length.

The walk provably returns the oracle's optimum; the continuous slot is the
lower bound an idealized radio could reach.
"""

import math

from ratesched import (
    GainMatrix,
    NodeSpec,
    RadioConfig,
    brute_force_optimal,
    continuous_optimal,
    disc8_table,
    lttf,
)

radio = RadioConfig(p_max=0.25, noise_power=1e-8, bandwidth_hz=100e6)
table = disc8_table(radio.bandwidth_hz)

nodes = [
    NodeSpec(id=0, controller_id=0, packet_bits=100.0, period=1, delay_bound=1e-3),
    NodeSpec(id=1, controller_id=1, packet_bits=50.0, period=1, delay_bound=1e-3),
]
# strong desired links, moderate mutual interference
gains = GainMatrix([[4e-6, 2e-7], [1.5e-7, 2.5e-6]])

walked = lttf(nodes, gains, table, radio)
oracle = brute_force_optimal(nodes, gains, table, radio)
ideal = continuous_optimal(nodes, gains, radio)

print("ladder walk:")
print(f"  slot {walked.slot * 1e6:.3f} us")
for node, rate, power, t in zip(nodes, walked.rates, walked.powers, walked.times):
    level = table.index_of(rate)
    print(f"  node {node.id}: level {level} ({rate / 1e6:7.1f} Mbit/s), "
          f"{power * 1e3:6.2f} mW, {t * 1e6:.3f} us")

print(f"oracle slot:     {oracle.slot * 1e6:.3f} us "
      f"(match: {oracle.slot == walked.slot})")
print(f"continuous slot: {ideal.slot * 1e6:.3f} us "
      f"({walked.slot / ideal.slot:.3f}x the discrete slot)")

# Tighten one delay bound until nothing fits.
print("\nshrinking node 0's delay bound:")
for delay in (3e-7, 1.6e-7, 9e-8):
    tight = [
        NodeSpec(id=0, controller_id=0, packet_bits=100.0, period=1, delay_bound=delay),
        nodes[1],
    ]
    res = lttf(tight, gains, table, radio)
    slot = "infeasible" if math.isinf(res.slot) else f"{res.slot * 1e6:.3f} us"
    print(f"  d0 = {delay * 1e9:6.0f} ns -> {slot}")
