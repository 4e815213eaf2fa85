"""Shared generators for randomized tests.

Instances are drawn so that solo SNR at full power spans roughly 2..42 dB and
cross gains sit 3..25 dB below the victim's desired gain, which yields a
healthy mix of feasible and infeasible rate vectors at the bundled radio
parameters.
"""

import math

import numpy as np

from ratesched import (
    FixedPricer,
    GainMatrix,
    NodeSpec,
    RadioConfig,
    disc8_table,
    validate_instance,
)

TABLE1_RADIO = RadioConfig(p_max=0.25, noise_power=1e-8, bandwidth_hz=1e8)


def random_gains(rng, n, radio=TABLE1_RADIO, snr_db=(2.0, 42.0), iso_db=(3.0, 25.0)):
    """Gain matrix with controlled solo SNR and interference isolation."""
    solo = rng.uniform(*snr_db, size=n)
    gii = 10.0 ** (solo / 10.0) * radio.noise_power / radio.p_max
    g = np.empty((n, n))
    for l in range(n):
        for k in range(n):
            if l == k:
                g[l, k] = gii[k]
            else:
                g[l, k] = gii[k] * 10.0 ** (-rng.uniform(*iso_db) / 10.0)
    return GainMatrix(g)


def random_nodes(
    rng,
    n,
    table,
    periods=(1,),
    controllers=None,
    tight_delay_prob=0.0,
    binding_energy_prob=0.0,
    loose_delay=1e-3,
):
    """Nodes with packets from {50, 100} bits and optional tight constraints."""
    nodes = []
    for i in range(n):
        bits = float(rng.choice([50.0, 100.0]))
        delay = loose_delay
        if rng.random() < tight_delay_prob:
            level = int(rng.integers(0, table.num_levels))
            delay = bits / table.rate(level) * rng.uniform(0.9, 1.5)
        energy = math.inf
        if rng.random() < binding_energy_prob:
            energy = TABLE1_RADIO.p_max * delay * 10.0 ** rng.uniform(-3.0, 0.0)
        ctrl = i if controllers is None else controllers[i]
        nodes.append(
            NodeSpec(
                id=i,
                controller_id=ctrl,
                packet_bits=bits,
                period=int(rng.choice(periods)),
                delay_bound=delay,
                energy_budget=energy,
            )
        )
    return nodes


def random_instance(
    rng, n, table, radio=TABLE1_RADIO, snr_db=(2.0, 42.0), iso_db=(3.0, 25.0), **node_kwargs
):
    """(nodes, gains) pair over Table-1 style radio parameters."""
    nodes = random_nodes(rng, n, table, **node_kwargs)
    gains = random_gains(rng, n, radio, snr_db=snr_db, iso_db=iso_db)
    return nodes, gains


def four_node_fixture():
    """Two-subframe frame with one fast node and three slow ones, priced so
    that only the two middle nodes can share a slot (0.30 ms jointly)."""
    ms = 1e-3
    periods = {1: 1, 2: 2, 3: 2, 4: 2}
    controllers = {1: 0, 2: 0, 3: 1, 4: 2}
    nodes = [
        NodeSpec(
            id=i,
            controller_id=controllers[i],
            packet_bits=100.0,
            period=periods[i],
            delay_bound=1e-3,
        )
        for i in sorted(periods)
    ]
    inst = validate_instance(nodes, TABLE1_RADIO, disc8_table(1e8))
    prices = {
        (1,): 0.15 * ms,
        (2,): 0.20 * ms,
        (3,): 0.25 * ms,
        (4,): 0.30 * ms,
        (2, 3): 0.30 * ms,
    }
    return inst, FixedPricer(inst, prices)


def random_rate_indices(rng, n, num_levels):
    return [int(q) for q in rng.integers(0, num_levels, size=n)]


def random_descendant(rng, indices):
    """Component-wise <= copy of ``indices`` with at least one strict drop."""
    if all(q == 0 for q in indices):
        raise ValueError("all-zero vector has no descendant")
    while True:
        down = [int(rng.integers(0, q + 1)) for q in indices]
        if any(d < q for d, q in zip(down, indices)):
            return down
