import math

import numpy as np
import pytest

from ratesched import (
    GainMatrix,
    NodeSpec,
    ValidationError,
    Verdict,
    achieved_sinr,
    check_rate_vector,
    disc4_table,
    min_power_vector,
)

from helpers import TABLE1_RADIO, random_gains

TABLE = disc4_table(1e8)


class TestMinPowerVector:
    def test_single_link_closed_form(self):
        # F = 0 for one link, so p = gamma * N0 / g = 10 * 1e-8 / 1e-7
        powers, rho = min_power_vector(GainMatrix([[1e-7]]), [10.0], 1e-8)
        assert rho == 0.0
        assert powers[0] == pytest.approx(1.0, rel=1e-12)

    def test_two_symmetric_links_closed_form(self):
        # p = gamma*N0 / (g_ii * (1 - gamma*beta)) with beta = g_ij/g_ii = 0.05
        g = GainMatrix([[1e-6, 5e-8], [5e-8, 1e-6]])
        powers, rho = min_power_vector(g, [10.0, 10.0], 1e-8)
        assert rho == pytest.approx(0.5, rel=1e-9)
        expected = 10.0 * 1e-8 / (1e-6 * (1.0 - 10.0 * 0.05))
        assert powers == pytest.approx([expected, expected], rel=1e-9)
        assert expected == 0.2

    def test_spectral_infeasible(self):
        # gamma * g_ij/g_ii = 2 makes the interference matrix blow up
        g = GainMatrix([[1e-6, 2e-7], [2e-7, 1e-6]])
        powers, rho = min_power_vector(g, [10.0, 10.0], 1e-8)
        assert powers is None
        assert rho == pytest.approx(2.0, rel=1e-9)

    def test_targets_met_with_equality(self):
        rng = np.random.default_rng(7)
        checked = 0
        while checked < 200:
            n = int(rng.integers(1, 5))
            gains = random_gains(rng, n)
            targets = 10.0 ** (rng.uniform(0.0, 3.0, size=n))
            powers, rho = min_power_vector(gains, targets, TABLE1_RADIO.noise_power)
            if powers is None:
                continue
            sinr = achieved_sinr(gains, powers, TABLE1_RADIO.noise_power)
            assert sinr == pytest.approx(targets, rel=1e-9)
            checked += 1

    def test_componentwise_minimality(self):
        # shaving any coordinate of the minimum vector breaks that link's SINR
        rng = np.random.default_rng(8)
        checked = 0
        while checked < 100:
            n = int(rng.integers(2, 5))
            gains = random_gains(rng, n)
            targets = 10.0 ** (rng.uniform(0.0, 2.5, size=n))
            powers, _ = min_power_vector(gains, targets, TABLE1_RADIO.noise_power)
            if powers is None:
                continue
            for i in range(n):
                shaved = powers.copy()
                shaved[i] *= 0.999
                sinr = achieved_sinr(gains, shaved, TABLE1_RADIO.noise_power)
                assert sinr[i] < targets[i]
            checked += 1

    def test_monotone_in_targets(self):
        # raising one target never lowers any minimum power and never turns a
        # spectrally infeasible case feasible
        rng = np.random.default_rng(9)
        for _ in range(200):
            n = int(rng.integers(2, 5))
            gains = random_gains(rng, n)
            targets = 10.0 ** (rng.uniform(0.0, 3.0, size=n))
            before, rho_before = min_power_vector(gains, targets, TABLE1_RADIO.noise_power)
            bumped = targets.copy()
            i = int(rng.integers(0, n))
            bumped[i] *= rng.uniform(1.1, 3.0)
            after, rho_after = min_power_vector(gains, bumped, TABLE1_RADIO.noise_power)
            assert rho_after >= rho_before * (1.0 - 1e-12)
            if before is None:
                assert after is None
            elif after is not None:
                assert np.all(after >= before * (1.0 - 1e-12))

    def test_target_validation(self):
        with pytest.raises(ValidationError):
            min_power_vector(GainMatrix([[1e-7]]), [10.0, 10.0], 1e-8)
        with pytest.raises(ValidationError):
            min_power_vector(GainMatrix([[1e-7]]), [-1.0], 1e-8)


def _single_node(delay=1e-3, energy=math.inf):
    return NodeSpec(
        id=0, controller_id=0, packet_bits=100.0, period=1, delay_bound=delay,
        energy_budget=energy,
    )


class TestCheckRateVector:
    def test_feasible_single_node(self):
        rep = check_rate_vector(
            [_single_node()], GainMatrix([[1e-6]]), [TABLE.rate(0)], TABLE, TABLE1_RADIO
        )
        assert rep.verdict is Verdict.FEASIBLE
        assert rep.min_powers[0] == pytest.approx(0.1, rel=1e-12)
        # t = 100 bits / (1e8 * log2(11)) seconds
        assert 100.0 / TABLE.rate(0) == pytest.approx(2.8906482631788787e-07, rel=1e-12)

    def test_max_power_verdict(self):
        rep = check_rate_vector(
            [_single_node()], GainMatrix([[1e-7]]), [TABLE.rate(0)], TABLE, TABLE1_RADIO
        )
        assert rep.verdict is Verdict.INFEASIBLE_MAX_POWER
        assert rep.min_powers[0] == pytest.approx(1.0, rel=1e-12)

    def test_delay_verdict(self):
        rep = check_rate_vector(
            [_single_node(delay=1e-9)],
            GainMatrix([[1e-6]]),
            [TABLE.rate(0)],
            TABLE,
            TABLE1_RADIO,
        )
        assert rep.verdict is Verdict.INFEASIBLE_DELAY

    def test_energy_verdict(self):
        # power and delay pass; 0.1 W for 2.89e-7 s needs 2.89e-8 J
        rep = check_rate_vector(
            [_single_node(energy=1e-9)],
            GainMatrix([[1e-6]]),
            [TABLE.rate(0)],
            TABLE,
            TABLE1_RADIO,
        )
        assert rep.verdict is Verdict.INFEASIBLE_ENERGY

    def test_unknown_rate_rejected(self):
        with pytest.raises(ValidationError, match="not in table"):
            check_rate_vector(
                [_single_node()], GainMatrix([[1e-6]]), [12345.0], TABLE, TABLE1_RADIO
            )

    def test_size_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            check_rate_vector(
                [_single_node()],
                GainMatrix([[1e-6, 1e-8], [1e-8, 1e-6]]),
                [TABLE.rate(0)],
                TABLE,
                TABLE1_RADIO,
            )


class TestDescendantInfeasibility:
    def test_infeasible_descendant_implies_infeasible_vector(self):
        # lowering rates can only help: if the lowered vector fails, the
        # original must fail too (checked over random small instances)
        rng = np.random.default_rng(10)
        table = disc4_table(1e8)
        pairs = 0
        while pairs < 300:
            n = int(rng.integers(2, 4))
            gains = random_gains(rng, n)
            nodes = [
                NodeSpec(
                    id=i,
                    controller_id=i,
                    packet_bits=float(rng.choice([50.0, 100.0])),
                    period=1,
                    delay_bound=1e-3,
                    energy_budget=TABLE1_RADIO.p_max * 1e-3 * 10 ** rng.uniform(-3, 0),
                )
                for i in range(n)
            ]
            upper = [int(q) for q in rng.integers(0, table.num_levels, size=n)]
            if all(q == 0 for q in upper):
                continue
            lower = [int(rng.integers(0, q + 1)) for q in upper]
            if not any(a < b for a, b in zip(lower, upper)):
                continue
            rep_low = check_rate_vector(
                nodes, gains, [table.rate(q) for q in lower], table, TABLE1_RADIO
            )
            rep_up = check_rate_vector(
                nodes, gains, [table.rate(q) for q in upper], table, TABLE1_RADIO
            )
            if not rep_low.feasible:
                assert not rep_up.feasible
            pairs += 1
