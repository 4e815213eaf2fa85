"""TDMA frame construction: subframe assignment and concurrency grouping.

A frame spans M unit subframes, M being the ratio of the largest to the
smallest packet period. Every node occupies one subframe per period, fixed by
its offset. Within a subframe, nodes of equal period are partitioned into
concurrency groups; a group shares one time slot whose length comes from the
joint rate/power allocation of its members. The objective throughout is the
maximum total active length over the subframes of the frame.

Slot prices are supplied by a ``SubsetPricer`` so the same machinery runs on
discrete-rate allocation, the continuous-rate baseline, or fixed price tables
used in tests. Active lengths are always accumulated with ``math.fsum`` so
that schedules with equal group-length multisets compare exactly equal.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace

import numpy as np

from .allocation import continuous_optimal, lttf
from .model import AllocationResult, GainMatrix, Instance, ValidationError

__all__ = [
    "InfeasibleInstanceError",
    "SubsetPricer",
    "TablePricer",
    "ContinuousPricer",
    "FixedPricer",
    "Frame",
    "ScheduleMetrics",
    "compute_metrics",
    "sna_assign",
    "mla_allocate",
    "mua_allocate",
    "schedule",
    "exhaustive_schedule",
    "STRATEGIES",
]

STRATEGIES = ("sna-mla", "sna-mua")


class InfeasibleInstanceError(Exception):
    """Some node cannot transmit even alone; no schedule exists."""

    def __init__(self, node_id=None):
        self.node_id = node_id
        detail = f" (node {node_id})" if node_id is not None else ""
        super().__init__(f"instance is infeasible{detail}")


class SubsetPricer:
    """Base class mapping node subsets to allocation results, with caching."""

    def __init__(self, inst: Instance):
        self.inst = inst
        self._cache: dict[frozenset, AllocationResult] = {}

    def price(self, ids) -> AllocationResult:
        key = frozenset(ids)
        if key not in self._cache:
            self._cache[key] = self._price(tuple(sorted(key)))
        return self._cache[key]

    def solo_slot(self, node_id: int) -> float:
        return self.price((node_id,)).slot

    def controller(self, node_id: int) -> int:
        return self.inst.node(node_id).controller_id

    def _price(self, ids: tuple[int, ...]) -> AllocationResult:
        raise NotImplementedError


class _GainBackedPricer(SubsetPricer):
    def __init__(self, inst: Instance, gains: GainMatrix):
        super().__init__(inst)
        if gains.n != len(inst.nodes):
            raise ValidationError("gain matrix must cover every instance node")
        self.gains = gains
        self._pos = {n.id: k for k, n in enumerate(inst.nodes)}

    def _sub(self, ids):
        idx = [self._pos[i] for i in ids]
        nodes = [self.inst.node(i) for i in ids]
        return nodes, GainMatrix(self.gains.g[np.ix_(idx, idx)])


class TablePricer(_GainBackedPricer):
    """Prices subsets with the discrete-rate ladder of the instance."""

    def _price(self, ids):
        nodes, sub = self._sub(ids)
        return lttf(nodes, sub, self.inst.table, self.inst.radio)


class ContinuousPricer(_GainBackedPricer):
    """Prices subsets with the continuous-rate baseline."""

    def _price(self, ids):
        nodes, sub = self._sub(ids)
        return continuous_optimal(nodes, sub, self.inst.radio)


class FixedPricer(SubsetPricer):
    """Prices subsets from an explicit table; anything absent is infeasible.

    Useful for pinning worked examples where only the slot lengths matter.
    """

    def __init__(self, inst: Instance, prices):
        super().__init__(inst)
        self._prices = {frozenset(k): float(v) for k, v in prices.items()}

    def _price(self, ids):
        slot = self._prices.get(frozenset(ids))
        if slot is None:
            return AllocationResult.infeasible()
        return AllocationResult(feasible=True, slot=slot)


@dataclass(frozen=True)
class Frame:
    """A complete TDMA frame.

    ``assignments[id]`` is the node's subframe offset in [0, period).
    ``groups[m]`` lists the concurrency groups of subframe m as
    ``(node_ids, allocation)`` pairs. Nodes in one group always have pairwise
    distinct controllers and identical periods.
    """

    subframe_count: int
    subframe_duration: float | None
    assignments: dict[int, int]
    groups: tuple[tuple[tuple[tuple[int, ...], AllocationResult], ...], ...]


@dataclass(frozen=True)
class ScheduleMetrics:
    """Per-subframe active lengths and their maximum, in seconds."""

    active_lengths: tuple[float, ...]
    max_active: float
    normalized_max_active: float | None = None

    def normalized_to(self, reference: float) -> "ScheduleMetrics":
        return replace(self, normalized_max_active=self.max_active / reference)


def compute_metrics(frame: Frame) -> ScheduleMetrics:
    active = tuple(
        math.fsum(alloc.slot for _, alloc in subframe) for subframe in frame.groups
    )
    return ScheduleMetrics(active, max(active))


def sna_assign(pricer: SubsetPricer) -> dict[int, int]:
    """Assign each node a subframe offset, longest solo transmissions first.

    Nodes are processed in descending order of their solo slot length (ties by
    node id). Each node takes the offset that minimizes the largest resulting
    active length among the subframes it would occupy, active lengths being
    tracked with solo slot lengths at this stage; offset ties resolve to the
    smallest offset.
    """
    inst = pricer.inst
    m_count = inst.subframe_count
    solo = {}
    for i in inst.ids:
        res = pricer.price((i,))
        if not res.feasible:
            raise InfeasibleInstanceError(i)
        solo[i] = res.slot
    active = [0.0] * m_count
    assignments: dict[int, int] = {}
    for i in sorted(solo, key=lambda k: (-solo[k], k)):
        s = inst.periods[i]
        best_off, best_val = 0, None
        for off in range(s):
            val = max(active[m] + solo[i] for m in range(off, m_count, s))
            if best_val is None or val < best_val:
                best_off, best_val = off, val
        assignments[i] = best_off
        for m in range(best_off, m_count, s):
            active[m] += solo[i]
    return assignments


def _distinct_controllers(ids, pricer) -> bool:
    ctr = [pricer.controller(i) for i in ids]
    return len(set(ctr)) == len(ctr)


def _feasible_subsets(population, pricer):
    """All feasible controller-distinct subsets of a group population."""
    population = sorted(population)
    max_size = len({pricer.controller(i) for i in population})
    out = []
    for size in range(1, max_size + 1):
        for combo in itertools.combinations(population, size):
            if not _distinct_controllers(combo, pricer):
                continue
            res = pricer.price(combo)
            if res.feasible:
                out.append((combo, res))
    return out


def _require_coverage(population, candidates):
    covered = set()
    for ids, _ in candidates:
        covered.update(ids)
    for i in sorted(population):
        if i not in covered:
            raise InfeasibleInstanceError(i)


def _dedup_cover(selected, pricer):
    """Keep each node only in its cheapest selected subset, re-pricing the rest.

    Shrinking a subset never raises its slot length, so this step can only
    reduce the total. Returns disjoint groups in canonical order.
    """
    order = sorted(range(len(selected)), key=lambda k: (selected[k][1].slot, selected[k][0]))
    owner: dict[int, int] = {}
    for k in order:
        for i in selected[k][0]:
            owner.setdefault(i, k)
    groups = []
    for k, (ids, res) in enumerate(selected):
        kept = tuple(i for i in ids if owner[i] == k)
        if not kept:
            continue
        if kept != ids:
            res = pricer.price(kept)
        groups.append((kept, res))
    return sorted(groups, key=lambda g: g[0])


def _exact_cover(population, candidates, pricer):
    # Minimum-total-slot cover by dynamic programming over population masks.
    bit = {i: 1 << k for k, i in enumerate(population)}
    full = (1 << len(population)) - 1
    cand = [(sum(bit[i] for i in ids), ids, res) for ids, res in candidates]
    by_bit = {b: [c for c in cand if c[0] & (1 << b)] for b in range(len(population))}
    dp: list[tuple[float, tuple] | None] = [None] * (full + 1)
    dp[0] = (0.0, ())
    for mask in range(full + 1):
        if dp[mask] is None or mask == full:
            continue
        uncovered = (~mask) & full
        low = (uncovered & -uncovered).bit_length() - 1
        base_groups = dp[mask][1]
        for cmask, ids, res in by_bit[low]:
            new_mask = mask | cmask
            groups = base_groups + ((ids, res),)
            cost = math.fsum(r.slot for _, r in groups)
            if dp[new_mask] is None or cost < dp[new_mask][0]:
                dp[new_mask] = (cost, groups)
    return list(dp[full][1])


def _greedy_cover(population, candidates, pricer):
    # Classic weighted set cover: cheapest price per newly covered node first.
    uncovered = set(population)
    selected = []
    while uncovered:
        best = None
        for ids, res in candidates:
            new = len(uncovered.intersection(ids))
            if new == 0:
                continue
            key = (res.slot / new, res.slot, ids)
            if best is None or key < best[0]:
                best = (key, ids, res)
        _, ids, res = best
        selected.append((ids, res))
        uncovered.difference_update(ids)
    return selected


def mla_allocate(population, pricer: SubsetPricer):
    """Minimum-total-length concurrency grouping of one subframe population.

    Enumerates the feasible controller-distinct subsets, selects a cover of
    minimum total slot length (exactly for populations of up to 6 nodes, by
    greedy price-per-new-node otherwise), then reduces the cover to disjoint
    groups by keeping every node only in its cheapest subset.
    """
    population = sorted(population)
    if not population:
        return []
    candidates = _feasible_subsets(population, pricer)
    _require_coverage(population, candidates)
    if len(population) <= 6:
        selected = _exact_cover(population, candidates, pricer)
    else:
        selected = _greedy_cover(population, candidates, pricer)
    return _dedup_cover(selected, pricer)


def mua_allocate(population, pricer: SubsetPricer):
    """Utility-greedy concurrency grouping of one subframe population.

    Seeds a group with the unassigned node of largest solo slot, then keeps
    adding the node that most increases the utility (total solo time saved by
    transmitting concurrently) while the group stays feasible; each addition
    must strictly improve the utility. Repeats until every node is grouped.
    """
    population = sorted(population)
    groups = []
    solo = {}
    for i in population:
        res = pricer.price((i,))
        if not res.feasible:
            raise InfeasibleInstanceError(i)
        solo[i] = res.slot
    unassigned = set(population)
    while unassigned:
        seed = max(unassigned, key=lambda i: (solo[i], -i))
        current = [seed]
        cur_res = pricer.price((seed,))
        cur_util = 0.0
        while True:
            best = None
            for k in sorted(unassigned - set(current)):
                trial = current + [k]
                if not _distinct_controllers(trial, pricer):
                    continue
                res = pricer.price(trial)
                if not res.feasible:
                    continue
                util = math.fsum(solo[i] for i in trial) - res.slot
                if util > cur_util and (best is None or util > best[0]):
                    best = (util, k, res)
            if best is None:
                break
            cur_util, k, cur_res = best
            current.append(k)
        groups.append((tuple(sorted(current)), cur_res))
        unassigned.difference_update(current)
    return sorted(groups, key=lambda g: g[0])


_ALLOCATORS = {"sna-mla": mla_allocate, "sna-mua": mua_allocate}


def _populations(inst: Instance, assignments, m: int):
    """Population of subframe m, keyed and ordered by period."""
    by_period: dict[int, list[int]] = {}
    for i, off in assignments.items():
        s = inst.periods[i]
        if m % s == off:
            by_period.setdefault(s, []).append(i)
    return [(s, sorted(by_period[s])) for s in sorted(by_period)]


def schedule(
    inst: Instance,
    gains: GainMatrix | None = None,
    strategy: str = "sna-mla",
    subframe_duration: float | None = None,
    pricer: SubsetPricer | None = None,
) -> tuple[Frame, ScheduleMetrics]:
    """Build a frame with sorted node assignment plus the chosen allocator.

    ``pricer`` defaults to discrete-rate pricing over ``gains``; pass an
    explicit pricer for the continuous model or fixed price tables.
    Deterministic for fixed inputs.
    """
    if strategy not in _ALLOCATORS:
        raise ValidationError(f"unknown strategy {strategy!r}")
    if pricer is None:
        if gains is None:
            raise ValidationError("either gains or a pricer is required")
        pricer = TablePricer(inst, gains)
    allocator = _ALLOCATORS[strategy]
    assignments = sna_assign(pricer)
    group_cache: dict[tuple, list] = {}
    per_subframe = []
    for m in range(inst.subframe_count):
        rows = []
        for s, population in _populations(inst, assignments, m):
            key = (s, tuple(population))
            if key not in group_cache:
                group_cache[key] = allocator(population, pricer)
            rows.extend(group_cache[key])
        per_subframe.append(tuple(rows))
    frame = Frame(inst.subframe_count, subframe_duration, assignments, tuple(per_subframe))
    return frame, compute_metrics(frame)


def _partitions_by_mask(members, pricer):
    """Minimum-cost partition of every subset of ``members`` into feasible groups.

    Returns ``slots[mask], groups[mask]`` where ``slots`` holds the tuple of
    group slot lengths (costs compare by exact fsum) and ``groups`` the chosen
    partition. Masks with no feasible partition hold None.
    """
    k = len(members)
    cand = []
    for size in range(1, len({pricer.controller(i) for i in members}) + 1):
        for combo in itertools.combinations(range(k), size):
            ids = tuple(members[c] for c in combo)
            if not _distinct_controllers(ids, pricer):
                continue
            res = pricer.price(ids)
            if res.feasible:
                cand.append((sum(1 << c for c in combo), ids, res))
    by_bit = {b: [c for c in cand if c[0] & (1 << b)] for b in range(k)}
    full = (1 << k) - 1
    slots: list[tuple[float, ...] | None] = [None] * (full + 1)
    groups: list[tuple | None] = [None] * (full + 1)
    slots[0], groups[0] = (), ()
    for mask in range(1, full + 1):
        low = (mask & -mask).bit_length() - 1
        best_cost = math.inf
        for cmask, ids, res in by_bit[low]:
            if cmask & mask != cmask:
                continue
            rest = mask ^ cmask
            if slots[rest] is None:
                continue
            trial_slots = slots[rest] + (res.slot,)
            cost = math.fsum(trial_slots)
            if cost < best_cost:
                best_cost = cost
                slots[mask] = trial_slots
                groups[mask] = groups[rest] + ((ids, res),)
    return slots, groups


def exhaustive_schedule(
    inst: Instance,
    gains: GainMatrix | None = None,
    subframe_duration: float | None = None,
    pricer: SubsetPricer | None = None,
    continuous: bool = False,
) -> tuple[Frame, ScheduleMetrics]:
    """Exact minimum of the maximum active length, for small instances.

    Searches every offset assignment combined with every partition of each
    subframe population into feasible controller-distinct groups (computed
    per period class by dynamic programming). Guarded to 8 nodes and 4
    subframes. ``continuous=True`` prices groups with the continuous-rate
    baseline instead of the discrete ladder.
    """
    if len(inst.nodes) > 8:
        raise ValidationError("exhaustive search limited to 8 nodes")
    if inst.subframe_count > 4:
        raise ValidationError("exhaustive search limited to 4 subframes")
    if pricer is None:
        if gains is None:
            raise ValidationError("either gains or a pricer is required")
        pricer = ContinuousPricer(inst, gains) if continuous else TablePricer(inst, gains)

    m_count = inst.subframe_count
    classes = []
    for s in sorted(set(inst.periods.values())):
        members = sorted(i for i in inst.periods if inst.periods[i] == s)
        slots, groups = _partitions_by_mask(members, pricer)
        classes.append((s, members, slots, groups))

    ids = [i for _, members, _, _ in classes for i in members]
    spans = [range(inst.periods[i]) for i in ids]

    def class_masks(offsets):
        """Per class, the member bitmask present in each subframe, or None if
        some subframe population admits no feasible partition."""
        out = []
        pos = 0
        for s, members, slots, _ in classes:
            offs = offsets[pos : pos + len(members)]
            pos += len(members)
            masks = []
            for m in range(m_count):
                mask = 0
                for k, off in enumerate(offs):
                    if m % s == off:
                        mask |= 1 << k
                if slots[mask] is None:
                    return None
                masks.append(mask)
            out.append(masks)
        return out

    best_obj = math.inf
    best_offsets = None
    for offsets in itertools.product(*spans):
        masks = class_masks(offsets)
        if masks is None:
            continue
        obj = 0.0
        for m in range(m_count):
            lengths = []
            for (_, _, slots, _), cmasks in zip(classes, masks):
                lengths.extend(slots[cmasks[m]])
            a_m = math.fsum(lengths)
            if a_m > obj:
                obj = a_m
                if obj >= best_obj:
                    break
        if obj < best_obj:
            best_obj = obj
            best_offsets = offsets
    if best_offsets is None:
        raise InfeasibleInstanceError()

    masks = class_masks(best_offsets)
    per_m_groups = []
    for m in range(m_count):
        rows = []
        for (_, _, _, groups), cmasks in zip(classes, masks):
            rows.extend(groups[cmasks[m]])
        per_m_groups.append(tuple(sorted(rows, key=lambda x: x[0])))
    frame = Frame(
        m_count,
        subframe_duration,
        {i: off for i, off in sorted(zip(ids, best_offsets))},
        tuple(per_m_groups),
    )
    return frame, compute_metrics(frame)
