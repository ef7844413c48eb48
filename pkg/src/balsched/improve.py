"""Violation-driven schedule repair via budgeted multiple-choice knapsack.

When monthly detail requirements exceed factory capacity, the repair loop
builds correction groups -- per building, a menu of mutually exclusive moves
(do nothing, shift the start left/right by a few days, or exchange two
buildings' placements) -- scores each move's profit (drop in the violation
measure) and cost, picks at most one move per group under a cost budget
(multiple-choice knapsack, greedy with an exact dynamic-programming oracle),
applies the selection, and repeats while the violation measure keeps
falling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .homebuilding import (
    DAYS_PER_MONTH,
    DETAIL_TYPES,
    Building,
    Project,
    TeamSchedule,
    building_requirement_table,
    team_schedule_violations,
)

VARIANT_KINDS = ("none", "shift_right", "shift_left", "exchange")


@dataclass(frozen=True)
class CorrectionVariant:
    """One correction move with its profit c and cost b.

    ``days`` is set for shifts (positive); ``buildings`` for exchanges.
    Profit may be negative for scored worsening moves; they stay in the
    menu but are never worth selecting over "none".
    """

    kind: str
    days: int | None = None
    buildings: tuple[str, str] | None = None
    profit: float = 0.0
    cost: float = 0.0

    def __post_init__(self):
        if self.kind not in VARIANT_KINDS:
            raise ValueError(f"unknown correction kind '{self.kind}'")
        if self.kind == "none" and (self.profit != 0 or self.cost != 0):
            raise ValueError("the 'none' variant must have zero profit and cost")
        if self.kind in ("shift_right", "shift_left"):
            if self.days is None or self.days <= 0:
                raise ValueError(f"{self.kind} needs a positive day count")
        if self.kind == "exchange":
            if self.buildings is None or len(self.buildings) != 2:
                raise ValueError("exchange needs exactly two building ids")
        if self.cost < 0:
            raise ValueError("variant cost must be non-negative")

    def describe(self, target: str | None = None) -> str:
        if self.kind == "none":
            return "none"
        if self.kind == "exchange":
            return f"exchange {self.buildings[0]}<->{self.buildings[1]}"
        arrow = "+" if self.kind == "shift_right" else "-"
        return f"{target or '?'} {arrow}{self.days}d"


NONE_VARIANT = CorrectionVariant(kind="none")


@dataclass(frozen=True)
class CorrectionGroup:
    """A menu of mutually exclusive corrections for one target."""

    index: int
    targets: tuple[str, ...]
    variants: tuple[CorrectionVariant, ...]

    def __post_init__(self):
        if not self.variants:
            raise ValueError(f"group {self.index}: needs at least one variant")
        if self.variants[0].kind != "none":
            raise ValueError(f"group {self.index}: first variant must be 'none'")


@dataclass(frozen=True)
class Selection:
    """One chosen variant per group (0 = none), in group order."""

    chosen: tuple[int, ...]
    total_profit: float
    total_cost: float

    def is_all_none(self) -> bool:
        return all(j == 0 for j in self.chosen)


@dataclass(frozen=True)
class BudgetedMCKP:
    """Multiple-choice knapsack: one variant per group, total cost <= budget.

    Groups are canonically sorted by (index, targets) so that selections do
    not depend on argument order.
    """

    groups: tuple[CorrectionGroup, ...]
    budget: float

    def __post_init__(self):
        if self.budget < 0:
            raise ValueError("budget must be non-negative")
        ordered = tuple(sorted(self.groups, key=lambda g: (g.index, g.targets)))
        object.__setattr__(self, "groups", ordered)


def _selection(problem: BudgetedMCKP, chosen: Sequence[int]) -> Selection:
    profit = sum(g.variants[j].profit for g, j in zip(problem.groups, chosen))
    cost = sum(g.variants[j].cost for g, j in zip(problem.groups, chosen))
    return Selection(chosen=tuple(chosen), total_profit=profit, total_cost=cost)


def mckp_greedy(problem: BudgetedMCKP) -> Selection:
    """Ratio-greedy selection: pack variants by profit/cost until budget.

    Candidates with non-positive profit are never taken; zero-cost positive
    profit ranks first. Ties break on (group index, variant index) so the
    result is deterministic.
    """
    candidates = []
    for gi, group in enumerate(problem.groups):
        for j, variant in enumerate(group.variants):
            if j == 0 or variant.profit <= 0:
                continue
            ratio = (
                float("inf") if variant.cost == 0
                else variant.profit / variant.cost
            )
            candidates.append((-ratio, gi, j, variant))
    candidates.sort(key=lambda item: item[:3])

    chosen = [0] * len(problem.groups)
    total_cost = 0.0
    for _neg_ratio, gi, j, variant in candidates:
        if chosen[gi] != 0:
            continue
        if total_cost + variant.cost <= problem.budget + 1e-9:
            chosen[gi] = j
            total_cost += variant.cost
    return _selection(problem, chosen)


#: mckp_exact refuses instances whose DP table would exceed this many cells.
EXACT_STATE_CAP = 2_000_000


def mckp_exact(problem: BudgetedMCKP, cost_scale: int = 10) -> Selection:
    """Exact optimum by dynamic programming over integer-scaled costs.

    Among optima, returns the lexicographically smallest variant-index
    tuple (group order, then variant index).

    Raises:
        ValueError: if some cost is not integral at ``cost_scale`` (within
            1e-6), or the state space exceeds the cap
            ("instance too large for exact oracle").
    """
    groups = problem.groups
    scaled: list[list[int]] = []
    for group in groups:
        row = []
        for variant in group.variants:
            s = variant.cost * cost_scale
            r = round(s)
            if abs(s - r) > 1e-6:
                raise ValueError(
                    f"cost {variant.cost} is not integral at scale {cost_scale}"
                )
            row.append(int(r))
        scaled.append(row)
    budget_units = int(problem.budget * cost_scale + 1e-9)

    if (len(groups) + 1) * (budget_units + 1) > EXACT_STATE_CAP:
        raise ValueError("instance too large for exact oracle")

    neg = float("-inf")
    # best[i][w]: max profit achievable by groups i.. with w cost units left
    best = [[neg] * (budget_units + 1) for _ in range(len(groups) + 1)]
    best[len(groups)] = [0.0] * (budget_units + 1)
    for i in range(len(groups) - 1, -1, -1):
        for w in range(budget_units + 1):
            value = neg
            for j, variant in enumerate(groups[i].variants):
                b = scaled[i][j]
                if b <= w and best[i + 1][w - b] != neg:
                    value = max(value, variant.profit + best[i + 1][w - b])
            best[i][w] = value

    if best[0][budget_units] == neg:
        raise ValueError("no feasible selection within budget")

    chosen = []
    w = budget_units
    for i, group in enumerate(groups):
        for j, variant in enumerate(group.variants):
            b = scaled[i][j]
            if b <= w and variant.profit + best[i + 1][w - b] == best[i][w]:
                chosen.append(j)
                w -= b
                break
    return _selection(problem, chosen)


# --- violation measure and cascade caching ---------------------------------

@dataclass(frozen=True)
class ScoreConfig:
    """Knobs of the default scoring model."""

    day_cost: float = 0.1
    exchange_cost: float = 2.0
    weights: tuple[float, ...] = (1.0,) * len(DETAIL_TYPES)
    eps: float = 1e-9
    shift_steps: tuple[int, ...] = (3, 7, 14, 21)


DEFAULT_SCORE_CONFIG = ScoreConfig()


def capacity_vector(capacity: Mapping[str, float]) -> np.ndarray:
    """Per-detail capacity array; details without a stated capacity are
    unconstrained (+inf)."""
    for detail in capacity:
        if detail not in DETAIL_TYPES:
            raise ValueError(f"unknown detail type '{detail}'")
    return np.array(
        [capacity.get(d, float("inf")) for d in DETAIL_TYPES], dtype=float
    )


class CascadeCache:
    """Memo of per-building isolated requirement tables, keyed by start.

    Requirement tables are linear in placements, so what-if tables for
    shifted/exchanged buildings are sums of cached blocks.
    """

    def __init__(self, project: Project):
        self.project = project
        self._tables: dict[tuple[str, float], np.ndarray] = {}

    def building_table(self, building_id: str, start: float) -> np.ndarray:
        key = (building_id, round(start, 9))
        if key not in self._tables:
            building = self.project.buildings[building_id]
            self._tables[key] = building_requirement_table(
                self.project, building, start
            )
        return self._tables[key]

    def schedule_table(self, schedule: TeamSchedule) -> np.ndarray:
        total = np.zeros((self.project.horizon_months, len(DETAIL_TYPES)))
        for _team, building_id, start in schedule.placements():
            total += self.building_table(building_id, start)
        return total


def violation_measure(
    table: np.ndarray,
    cap: np.ndarray,
    config: ScoreConfig = DEFAULT_SCORE_CONFIG,
) -> float:
    """Aggregate capacity excess: sum over months and details of
    weight * max(0, gamma - cap) / max(cap, eps)."""
    excess = np.maximum(0.0, table - cap)
    denom = np.maximum(cap, config.eps)
    return float(np.sum(np.asarray(config.weights) * excess / denom))


def max_violation(table: np.ndarray, cap: np.ndarray) -> float:
    """Largest single-cell capacity excess."""
    return float(np.max(np.maximum(0.0, table - cap)))


def violated_months(
    table: np.ndarray, cap: np.ndarray, months: Sequence[int] | None = None
) -> tuple[int, ...]:
    """1-based months in which any detail requirement exceeds capacity."""
    if months is None:
        months = range(1, table.shape[0] + 1)
    over = (table - cap > 0).any(axis=1)
    return tuple(m for m, flag in zip(months, over) if flag)


# --- moves: feasibility, scoring, application -------------------------------

def _placement_of(schedule: TeamSchedule, building_id: str):
    for team, bid, start in schedule.placements():
        if bid == building_id:
            return team, start
    raise ValueError(
        f"variant not applicable: building {building_id} is not placed"
    )


def _variant_moves(
    schedule: TeamSchedule, variant: CorrectionVariant, target: str | None
) -> list[tuple[str, str, float, str, float]]:
    """(building, old team, old start, new team, new start) for a variant."""
    if variant.kind == "none":
        return []
    if variant.kind in ("shift_right", "shift_left"):
        if target is None:
            raise ValueError("shift variant needs a target building")
        team, start = _placement_of(schedule, target)
        delta = variant.days / DAYS_PER_MONTH
        new_start = start + delta if variant.kind == "shift_right" else start - delta
        return [(target, team, start, team, new_start)]
    b1, b2 = variant.buildings
    if b1 == b2:
        raise ValueError(f"degenerate exchange: {b1} with itself")
    team1, start1 = _placement_of(schedule, b1)
    team2, start2 = _placement_of(schedule, b2)
    return [(b1, team1, start1, team2, start2), (b2, team2, start2, team1, start1)]


def _moved_schedule(
    schedule: TeamSchedule,
    moves: Sequence[tuple[str, str, float, str, float]],
) -> TeamSchedule:
    assignments = {
        team: list(schedule.assignments.get(team, ()))
        for team in schedule.teams
    }
    for building_id, old_team, old_start, new_team, new_start in moves:
        assignments[old_team] = [
            (bid, s) for bid, s in assignments[old_team] if bid != building_id
        ]
        assignments[new_team].append((building_id, new_start))
    for team in assignments:
        assignments[team].sort(key=lambda p: (p[1], p[0]))
    return TeamSchedule(
        teams=schedule.teams,
        assignments={t: tuple(p) for t, p in assignments.items()},
    )


def _variant_feasible(
    project: Project,
    schedule: TeamSchedule,
    variant: CorrectionVariant,
    target: str | None,
) -> bool:
    try:
        moves = _variant_moves(schedule, variant, target)
    except ValueError:
        return False
    for _bid, _ot, _os, _nt, new_start in moves:
        building = project.buildings[_bid]
        if new_start < 0:
            return False
        if new_start + building.assembly_duration > project.horizon_months:
            return False
    candidate = _moved_schedule(schedule, moves)
    return not team_schedule_violations(candidate, project.buildings)


def score_variant(
    project: Project,
    schedule: TeamSchedule,
    variant: CorrectionVariant,
    capacity: Mapping[str, float] | np.ndarray,
    config: ScoreConfig = DEFAULT_SCORE_CONFIG,
    target: str | None = None,
    cache: CascadeCache | None = None,
) -> tuple[float, float]:
    """(profit, cost) of one move: profit is the violation-measure drop.

    Profit can be negative for worsening moves. Cost follows the config
    model: day_cost * |days| for shifts, exchange_cost for exchanges.

    Raises:
        ValueError: for a variant that cannot be applied to this schedule.
    """
    if variant.kind == "none":
        return 0.0, 0.0
    cap = capacity if isinstance(capacity, np.ndarray) else capacity_vector(capacity)
    cache = cache or CascadeCache(project)
    moves = _variant_moves(schedule, variant, target)
    base = cache.schedule_table(schedule)
    candidate = base.copy()
    for building_id, _ot, old_start, _nt, new_start in moves:
        candidate -= cache.building_table(building_id, old_start)
        candidate += cache.building_table(building_id, new_start)
    profit = violation_measure(base, cap, config) - violation_measure(
        candidate, cap, config
    )
    if variant.kind == "exchange":
        cost = config.exchange_cost
    else:
        cost = config.day_cost * variant.days
    return profit, cost


def generate_correction_groups(
    project: Project,
    schedule: TeamSchedule,
    capacity: Mapping[str, float] | np.ndarray,
    config: ScoreConfig = DEFAULT_SCORE_CONFIG,
    cache: CascadeCache | None = None,
) -> list[CorrectionGroup]:
    """Build one scored correction group per building active in a violated
    month: none + feasible shifts (both directions) + feasible exchanges.

    Returns an empty list when no month exceeds capacity.
    """
    cap = capacity if isinstance(capacity, np.ndarray) else capacity_vector(capacity)
    cache = cache or CascadeCache(project)
    table = cache.schedule_table(schedule)
    months = violated_months(table, cap)
    if not months:
        return []

    placements = {bid: (team, start) for team, bid, start in schedule.placements()}

    def overlaps_violated(building_id: str) -> bool:
        building = project.buildings[building_id]
        start = placements[building_id][1]
        end = start + building.assembly_duration
        return any(start < m and end > m - 1 for m in months)

    targets = sorted(bid for bid in placements if overlaps_violated(bid))
    all_placed = sorted(placements)

    groups: list[CorrectionGroup] = []
    for index, target in enumerate(targets, start=1):
        variants: list[CorrectionVariant] = [NONE_VARIANT]
        for kind in ("shift_right", "shift_left"):
            for days in config.shift_steps:
                raw = CorrectionVariant(kind=kind, days=days)
                if not _variant_feasible(project, schedule, raw, target):
                    continue
                profit, cost = score_variant(
                    project, schedule, raw, cap, config, target, cache
                )
                variants.append(
                    CorrectionVariant(
                        kind=kind, days=days, profit=profit, cost=cost
                    )
                )
        for partner in all_placed:
            if partner == target:
                continue
            # An exchange is one move on a pair; list it only in the first
            # group that can host it, so a selection can never pick the
            # same swap twice and undo itself.
            if partner in targets and partner < target:
                continue
            raw = CorrectionVariant(
                kind="exchange", buildings=(target, partner)
            )
            if not _variant_feasible(project, schedule, raw, target):
                continue
            profit, cost = score_variant(
                project, schedule, raw, cap, config, target, cache
            )
            variants.append(
                CorrectionVariant(
                    kind="exchange",
                    buildings=(target, partner),
                    profit=profit,
                    cost=cost,
                )
            )
        groups.append(
            CorrectionGroup(
                index=index, targets=(target,), variants=tuple(variants)
            )
        )
    return groups


def apply_selection(
    schedule: TeamSchedule,
    problem: BudgetedMCKP,
    selection: Selection,
    buildings: Mapping[str, Building],
) -> TeamSchedule:
    """Apply the chosen variants, in group order, to a copy of the schedule.

    Shifts move the target's start by days/30 months; exchanges swap the two
    buildings' (team, start) placements. The building set and all durations
    are untouched.

    Raises:
        ValueError: on a degenerate exchange, or when the result breaks
            team-schedule rules (message names the offending team).
    """
    current = schedule
    for group, j in zip(problem.groups, selection.chosen):
        variant = group.variants[j]
        if variant.kind == "none":
            continue
        target = group.targets[0] if group.targets else None
        moves = _variant_moves(current, variant, target)
        current = _moved_schedule(current, moves)
    violations = team_schedule_violations(current, buildings)
    if violations:
        raise ValueError("; ".join(violations))
    return current


# --- the repair loop --------------------------------------------------------

def _compose_selection(
    project: Project,
    schedule: TeamSchedule,
    problem: BudgetedMCKP,
    selection: Selection,
) -> tuple[Selection, TeamSchedule]:
    """Reduce a selection to a jointly applicable one, in group order.

    Variants are scored and budget-checked independently, so two chosen
    moves can collide — e.g. exchanges with a common partner, or opposing
    shifts on one team's lane. Walking groups in index order, each chosen
    variant is kept only if its moved buildings are untouched so far and it
    still applies cleanly to the schedule as moved so far; otherwise that
    group falls back to its none-variant. Earlier groups therefore take
    priority, which keeps the outcome deterministic.
    """
    chosen = list(selection.chosen)
    current = schedule
    moved: set[str] = set()
    for pos, (group, j) in enumerate(zip(problem.groups, selection.chosen)):
        variant = group.variants[j]
        if variant.kind == "none":
            continue
        target = group.targets[0] if group.targets else None
        touched = (
            set(variant.buildings)
            if variant.kind == "exchange"
            else {target}
        )
        if touched & moved or not _variant_feasible(project, current, variant, target):
            chosen[pos] = 0
            continue
        current = _moved_schedule(current, _variant_moves(current, variant, target))
        moved |= touched
    profit = sum(g.variants[j].profit for g, j in zip(problem.groups, chosen))
    cost = sum(g.variants[j].cost for g, j in zip(problem.groups, chosen))
    return (
        Selection(chosen=tuple(chosen), total_profit=profit, total_cost=cost),
        current,
    )


@dataclass(frozen=True)
class ImproveParams:
    """Loop knobs: per-iteration correction budget and iteration cap."""

    budget: float = 5.0
    max_iters: int = 10


@dataclass(frozen=True)
class IterationRecord:
    """One loop pass: measures before, the selection, measure after."""

    iteration: int
    v_before: float
    max_violation: float
    selection: Selection
    groups: tuple[CorrectionGroup, ...]
    v_after: float
    accepted: bool


@dataclass(frozen=True)
class LoopResult:
    """Final schedule plus the full per-iteration trace."""

    schedule: TeamSchedule
    trace: tuple[IterationRecord, ...]
    stop_reason: str

    def v_sequence(self) -> list[float]:
        return [record.v_before for record in self.trace] + (
            [self.trace[-1].v_after] if self.trace else []
        )


def improvement_loop(
    project: Project,
    schedule: TeamSchedule,
    capacity: Mapping[str, float],
    params: ImproveParams = ImproveParams(),
    config: ScoreConfig = DEFAULT_SCORE_CONFIG,
) -> LoopResult:
    """Repair the schedule until balanced, stuck, or out of iterations.

    Every iteration: find violated months, build and score correction
    groups, select moves by greedy knapsack under the per-iteration budget,
    compose the jointly applicable subset of the selection (earlier groups
    win conflicts), apply it, and keep the result only if the violation
    measure strictly dropped. The recorded measure sequence is therefore
    monotone non-increasing. An already balanced schedule records zero
    iterations; a zero budget stops after one recorded iteration with the
    schedule unchanged.
    """
    cap = capacity_vector(dict(capacity))
    cache = CascadeCache(project)
    current = schedule
    table = cache.schedule_table(current)
    v = violation_measure(table, cap, config)
    trace: list[IterationRecord] = []
    stop_reason = "max iterations"

    for iteration in range(1, params.max_iters + 1):
        if v <= 1e-12:
            stop_reason = "balanced"
            break
        groups = generate_correction_groups(project, current, cap, config, cache)
        if not groups:
            stop_reason = "no correction candidates"
            break
        problem = BudgetedMCKP(groups=tuple(groups), budget=params.budget)
        selection = mckp_greedy(problem)
        worst = max_violation(table, cap)
        if selection.total_profit <= 1e-12:
            trace.append(
                IterationRecord(
                    iteration=iteration,
                    v_before=v,
                    max_violation=worst,
                    selection=selection,
                    groups=problem.groups,
                    v_after=v,
                    accepted=False,
                )
            )
            stop_reason = "no improving selection"
            break
        applied, candidate = _compose_selection(project, current, problem, selection)
        if applied.is_all_none():
            trace.append(
                IterationRecord(
                    iteration=iteration,
                    v_before=v,
                    max_violation=worst,
                    selection=applied,
                    groups=problem.groups,
                    v_after=v,
                    accepted=False,
                )
            )
            stop_reason = "selection not applicable"
            break
        new_table = cache.schedule_table(candidate)
        new_v = violation_measure(new_table, cap, config)
        accepted = new_v < v - 1e-12
        trace.append(
            IterationRecord(
                iteration=iteration,
                v_before=v,
                max_violation=worst,
                selection=applied,
                groups=problem.groups,
                v_after=new_v if accepted else v,
                accepted=accepted,
            )
        )
        if not accepted:
            stop_reason = "no decrease in violation measure"
            break
        current, table, v = candidate, new_table, new_v
    else:
        stop_reason = "max iterations"

    if not trace and v <= 1e-12:
        stop_reason = "balanced"
    return LoopResult(schedule=current, trace=tuple(trace), stop_reason=stop_reason)
