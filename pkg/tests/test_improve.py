"""Correction variants, knapsack selectors, and the repair loop."""

import random

import numpy as np
import pytest

from balsched.fixtures import build_fixture
from balsched.homebuilding import TeamSchedule, horizon_requirement_table
from balsched.improve import (
    DEFAULT_SCORE_CONFIG,
    NONE_VARIANT,
    BudgetedMCKP,
    CorrectionGroup,
    CorrectionVariant,
    ImproveParams,
    ScoreConfig,
    Selection,
    apply_selection,
    capacity_vector,
    generate_correction_groups,
    improvement_loop,
    max_violation,
    mckp_exact,
    mckp_greedy,
    score_variant,
    violated_months,
    violation_measure,
)

from oracles import mckp_enumerate


@pytest.fixture(scope="module")
def kope():
    return build_fixture("kope-1982")


def group(index, items, target="x"):
    """items: list of (profit, cost) for the non-none variants."""
    variants = [NONE_VARIANT]
    for days, (profit, cost) in enumerate(items, start=1):
        variants.append(
            CorrectionVariant(
                kind="shift_right", days=days, profit=profit, cost=cost
            )
        )
    return CorrectionGroup(index=index, targets=(target,), variants=tuple(variants))


# --- variant / group validation ----------------------------------------------

def test_none_variant_must_be_free():
    with pytest.raises(ValueError):
        CorrectionVariant(kind="none", profit=1.0)


def test_shift_needs_positive_days():
    with pytest.raises(ValueError):
        CorrectionVariant(kind="shift_left", days=0)
    with pytest.raises(ValueError):
        CorrectionVariant(kind="shift_right")


def test_exchange_needs_two_buildings():
    with pytest.raises(ValueError):
        CorrectionVariant(kind="exchange", buildings=("a",))


def test_negative_cost_rejected_negative_profit_kept():
    with pytest.raises(ValueError):
        CorrectionVariant(kind="shift_right", days=1, cost=-0.1)
    worse = CorrectionVariant(kind="shift_right", days=1, profit=-2.0, cost=0.1)
    assert worse.profit == -2.0


def test_group_first_variant_must_be_none():
    with pytest.raises(ValueError, match="first variant must be 'none'"):
        CorrectionGroup(
            index=1,
            targets=("x",),
            variants=(CorrectionVariant(kind="shift_right", days=1),),
        )


def test_problem_sorts_groups_canonically():
    g2, g1 = group(2, [(1.0, 1.0)]), group(1, [(1.0, 1.0)])
    problem = BudgetedMCKP(groups=(g2, g1), budget=1.0)
    assert [g.index for g in problem.groups] == [1, 2]


# --- selectors on the catalogue fixture ----------------------------------------

def test_catalogue_selection_budget_3(kope):
    problem = BudgetedMCKP(groups=kope.correction_groups, budget=3.0)
    for select in (mckp_greedy, mckp_exact):
        sel = select(problem)
        assert sel.chosen == (0, 3, 3, 0)
        assert sel.total_profit == pytest.approx(5.0)
        assert sel.total_cost == pytest.approx(3.0)


def test_catalogue_chosen_moves_are_the_14_and_21_day_shifts(kope):
    problem = BudgetedMCKP(groups=kope.correction_groups, budget=3.0)
    sel = mckp_greedy(problem)
    picked = [
        (g.targets[0], g.variants[j].kind, g.variants[j].days)
        for g, j in zip(problem.groups, sel.chosen)
        if g.variants[j].kind != "none"
    ]
    assert picked == [("a7", "shift_right", 14), ("a8", "shift_right", 21)]


def test_catalogue_budget_2_8_drops_to_profit_4_5(kope):
    problem = BudgetedMCKP(groups=kope.correction_groups, budget=2.8)
    sel = mckp_exact(problem)
    assert sel.chosen == (0, 2, 3, 0)
    assert sel.total_profit == pytest.approx(4.5)


def test_zero_budget_selects_all_none(kope):
    problem = BudgetedMCKP(groups=kope.correction_groups, budget=0.0)
    assert mckp_greedy(problem).is_all_none()
    assert mckp_exact(problem).is_all_none()


def test_big_budget_takes_max_profit_everywhere(kope):
    total_max_cost = sum(
        max(v.cost for v in g.variants) for g in kope.correction_groups
    )
    problem = BudgetedMCKP(groups=kope.correction_groups, budget=total_max_cost)
    sel = mckp_exact(problem)
    expected = sum(max(v.profit for v in g.variants) for g in kope.correction_groups)
    assert sel.total_profit == pytest.approx(expected)


def test_greedy_dominant_item():
    g = group(1, [(1.0, 1.0), (3.0, 1.0)])
    sel = mckp_greedy(BudgetedMCKP(groups=(g,), budget=1.0))
    assert sel.chosen == (2,)
    assert sel.total_profit == 3.0


def test_greedy_takes_free_items_first():
    g = group(1, [(0.5, 0.0), (10.0, 99.0)])
    sel = mckp_greedy(BudgetedMCKP(groups=(g,), budget=1.0))
    assert sel.chosen == (1,)


def test_exact_requires_integral_scaled_costs():
    g = group(1, [(1.0, 0.25)])
    with pytest.raises(ValueError, match="not integral at scale 10"):
        mckp_exact(BudgetedMCKP(groups=(g,), budget=1.0))
    # a finer scale fixes it
    sel = mckp_exact(BudgetedMCKP(groups=(g,), budget=1.0), cost_scale=100)
    assert sel.chosen == (1,)


def test_exact_state_cap():
    g = group(1, [(1.0, 1_000_000.0)])
    with pytest.raises(ValueError, match="instance too large for exact oracle"):
        mckp_exact(BudgetedMCKP(groups=(g,) * 4, budget=4_000_000.0))


def test_selector_determinism_under_group_permutation(kope):
    base = BudgetedMCKP(groups=kope.correction_groups, budget=3.0)
    shuffled = BudgetedMCKP(
        groups=tuple(reversed(kope.correction_groups)), budget=3.0
    )
    assert mckp_greedy(base) == mckp_greedy(shuffled)
    assert mckp_exact(base) == mckp_exact(shuffled)


def random_problem(rng):
    groups = []
    for index in range(1, rng.randint(2, 6) + 1):
        items = [
            (round(rng.uniform(0.0, 5.0), 2), round(rng.uniform(0.0, 3.0), 1))
            for _ in range(rng.randint(1, 4))
        ]
        groups.append(group(index, items, target=f"t{index}"))
    budget = round(rng.uniform(0.0, 6.0), 1)
    return BudgetedMCKP(groups=tuple(groups), budget=budget)


def test_greedy_never_beats_exact_and_exact_matches_enumeration():
    rng = random.Random(20260817)
    for _ in range(120):
        problem = random_problem(rng)
        greedy, exact = mckp_greedy(problem), mckp_exact(problem)
        plain = [
            [(v.profit, v.cost) for v in g.variants] for g in problem.groups
        ]
        best_profit, best_choice = mckp_enumerate(plain, problem.budget)
        assert greedy.total_profit <= exact.total_profit + 1e-9
        assert exact.total_profit == pytest.approx(best_profit)
        assert exact.chosen == best_choice
        assert greedy.total_cost <= problem.budget + 1e-9
        assert exact.total_cost <= problem.budget + 1e-9


# --- scoring and group generation -----------------------------------------------

def test_capacity_vector_defaults_to_infinity():
    cap = capacity_vector({"d1": 1480.0})
    assert cap[0] == 1480.0
    assert np.all(np.isinf(cap[1:]))
    with pytest.raises(ValueError, match="unknown detail"):
        capacity_vector({"d99": 1.0})


def test_violation_measure_zero_when_under_capacity(kope):
    table = horizon_requirement_table(kope.project, kope.team_schedule).to_array()
    roomy = capacity_vector({"d1": 5000.0})
    assert violation_measure(table, roomy, DEFAULT_SCORE_CONFIG) == 0.0
    tight = capacity_vector({"d1": 1480.0})
    assert violation_measure(table, tight, DEFAULT_SCORE_CONFIG) > 0.0


def test_violated_months_on_fixture(kope):
    table = horizon_requirement_table(kope.project, kope.team_schedule).to_array()
    cap = capacity_vector({"d1": 1480.0})
    assert violated_months(table, cap) == (11, 12, 13)
    assert max_violation(table, cap) == pytest.approx(1934.60 - 1480.0, abs=0.01)


def test_score_none_variant_is_free(kope):
    profit, cost = score_variant(
        kope.project, kope.team_schedule, NONE_VARIANT, kope.capacity
    )
    assert (profit, cost) == (0.0, 0.0)


def test_score_shift_cost_is_a_dime_per_day(kope):
    variant = CorrectionVariant(kind="shift_right", days=7)
    _, cost = score_variant(
        kope.project, kope.team_schedule, variant, kope.capacity, target="a8"
    )
    assert cost == pytest.approx(0.7)


def test_score_late_shift_of_a8_pays_off(kope):
    variant = CorrectionVariant(kind="shift_right", days=21)
    profit, cost = score_variant(
        kope.project, kope.team_schedule, variant, kope.capacity, target="a8"
    )
    assert profit > 0.0
    assert cost == pytest.approx(2.1)


def test_score_unplaced_target_is_an_error(kope):
    variant = CorrectionVariant(kind="shift_right", days=7)
    with pytest.raises(ValueError, match="not placed"):
        score_variant(
            kope.project, kope.team_schedule, variant, kope.capacity, target="zz"
        )


def test_generated_groups_cover_peak_buildings(kope):
    groups = generate_correction_groups(
        kope.project, kope.team_schedule, kope.capacity
    )
    by_target = {g.targets[0]: g for g in groups}
    # buildings active in the violated months 11..13 all get a group
    assert set(by_target) == {"a2", "a3", "a4", "a5", "a6", "a7", "a8", "a9"}
    for target in ("a7", "a8"):
        kinds = {(v.kind, v.days) for v in by_target[target].variants}
        assert ("shift_right", 14) in kinds and ("shift_right", 21) in kinds
    # group indices are 1..n and every menu starts with none
    assert [g.index for g in groups] == list(range(1, len(groups) + 1))
    assert all(g.variants[0].kind == "none" for g in groups)


def test_generated_exchange_pairs_are_not_duplicated(kope):
    groups = generate_correction_groups(
        kope.project, kope.team_schedule, kope.capacity
    )
    pairs = [
        tuple(sorted(v.buildings))
        for g in groups
        for v in g.variants
        if v.kind == "exchange"
    ]
    assert len(pairs) == len(set(pairs))


def test_no_groups_when_capacity_is_roomy(kope):
    assert (
        generate_correction_groups(
            kope.project, kope.team_schedule, {"d1": 5000.0}
        )
        == []
    )


def test_generated_shifts_respect_horizon(kope):
    groups = generate_correction_groups(
        kope.project, kope.team_schedule, kope.capacity
    )
    # a9 runs 11.0..18.8; right shifts of 7+ days would cross month 19
    a9 = next(g for g in groups if g.targets == ("a9",))
    right_steps = {v.days for v in a9.variants if v.kind == "shift_right"}
    assert right_steps == {3}


# --- applying selections ----------------------------------------------------------

def test_apply_all_none_is_identity(kope):
    problem = BudgetedMCKP(groups=kope.correction_groups, budget=0.0)
    sel = mckp_greedy(problem)
    out = apply_selection(
        kope.team_schedule, problem, sel, kope.project.buildings
    )
    assert out == kope.team_schedule


def test_apply_catalogue_selection_moves_a7_a8(kope):
    problem = BudgetedMCKP(groups=kope.correction_groups, budget=3.0)
    sel = mckp_greedy(problem)
    out = apply_selection(kope.team_schedule, problem, sel, kope.project.buildings)
    starts = {bid: start for _t, bid, start in out.placements()}
    assert starts["a7"] == pytest.approx(11.8 + 14 / 30)
    assert starts["a8"] == pytest.approx(9.7 + 21 / 30)
    # everything else untouched
    before = {bid: s for _t, bid, s in kope.team_schedule.placements()}
    for bid, start in before.items():
        if bid not in ("a7", "a8"):
            assert starts[bid] == start


def test_apply_preserves_buildings_and_durations(kope):
    problem = BudgetedMCKP(groups=kope.correction_groups, budget=3.0)
    sel = mckp_greedy(problem)
    out = apply_selection(kope.team_schedule, problem, sel, kope.project.buildings)
    assert sorted(b for _t, b, _s in out.placements()) == sorted(
        b for _t, b, _s in kope.team_schedule.placements()
    )


def test_apply_exchange_swaps_slots(kope):
    g = CorrectionGroup(
        index=1,
        targets=("a3",),
        variants=(
            NONE_VARIANT,
            CorrectionVariant(kind="exchange", buildings=("a3", "a6"), profit=1.0, cost=1.0),
        ),
    )
    problem = BudgetedMCKP(groups=(g,), budget=1.0)
    sel = Selection(chosen=(1,), total_profit=1.0, total_cost=1.0)
    out = apply_selection(kope.team_schedule, problem, sel, kope.project.buildings)
    placements = {bid: (team, start) for team, bid, start in out.placements()}
    assert placements["a3"] == ("P3", 9.5)
    assert placements["a6"] == ("P4", 6.5)


def test_apply_degenerate_exchange(kope):
    g = CorrectionGroup(
        index=1,
        targets=("a3",),
        variants=(
            NONE_VARIANT,
            CorrectionVariant(kind="exchange", buildings=("a3", "a3"), profit=1.0, cost=1.0),
        ),
    )
    problem = BudgetedMCKP(groups=(g,), budget=1.0)
    sel = Selection(chosen=(1,), total_profit=1.0, total_cost=1.0)
    with pytest.raises(ValueError, match="degenerate exchange"):
        apply_selection(kope.team_schedule, problem, sel, kope.project.buildings)


def test_apply_overlap_names_the_team(kope):
    # pushing a4 (P2, ends 11.8) right by 21 days runs it into a7 (starts 11.8)
    g = CorrectionGroup(
        index=1,
        targets=("a4",),
        variants=(
            NONE_VARIANT,
            CorrectionVariant(kind="shift_right", days=21, profit=1.0, cost=1.0),
        ),
    )
    problem = BudgetedMCKP(groups=(g,), budget=1.0)
    sel = Selection(chosen=(1,), total_profit=1.0, total_cost=1.0)
    with pytest.raises(ValueError, match="team P2"):
        apply_selection(kope.team_schedule, problem, sel, kope.project.buildings)


# --- the loop ---------------------------------------------------------------------

def test_loop_balances_fixture(kope):
    result = improvement_loop(
        kope.project, kope.team_schedule, kope.capacity, kope.improve_params
    )
    assert result.stop_reason == "balanced"
    vs = result.v_sequence()
    assert vs[0] > 0 and vs[-1] == 0.0
    assert all(b <= a + 1e-12 for a, b in zip(vs, vs[1:]))


def test_loop_result_schedule_is_valid(kope):
    from balsched.homebuilding import team_schedule_violations

    result = improvement_loop(
        kope.project, kope.team_schedule, kope.capacity, kope.improve_params
    )
    assert team_schedule_violations(result.schedule, kope.project.buildings) == []


def test_loop_on_balanced_instance_records_nothing(kope):
    result = improvement_loop(
        kope.project, kope.team_schedule, {"d1": 5000.0}, ImproveParams()
    )
    assert result.stop_reason == "balanced"
    assert result.trace == ()
    assert result.schedule == kope.team_schedule


def test_loop_with_zero_budget_stops_after_one_recorded_iteration(kope):
    result = improvement_loop(
        kope.project,
        kope.team_schedule,
        kope.capacity,
        ImproveParams(budget=0.0, max_iters=10),
    )
    assert len(result.trace) == 1
    assert result.stop_reason == "no improving selection"
    assert result.schedule == kope.team_schedule


def test_loop_respects_max_iters(kope):
    result = improvement_loop(
        kope.project,
        kope.team_schedule,
        kope.capacity,
        ImproveParams(budget=5.0, max_iters=1),
    )
    assert len(result.trace) == 1
    assert result.stop_reason == "max iterations"


def test_loop_is_deterministic(kope):
    runs = [
        improvement_loop(
            kope.project, kope.team_schedule, kope.capacity, kope.improve_params
        )
        for _ in range(2)
    ]
    assert runs[0].schedule == runs[1].schedule
    assert runs[0].v_sequence() == runs[1].v_sequence()
    assert runs[0].stop_reason == runs[1].stop_reason


def test_loop_trace_profit_only_counts_applied_moves(kope):
    result = improvement_loop(
        kope.project, kope.team_schedule, kope.capacity, kope.improve_params
    )
    for record in result.trace:
        recomputed = sum(
            g.variants[j].profit
            for g, j in zip(record.groups, record.selection.chosen)
        )
        assert record.selection.total_profit == pytest.approx(recomputed)
        assert record.selection.total_cost <= kope.improve_params.budget + 1e-9
