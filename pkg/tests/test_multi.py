"""Weighted k-facility DP: candidate sets, costs, and exact agreement."""

import pytest

from frealloc import (
    BudgetError,
    Instance,
    SplitMix64,
    StructureError,
    WeightedInstance,
    candidate_set,
    gen_random,
    lift_instance,
    optimal_cost,
    oracle_optimal_weighted,
    solve_multi_dp,
    total_cost,
    weighted_cost,
)

EX1 = Instance(3, 3, 3, ((3, 7, 7), (4, 5, 6), (1, 1, 2)))
W_TWO_AGENTS = WeightedInstance(2, 1, 1, (0,), (1, 3), ((0, 10),))


def _random_weighted(rng: SplitMix64, n_max=4, t_max=3, k_max=2, coord_max=5, w_max=3):
    n = 1 + rng.below(n_max)
    T = 1 + rng.below(t_max)
    k = 1 + rng.below(k_max)
    inner = SplitMix64(rng.next_u64())
    starts = tuple(sorted(inner.below(coord_max + 1) for _ in range(k)))
    weights = tuple(inner.below(w_max + 1) for _ in range(n))
    stages = tuple(
        tuple(inner.below(coord_max + 1) for _ in range(n)) for _ in range(T)
    )
    return WeightedInstance(n, T, k, starts, weights, stages)


def test_candidate_set_contents():
    assert candidate_set(lift_instance(EX1)) == (1, 2, 3, 4, 5, 6, 7)
    single = WeightedInstance(1, 1, 1, (0,), (1,), ((0,),))
    assert candidate_set(single) == (0,)
    spread = WeightedInstance(1, 2, 2, (0, 10), (1,), ((5,), (5,)))
    assert candidate_set(spread) == (0, 5, 10)


def test_weighted_cost_reduces_to_total_cost():
    rng = SplitMix64(71)
    for _ in range(40):
        inst = gen_random(1 + rng.below(4), 1 + rng.below(3), 6, rng.next_u64())
        lifted = lift_instance(inst)
        sol = tuple((y,) for y in (inst.start,) * inst.T)
        assert weighted_cost(lifted, sol) == total_cost(inst, (inst.start,) * inst.T)


def test_weighted_cost_known_values():
    assert weighted_cost(W_TWO_AGENTS, ((10,),)) == 20
    static = WeightedInstance(2, 2, 2, (1, 4), (1, 1), ((1, 4), (1, 4)))
    assert weighted_cost(static, ((1, 4), (1, 4))) == 0


def test_weighted_cost_validates_shape():
    with pytest.raises(StructureError):
        weighted_cost(W_TWO_AGENTS, ((10,), (10,)))
    with pytest.raises(StructureError):
        weighted_cost(W_TWO_AGENTS, ((10, 11),))
    two = WeightedInstance(1, 1, 2, (0, 1), (1,), ((0,),))
    with pytest.raises(StructureError, match="sorted"):
        weighted_cost(two, ((1, 0),))


def test_weighted_instance_validation():
    with pytest.raises(StructureError, match="sorted"):
        WeightedInstance(1, 1, 2, (5, 0), (1,), ((0,),))
    with pytest.raises(StructureError, match="negative"):
        WeightedInstance(1, 1, 1, (0,), (-1,), ((0,),))
    with pytest.raises(StructureError):
        WeightedInstance(2, 1, 1, (0,), (1,), ((0, 1),))


def test_solve_known_instances():
    lifted = lift_instance(EX1)
    sol = solve_multi_dp(lifted)
    assert weighted_cost(lifted, sol) == 15

    sol = solve_multi_dp(W_TWO_AGENTS)
    assert sol == ((10,),)
    assert weighted_cost(W_TWO_AGENTS, sol) == 20

    static = WeightedInstance(2, 2, 2, (1, 4), (1, 1), ((1, 4), (1, 4)))
    assert weighted_cost(static, solve_multi_dp(static)) == 0


def test_agrees_with_single_facility_solver():
    rng = SplitMix64(72)
    for _ in range(120):
        inst = gen_random(1 + rng.below(7), 1 + rng.below(5), 10, rng.next_u64())
        lifted = lift_instance(inst)
        assert weighted_cost(lifted, solve_multi_dp(lifted)) == optimal_cost(inst)


def test_agrees_with_enumeration_oracle():
    rng = SplitMix64(73)
    checked = 0
    while checked < 60:
        w = _random_weighted(rng)
        try:
            _, expect = oracle_optimal_weighted(w, sequence_budget=200_000)
        except BudgetError:
            continue
        assert weighted_cost(w, solve_multi_dp(w)) == expect
        checked += 1


def test_outputs_are_candidate_confined():
    rng = SplitMix64(74)
    for _ in range(60):
        w = _random_weighted(rng)
        cands = set(candidate_set(w))
        for row in solve_multi_dp(w):
            assert set(row) <= cands


def test_extra_facility_never_hurts():
    rng = SplitMix64(75)
    for _ in range(40):
        w = _random_weighted(rng, k_max=1)
        cost_k = weighted_cost(w, solve_multi_dp(w))
        grown = WeightedInstance(
            w.n,
            w.T,
            w.k + 1,
            tuple(sorted((*w.starts, w.starts[0]))),
            w.weights,
            w.stages,
        )
        cost_k1 = weighted_cost(grown, solve_multi_dp(grown))
        assert cost_k1 <= cost_k


def test_state_budget_guard():
    w = _random_weighted(SplitMix64(76))
    with pytest.raises(BudgetError, match="state budget"):
        solve_multi_dp(w, state_budget=1)


def test_deterministic_tie_break():
    # staying put and chasing the lone agent cost the same; the
    # lexicographically smaller placement wins
    w = WeightedInstance(1, 1, 1, (0,), (1,), ((2,),))
    sol = solve_multi_dp(w)
    cost = weighted_cost(w, sol)
    ties = [c for c in candidate_set(w) if weighted_cost(w, ((c,),)) == cost]
    assert len(ties) == 2
    assert sol == ((min(ties),),)
    assert solve_multi_dp(w) == sol
