"""Online mechanism: worked steps, exact ratio bound, and causality."""

from fractions import Fraction as F

import pytest

from frealloc import (
    Instance,
    OnlineState,
    SplitMix64,
    StructureError,
    gen_lowerbound_family,
    gen_random,
    median_interval,
    online_step,
    oracle_optimal,
    run_online,
    solve_offline,
    total_cost,
)


def test_lowerbound_steps():
    base, prime = gen_lowerbound_family(1)
    state = OnlineState.initial(0)
    state, y1 = online_step(state, (0, 1, 1))
    assert y1 == F(1, 2)
    state, y2 = online_step(state, (0, 0, 0))
    assert y2 == 0
    assert total_cost(base, (y1, y2)) == F(5, 2)

    assert run_online(base) == (F(1, 2), 0)
    assert run_online(prime) == (F(1, 2), 1)
    assert total_cost(prime, run_online(prime)) == F(5, 2)


def test_static_agents_never_move():
    inst = Instance(3, 4, 6, tuple(((6, 6, 6),) * 4))
    sol = run_online(inst)
    assert sol == (6, 6, 6, 6)
    assert total_cost(inst, sol) == 0


def test_even_n_matches_offline_everywhere():
    rng = SplitMix64(404)
    for _ in range(150):
        n = (2, 4, 6)[rng.below(3)]
        inst = gen_random(n, 1 + rng.below(5), 10, rng.next_u64())
        assert run_online(inst) == solve_offline(inst)


def test_ratio_bound_is_exact_for_odd_n():
    rng = SplitMix64(405)
    for _ in range(200):
        n = (3, 5, 7)[rng.below(3)]
        inst = gen_random(n, 1 + rng.below(5), 10, rng.next_u64())
        mech_cost = total_cost(inst, run_online(inst))
        _, opt = oracle_optimal(inst)
        if opt == 0:
            assert mech_cost == 0
        else:
            assert mech_cost * (n + 1) <= opt * (n + 2)


def test_ratio_is_tight_on_the_lowerbound_family():
    for ell in range(1, 11):
        n = 2 * ell + 1
        for inst in gen_lowerbound_family(ell):
            mech_cost = total_cost(inst, run_online(inst))
            _, opt = oracle_optimal(inst)
            assert mech_cost / opt == F(n + 2, n + 1)


def test_placements_ignore_future_stages():
    rng = SplitMix64(406)
    for _ in range(80):
        n = 1 + rng.below(5)
        T = 2 + rng.below(3)
        inst = gen_random(n, T, 8, rng.next_u64())
        cut = 1 + rng.below(T - 1)
        mutated = Instance(
            n,
            T,
            inst.start,
            inst.stages[:cut]
            + tuple(
                tuple(rng.below(9) for _ in range(n)) for _ in range(T - cut)
            ),
        )
        assert run_online(inst)[:cut] == run_online(mutated)[:cut]


def test_placements_stay_in_median_intervals():
    rng = SplitMix64(407)
    for _ in range(150):
        inst = gen_random(1 + rng.below(7), 1 + rng.below(5), 10, rng.next_u64())
        sol = run_online(inst)
        prev = inst.start
        for t, y in enumerate(sol):
            assert y in median_interval(inst.stages[t], prev)
            prev = y


def test_step_rejects_bad_vectors():
    state = OnlineState.initial(0)
    with pytest.raises(StructureError):
        online_step(state, ())
    state, _ = online_step(state, (1, 2))
    with pytest.raises(StructureError):
        online_step(state, (1, 2, 3))


def test_initial_state_invariant():
    state = OnlineState.initial(F(7, 2))
    assert state.t == 1
    assert state.y_prev == state.opt_prev == F(7, 2)
    assert state.prev_stage_locations == ()
