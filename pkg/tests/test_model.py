"""Core model: costs, median intervals, and their exact-arithmetic invariants."""

from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frealloc import (
    Instance,
    Interval,
    StructureError,
    agent_cost,
    median_interval,
    middle_agent,
    stage_cost,
    supermedian,
    total_cost,
)

EX1 = Instance(3, 3, 3, ((3, 7, 7), (4, 5, 6), (1, 1, 2)))
EX3_EVEN = Instance(2, 3, 0, ((0, 1), (1, 0), (1, 0)))
LOWERBOUND_1 = Instance(3, 2, 0, ((0, 1, 1), (0, 0, 0)))


def brute_force_int_cost(start, stages, ys):
    # independent integer arithmetic, no library calls
    cost = 0
    prev = start
    for xs, y in zip(stages, ys):
        cost += abs(prev - y)
        for x in xs:
            cost += abs(x - y)
        prev = y
    return cost


def test_total_cost_walkthrough_instance():
    # the expected minimum is enumerated over the 1..7 candidate grid
    stages = [(3, 7, 7), (4, 5, 6), (1, 1, 2)]
    best = min(
        brute_force_int_cost(3, stages, ys)
        for ys in product(range(1, 8), repeat=3)
    )
    assert best == 15
    assert total_cost(EX1, (5, 5, 2)) == 15


def test_total_cost_degenerate_zero():
    inst = Instance(1, 1, 0, ((0,),))
    assert total_cost(inst, (0,)) == 0


def test_total_cost_lowerbound_instance():
    assert total_cost(LOWERBOUND_1, (0, 0)) == 2


def test_total_cost_rejects_wrong_length():
    with pytest.raises(StructureError):
        total_cost(EX1, (5, 5))


def test_stage_cost_values():
    assert stage_cost(EX1, 1, 3, 5) == 8
    assert stage_cost(LOWERBOUND_1, 2, F(1, 2), 0) == F(1, 2)
    inst = Instance(2, 1, 4, ((4, 4),))
    assert stage_cost(inst, 1, 4, 4) == 0


def test_stage_cost_rejects_bad_stage_index():
    with pytest.raises(StructureError):
        stage_cost(EX1, 0, 3, 5)
    with pytest.raises(StructureError):
        stage_cost(EX1, 4, 3, 5)


def test_agent_cost_values():
    even3 = Instance(2, 3, 0, ((0, 1), (1, 0), (1, 0)))
    assert agent_cost(even3, (0, 0, 0), 1) == 2
    assert agent_cost(even3, (1, 1, 1), 1) == 1
    colocated = Instance(1, 2, 5, ((5,), (7,)))
    assert agent_cost(colocated, (5, 7), 1) == 0


def test_agent_cost_rejects_bad_agent_index():
    with pytest.raises(StructureError):
        agent_cost(EX3_EVEN, (0, 0, 0), 0)
    with pytest.raises(StructureError):
        agent_cost(EX3_EVEN, (0, 0, 0), 3)


def test_instance_rejects_ragged_stages():
    with pytest.raises(StructureError):
        Instance(3, 2, 0, ((1, 2, 3), (1, 2)))
    with pytest.raises(StructureError):
        Instance(2, 2, 0, ((1, 2),))


def test_instance_rejects_floats():
    with pytest.raises(StructureError):
        Instance(1, 1, 0.5, ((1,),))
    with pytest.raises(StructureError):
        Instance(1, 1, 0, ((1.5,),))


def test_median_interval_examples():
    assert median_interval((3, 7, 7), 3) == Interval(3, 7)
    assert median_interval((5,), 5) == Interval(5, 5)
    assert median_interval((0, 1), 0) == Interval(0, 0)


def test_median_interval_matches_grid_minimisation():
    # cost(z) = |z| + |1 - z| + |z| minimised over a quarter-integer grid
    def cost(z):
        return abs(z) + abs(1 - z) + abs(z)

    grid = [F(k, 4) for k in range(-8, 13)]
    best = min(cost(z) for z in grid)
    argmins = [z for z in grid if cost(z) == best]
    assert argmins == [0]
    assert median_interval((0, 1), 0) == Interval(0, 0)


def test_median_interval_rejects_empty():
    with pytest.raises(StructureError):
        median_interval((), 0)


def test_supermedian_examples():
    assert supermedian((1, 2, 5)) == Interval(1, 5)
    assert supermedian((0, 0, 1, 1)) == Interval(0, 1)
    assert supermedian((4, 5, 6)) == Interval(4, 6)


def test_supermedian_rejects_too_few_points():
    with pytest.raises(StructureError):
        supermedian((3,))
    with pytest.raises(StructureError):
        supermedian(())


def test_middle_agent_lower_tie_break():
    assert middle_agent((0, 1)) == 0
    assert middle_agent((1, 0, 0)) == 0
    assert middle_agent((5,)) == 5


coords = st.fractions(min_value=-8, max_value=8, max_denominator=4)


@given(st.lists(coords, min_size=2, max_size=9), coords)
@settings(max_examples=150, deadline=None)
def test_median_interval_subset_of_supermedian(points, anchor):
    box = median_interval(points, anchor)
    outer = supermedian(points) if len(points) % 2 == 0 or len(points) >= 3 else None
    if outer is not None:
        assert box.lo in outer and box.hi in outer


@given(st.lists(coords, min_size=1, max_size=7), coords)
@settings(max_examples=150, deadline=None)
def test_median_gap_lower_bound(points, anchor):
    # placing outside the median interval costs at least the distance to it
    box = median_interval(points, anchor)

    def cost(z):
        return sum(abs(p - z) for p in points) + abs(anchor - z)

    base = cost(box.lo)
    assert cost(box.hi) == base
    assert cost(box.midpoint()) == base
    probes = sorted({*points, anchor, box.lo - 1, box.hi + 1, box.lo - F(1, 2), box.hi + F(3, 2)})
    for w in probes:
        if w in box:
            assert cost(w) == base
        else:
            assert cost(w) - base >= box.distance_to(w)
            assert cost(w) > base


instances = st.integers(1, 5).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.integers(1, 4).flatmap(
            lambda T: st.tuples(
                st.just(T),
                coords,
                st.lists(
                    st.lists(coords, min_size=n, max_size=n), min_size=T, max_size=T
                ),
            )
        ),
    )
)


def _mk(raw) -> Instance:
    n, (T, start, stages) = raw
    return Instance(n, T, start, tuple(tuple(row) for row in stages))


@given(instances, st.data())
@settings(max_examples=150, deadline=None)
def test_clamping_into_median_never_costs_more(raw, data):
    inst = _mk(raw)
    sol = tuple(
        data.draw(coords, label=f"y{t}") for t in range(inst.T)
    )
    base = total_cost(inst, sol)
    prev = inst.start
    for t in range(inst.T):
        box = median_interval(inst.stages[t], prev)
        clamped = sol[:t] + (box.clamp(sol[t]),) + sol[t + 1 :]
        assert total_cost(inst, clamped) <= base
        prev = sol[t]


@given(instances, st.data())
@settings(max_examples=150, deadline=None)
def test_cost_decompositions(raw, data):
    inst = _mk(raw)
    sol = tuple(data.draw(coords, label=f"y{t}") for t in range(inst.T))
    total = total_cost(inst, sol)
    per_stage = sum(
        stage_cost(inst, t, sol[t - 2] if t > 1 else inst.start, sol[t - 1])
        for t in range(1, inst.T + 1)
    )
    assert per_stage == total
    movement = abs(inst.start - sol[0]) + sum(
        abs(a - b) for a, b in zip(sol, sol[1:])
    )
    agents = sum(agent_cost(inst, sol, i) for i in range(1, inst.n + 1))
    assert movement + agents == total


def test_operations_are_deterministic():
    a = total_cost(EX1, (5, 5, 2))
    b = total_cost(EX1, (5, 5, 2))
    assert a == b and isinstance(a, F)
    assert median_interval((3, 7, 7), 3) == median_interval((3, 7, 7), 3)
