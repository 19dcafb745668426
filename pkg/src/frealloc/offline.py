"""Optimal offline placement for a single facility.

Each stage places the facility inside the stage's anchored median
interval, at the point nearest the next stage's middle agent; the final
stage moves as little as possible within its own median interval. With
an even number of agents the intervals collapse to points and the
optimum is unique; with an odd number there can be a continuum of
optima, of which this returns one canonical representative. The tests
pin cost equality against the exhaustive oracle.
"""

from __future__ import annotations

from .model import Coord, Instance, Solution, median_interval, middle_agent, total_cost

__all__ = ["optimal_cost", "solve_offline"]


def solve_offline(instance: Instance) -> Solution:
    """One optimal placement per stage, in O(T n log n) time."""
    ys: list[Coord] = []
    prev = instance.start
    for t in range(1, instance.T + 1):
        box = median_interval(instance.stages[t - 1], prev)
        if t < instance.T:
            target = middle_agent(instance.stages[t])
        else:
            target = prev  # last stage: minimise movement
        y = box.clamp(target)
        ys.append(y)
        prev = y
    return tuple(ys)


def optimal_cost(instance: Instance) -> Coord:
    """Exact cost of the offline optimum."""
    return total_cost(instance, solve_offline(instance))
