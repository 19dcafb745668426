"""Ground-truth optimisers, kept deliberately apart from the shipped solvers.

``oracle_optimal`` fills a forward cost-to-arrive table over the single
facility's candidate locations; ``oracle_optimal_weighted`` enumerates
every candidate placement sequence outright. Neither shares traversal
logic with the production solvers, so agreement between the two sides
is evidence rather than tautology. Both are meant for desk-scale
certification, not for speed.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement, product

from .model import (
    BudgetError,
    Coord,
    Instance,
    Solution,
    _scale_of,
    _scaled,
)
from .multi import MultiSolution, WeightedInstance

DEFAULT_SEQUENCE_BUDGET = 1_000_000

__all__ = ["DEFAULT_SEQUENCE_BUDGET", "oracle_optimal", "oracle_optimal_weighted"]


def _median_bounds(points: list[int], anchor: int) -> tuple[int, int]:
    vals = sorted((*points, anchor))
    m = len(vals)
    if m % 2:
        v = vals[m // 2]
        return v, v
    return vals[m // 2 - 1], vals[m // 2]


def oracle_optimal(instance: Instance) -> tuple[Solution, Coord]:
    """Exact minimum of ``total_cost`` over all solutions, with one argmin.

    The minimum is taken over placements confined to the candidate set
    (the start plus every reported location), which is known to contain
    an optimal solution. The returned cost comes from a forward
    cost-to-arrive table; a backward cost-to-go table, cross-checked
    against it, drives the argmin trace. Ties are resolved first toward
    points inside the stage's anchored median interval, then toward the
    leftmost candidate.
    """
    cands = sorted({instance.start, *(x for row in instance.stages for x in row)})
    scale = _scale_of(cands)
    cint = [_scaled(c, scale) for c in cands]
    start_int = _scaled(instance.start, scale)
    rows = [[_scaled(x, scale) for x in row] for row in instance.stages]
    m = len(cands)
    T = instance.T

    # service[t][j]: total agent distance at stage t+1 when placed at cands[j]
    service = [[sum(abs(x - c) for x in row) for c in cint] for row in rows]

    # Forward: cheapest cost of stages 1..t ending at each candidate.
    arrive = [abs(start_int - c) + service[0][j] for j, c in enumerate(cint)]
    for t in range(1, T):
        arrive = [
            min(arrive[p] + abs(cint[p] - c) for p in range(m)) + service[t][j]
            for j, c in enumerate(cint)
        ]
    forward_best = min(arrive)

    # Backward: layers[t][j] = cheapest cost of stages t+1..T when the
    # facility sits at cands[j] after stage t.
    layers: list[list[int]] = [[0] * m for _ in range(T + 1)]
    for t in range(T - 1, -1, -1):
        nxt = layers[t + 1]
        layers[t] = [
            min(abs(c - cint[p]) + service[t][p] + nxt[p] for p in range(m))
            for c in cint
        ]
    start_idx = cands.index(instance.start)
    assert layers[0][start_idx] == forward_best, "forward and backward tables disagree"

    ys: list[Coord] = []
    prev_int = start_int
    remaining = forward_best
    for t in range(1, T + 1):
        nxt = layers[t]
        scores = [
            abs(prev_int - cint[j]) + service[t - 1][j] + nxt[j] for j in range(m)
        ]
        assert min(scores) == remaining
        opts = [j for j, s in enumerate(scores) if s == remaining]
        lo, hi = _median_bounds(rows[t - 1], prev_int)
        inside = [j for j in opts if lo <= cint[j] <= hi]
        pick = (inside or opts)[0]
        ys.append(cands[pick])
        prev_int = cint[pick]
        remaining = nxt[pick]
    return tuple(ys), Fraction(forward_best, scale)


def oracle_optimal_weighted(
    instance: WeightedInstance, *, sequence_budget: int = DEFAULT_SEQUENCE_BUDGET
) -> tuple[MultiSolution, Coord]:
    """Exact minimum of ``weighted_cost`` by full sequence enumeration.

    Every sequence of sorted candidate k-tuples is costed; the first
    sequence attaining the minimum (in lexicographic order) is returned.
    Raises ``BudgetError`` when the sequence count exceeds the budget.
    """
    pool = set(instance.starts)
    for row in instance.stages:
        pool.update(row)
    cands = sorted(pool)
    tuples = list(combinations_with_replacement(cands, instance.k))
    nt = len(tuples)
    total = nt**instance.T
    if total > sequence_budget:
        raise BudgetError(
            f"{nt}^{instance.T} = {total} placement sequences, "
            f"exceeding the enumeration budget of {sequence_budget}"
        )

    pos_scale = _scale_of(cands)
    wt_scale = _scale_of(instance.weights)
    tint = [tuple(_scaled(c, pos_scale) for c in tup) for tup in tuples]
    sint = tuple(_scaled(c, pos_scale) for c in instance.starts)
    wint = [_scaled(w, wt_scale) for w in instance.weights]
    rows = [[_scaled(x, pos_scale) for x in row] for row in instance.stages]
    T = instance.T
    k = instance.k

    serve = [
        [
            sum(w * min(abs(x - y) for y in tup) for x, w in zip(row, wint))
            for tup in tint
        ]
        for row in rows
    ]
    start_move = [
        wt_scale * sum(abs(a - b) for a, b in zip(sint, tup)) for tup in tint
    ]
    move = None
    if T >= 2:
        move = [
            [wt_scale * sum(abs(a - b) for a, b in zip(ta, tb)) for tb in tint]
            for ta in tint
        ]

    best = None
    best_seq = None
    for seq in product(range(nt), repeat=T):
        first = seq[0]
        c = start_move[first] + serve[0][first]
        prev = first
        for t in range(1, T):
            b = seq[t]
            c += move[prev][b] + serve[t][b]
            prev = b
        if best is None or c < best:
            best, best_seq = c, seq
    sol = tuple(tuples[j] for j in best_seq)
    return sol, Fraction(best, pos_scale * wt_scale)
