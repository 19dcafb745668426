"""Weighted multi-facility generalisation, solved exactly by dynamic
programming over the candidate location set.

An optimal solution exists that only ever parks facilities on start
locations or on reported agent locations, so the DP walks sorted
k-tuples drawn from that candidate set, stage layer by stage layer.
Facility movement between consecutive stages is matched index-wise on
the sorted tuples: on a line the non-crossing matching minimises total
movement over all pairings, so no matching search is needed. Runtime is
polynomial for fixed k but exponential in k; an explicit state budget
refuses oversized inputs instead of thrashing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from .model import (
    BudgetError,
    Coord,
    Instance,
    StructureError,
    _positive_int,
    _scale_of,
    _scaled,
    _stage_rows,
    coord_vector,
)

FacilityTuple = tuple[Coord, ...]          # sorted, drawn from the candidate set
MultiSolution = tuple[FacilityTuple, ...]

DEFAULT_STATE_BUDGET = 5_000_000

__all__ = [
    "DEFAULT_STATE_BUDGET",
    "FacilityTuple",
    "MultiSolution",
    "WeightedInstance",
    "candidate_set",
    "lift_instance",
    "solve_multi_dp",
    "weighted_cost",
]


@dataclass(frozen=True, slots=True)
class WeightedInstance:
    """k facilities with sorted start locations and per-agent weights.

    Weights are nonnegative rationals; a zero-weight agent contributes no
    distance cost but its locations still count as candidate positions.
    """

    n: int
    T: int
    k: int
    starts: tuple[Coord, ...]
    weights: tuple[Fraction, ...]
    stages: tuple[tuple[Coord, ...], ...]

    def __post_init__(self):
        if not _positive_int(self.n):
            raise StructureError(f"agent count must be a positive integer, got {self.n!r}")
        if not _positive_int(self.T):
            raise StructureError(f"stage count must be a positive integer, got {self.T!r}")
        if not _positive_int(self.k):
            raise StructureError(f"facility count must be a positive integer, got {self.k!r}")
        starts = coord_vector(self.starts)
        if len(starts) != self.k:
            raise StructureError(f"starts has {len(starts)} entries, expected k={self.k}")
        if any(a > b for a, b in zip(starts, starts[1:])):
            raise StructureError("starts must be sorted non-decreasing")
        weights = coord_vector(self.weights)
        if len(weights) != self.n:
            raise StructureError(f"weights has {len(weights)} entries, expected n={self.n}")
        for i, w in enumerate(weights):
            if w < 0:
                raise StructureError(f"weights[{i}] is negative ({w})")
        object.__setattr__(self, "starts", starts)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "stages", _stage_rows(self.stages, self.n, self.T))


def lift_instance(instance: Instance, k: int = 1) -> WeightedInstance:
    """View a single-facility instance as a weighted one: unit weights and
    ``k`` facilities all starting at the original start location."""
    if not _positive_int(k):
        raise StructureError(f"facility count must be a positive integer, got {k!r}")
    return WeightedInstance(
        n=instance.n,
        T=instance.T,
        k=k,
        starts=(instance.start,) * k,
        weights=(Fraction(1),) * instance.n,
        stages=instance.stages,
    )


def candidate_set(instance: WeightedInstance) -> tuple[Coord, ...]:
    """Sorted distinct union of start locations and every reported location."""
    pool = set(instance.starts)
    for row in instance.stages:
        pool.update(row)
    return tuple(sorted(pool))


def _multi_rows(solution, T: int, k: int) -> MultiSolution:
    rows = tuple(coord_vector(row) for row in solution)
    if len(rows) != T:
        raise StructureError(f"solution has {len(rows)} stage tuples, expected {T}")
    for t, row in enumerate(rows):
        if len(row) != k:
            raise StructureError(f"solution[{t}] has {len(row)} placements, expected k={k}")
        if any(a > b for a, b in zip(row, row[1:])):
            raise StructureError(f"solution[{t}] must be sorted non-decreasing")
    return rows


def weighted_cost(instance: WeightedInstance, solution) -> Coord:
    """Facility movement (index-wise on sorted tuples) plus each agent's
    weighted distance to its nearest facility, summed over all stages."""
    rows = _multi_rows(solution, instance.T, instance.k)
    prev = instance.starts
    acc = Fraction(0)
    for row, xs in zip(rows, instance.stages):
        for a, b in zip(prev, row):
            acc += abs(a - b)
        for x, w in zip(xs, instance.weights):
            acc += w * min(abs(x - y) for y in row)
        prev = row
    return acc


def solve_multi_dp(
    instance: WeightedInstance, *, state_budget: int = DEFAULT_STATE_BUDGET
) -> MultiSolution:
    """Exact minimiser of ``weighted_cost``, by backward DP over candidate tuples.

    The value of a tuple at stage t is the cheapest way to play stages
    t+1..T from it; the answer is traced forward from the start tuple,
    breaking cost ties toward the lexicographically smallest tuple so the
    output is deterministic.

    Raises ``BudgetError`` when ``T`` times the number of candidate tuples
    exceeds ``state_budget``.
    """
    cands = candidate_set(instance)
    tuples = list(combinations_with_replacement(cands, instance.k))
    nt = len(tuples)
    states = instance.T * nt
    if states > state_budget:
        raise BudgetError(
            f"{instance.T} stages x {nt} candidate tuples = {states} DP states, "
            f"exceeding the state budget of {state_budget}"
        )

    # Rescale to integers so the hot loops avoid Fraction arithmetic. The
    # movement term is multiplied by the weight scale so both terms share
    # the unit (position scale x weight scale); the final cost divides it
    # back out exactly.
    pos_scale = _scale_of(cands)
    wt_scale = _scale_of(instance.weights)
    tint = [tuple(_scaled(c, pos_scale) for c in tup) for tup in tuples]
    sint = tuple(_scaled(c, pos_scale) for c in instance.starts)
    wint = [_scaled(w, wt_scale) for w in instance.weights]
    rows = [[_scaled(x, pos_scale) for x in row] for row in instance.stages]

    serve = [
        [
            sum(w * min(abs(x - y) for y in tup) for x, w in zip(row, wint))
            for tup in tint
        ]
        for row in rows
    ]

    k = instance.k
    T = instance.T
    layers: list[list[int]] = [[0] * nt for _ in range(T + 1)]
    for t in range(T - 1, -1, -1):
        nxt = layers[t + 1]
        cur = layers[t]
        for a in range(nt):
            ta = tint[a]
            best = None
            for b in range(nt):
                tb = tint[b]
                mv = 0
                for j in range(k):
                    mv += abs(ta[j] - tb[j])
                c = wt_scale * mv + serve[t][b] + nxt[b]
                if best is None or c < best:
                    best = c
            cur[a] = best

    # Stage-0 layer entry for the start tuple is the optimum; trace forward,
    # keeping the first (lexicographically smallest) tuple among ties.
    prev = sint
    seq: list[tuple[Coord, ...]] = []
    expected = layers[0][tuples.index(instance.starts)]
    for t in range(1, T + 1):
        nxt = layers[t]
        best = None
        pick = -1
        for b in range(nt):
            tb = tint[b]
            mv = 0
            for j in range(k):
                mv += abs(prev[j] - tb[j])
            c = wt_scale * mv + serve[t - 1][b] + nxt[b]
            if best is None or c < best:
                best, pick = c, b
        assert best == expected, "DP trace diverged from the value table"
        expected = nxt[pick]
        seq.append(tuples[pick])
        prev = tint[pick]
    return tuple(seq)
