"""Exact data model for facility reallocation on a line.

Instances, placements, cost evaluation, and median intervals. Every
quantity is an exact rational (``fractions.Fraction``); floats are
refused at the boundary so that downstream equality and ratio checks
carry no tolerance at all.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable

Coord = Fraction
Solution = tuple[Coord, ...]

__all__ = [
    "BudgetError",
    "Coord",
    "Instance",
    "Interval",
    "Solution",
    "StructureError",
    "agent_cost",
    "as_coord",
    "coord_vector",
    "median_interval",
    "middle_agent",
    "stage_cost",
    "supermedian",
    "total_cost",
]


class StructureError(ValueError):
    """An input breaks a structural contract: bad shape, range, or index."""


class BudgetError(RuntimeError):
    """A computation would exceed its configured state budget."""


def as_coord(value: int | str | Fraction) -> Coord:
    """Coerce an int, decimal/fraction string, or Fraction to a coordinate.

    Floats are rejected: binary rounding would silently break the
    exactness guarantee of everything downstream.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise StructureError(f"cannot parse coordinate {value!r}") from exc
    raise StructureError(
        f"coordinates must be int, string, or Fraction, got {type(value).__name__}"
    )


def coord_vector(values: Iterable) -> tuple[Coord, ...]:
    """Coerce an iterable of coordinate-like values to a tuple of Fractions."""
    return tuple(as_coord(v) for v in values)


def _positive_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value >= 1


def _stage_rows(stages, n: int, T: int) -> tuple[tuple[Coord, ...], ...]:
    rows = tuple(coord_vector(row) for row in stages)
    if len(rows) != T:
        raise StructureError(f"expected {T} stage vectors, got {len(rows)}")
    for t, row in enumerate(rows):
        if len(row) != n:
            raise StructureError(f"stages[{t}] has {len(row)} entries, expected {n}")
    return rows


def _scale_of(values) -> int:
    """LCM of the denominators; multiplying by it makes every value integral."""
    return lcm(*(v.denominator for v in values)) if values else 1


def _scaled(value: Fraction, scale: int) -> int:
    return value.numerator * (scale // value.denominator)


@dataclass(frozen=True, slots=True)
class Instance:
    """A single-facility problem: a start location plus per-stage agent locations.

    Agent identity is positional: ``stages[t][i]`` is agent ``i+1``'s
    location at stage ``t+1``. Operations that take stage or agent
    indices use 1-based indexing.
    """

    n: int
    T: int
    start: Coord
    stages: tuple[tuple[Coord, ...], ...]

    def __post_init__(self):
        if not _positive_int(self.n):
            raise StructureError(f"agent count must be a positive integer, got {self.n!r}")
        if not _positive_int(self.T):
            raise StructureError(f"stage count must be a positive integer, got {self.T!r}")
        object.__setattr__(self, "start", as_coord(self.start))
        object.__setattr__(self, "stages", _stage_rows(self.stages, self.n, self.T))

    def stage(self, t: int) -> tuple[Coord, ...]:
        """Agent locations at stage ``t`` (1-based)."""
        if not 1 <= t <= self.T:
            raise StructureError(f"stage index {t} out of range 1..{self.T}")
        return self.stages[t - 1]


@dataclass(frozen=True, slots=True)
class Interval:
    """Closed interval on the line; a single point when ``lo == hi``."""

    lo: Coord
    hi: Coord

    def __post_init__(self):
        object.__setattr__(self, "lo", as_coord(self.lo))
        object.__setattr__(self, "hi", as_coord(self.hi))
        if self.lo > self.hi:
            raise StructureError(f"interval lower end {self.lo} exceeds upper end {self.hi}")

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def clamp(self, x) -> Coord:
        """The interval point nearest to ``x``."""
        x = as_coord(x)
        if x < self.lo:
            return self.lo
        if x > self.hi:
            return self.hi
        return x

    def midpoint(self) -> Coord:
        return (self.lo + self.hi) / 2

    def distance_to(self, x) -> Coord:
        """Distance from ``x`` to the nearest interval point; zero inside."""
        x = as_coord(x)
        return abs(x - self.clamp(x))


def _solution_vector(solution, T: int) -> Solution:
    ys = coord_vector(solution)
    if len(ys) != T:
        raise StructureError(f"solution has {len(ys)} placements, expected {T}")
    return ys


def total_cost(instance: Instance, solution) -> Coord:
    """Total facility movement plus agent distances, summed over all stages.

    Movement at stage 1 is measured from the instance's start location.
    """
    ys = _solution_vector(solution, instance.T)
    prev = instance.start
    acc = Fraction(0)
    for row, y in zip(instance.stages, ys):
        acc += abs(prev - y)
        for x in row:
            acc += abs(x - y)
        prev = y
    return acc


def stage_cost(instance: Instance, t: int, y_prev, y_t) -> Coord:
    """Cost of stage ``t`` alone: movement from ``y_prev`` plus agent distances."""
    row = instance.stage(t)
    y_prev = as_coord(y_prev)
    y_t = as_coord(y_t)
    acc = abs(y_prev - y_t)
    for x in row:
        acc += abs(x - y_t)
    return acc


def agent_cost(instance: Instance, solution, i: int) -> Coord:
    """Agent ``i``'s total distance to the facility over all stages (1-based)."""
    if not _positive_int(i) or i > instance.n:
        raise StructureError(f"agent index {i!r} out of range 1..{instance.n}")
    ys = _solution_vector(solution, instance.T)
    acc = Fraction(0)
    for row, y in zip(instance.stages, ys):
        acc += abs(y - row[i - 1])
    return acc


def median_interval(points, anchor) -> Interval:
    """Minimisers of total distance to ``points`` plus one anchor point.

    With the anchor thrown in, the pool holds ``len(points) + 1`` values.
    An odd pool has a unique middle value (the minimiser is one point); an
    even pool leaves a closed interval between its two middle order
    statistics.
    """
    pts = coord_vector(points)
    if not pts:
        raise StructureError("median_interval needs at least one point")
    vals = sorted((*pts, as_coord(anchor)))
    m = len(vals)
    if m % 2:
        mid = vals[m // 2]
        return Interval(mid, mid)
    return Interval(vals[m // 2 - 1], vals[m // 2])


def supermedian(points) -> Interval:
    """Interval from the left to the right neighbour of the middle point
    (odd count), or between the two middle points (even count).

    Every anchored median interval over the same points lies inside it,
    no matter where the anchor sits.
    """
    xs = sorted(coord_vector(points))
    n = len(xs)
    if n % 2:
        if n < 3:
            raise StructureError("supermedian needs at least 3 points for an odd count")
        mid = (n + 1) // 2  # 1-based rank of the middle point
        return Interval(xs[mid - 2], xs[mid])
    if n < 2:
        raise StructureError("supermedian needs at least 2 points for an even count")
    return Interval(xs[n // 2 - 1], xs[n // 2])


def middle_agent(points) -> Coord:
    """The lower middle order statistic: the ``ceil(n/2)``-th smallest value."""
    xs = sorted(coord_vector(points))
    if not xs:
        raise StructureError("empty location vector")
    return xs[(len(xs) - 1) // 2]
