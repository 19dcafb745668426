"""Search for profitable misreports against the shipped mechanisms.

The search space per agent and stage is the instance's breakpoint grid:
every coordinate appearing anywhere in the instance plus the midpoints
of consecutive distinct values. All mechanisms here select order
statistics or interval midpoints, so their behaviour only changes when
a report crosses another coordinate; the midpoints cover placements in
the strict interior. This makes the audit exhaustive on desk-scale
corpora, though it is not a proof of non-manipulability in general.

Gains are always evaluated against an agent's true locations, under
both the truthful and the deviant outcome.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations, pairwise, product
from typing import Iterable, Sequence

from .model import (
    BudgetError,
    Coord,
    Instance,
    Solution,
    agent_cost,
)
from .offline import solve_offline
from .online import run_online
from .sp import run_sp

DEFAULT_SEARCH_BUDGET = 250_000

__all__ = [
    "AuditEntry",
    "AuditReport",
    "DEFAULT_SEARCH_BUDGET",
    "Deviation",
    "MechanismId",
    "PairDeviation",
    "audit_strategyproof",
    "deviation_grid",
    "find_manipulation",
    "find_pair_manipulation",
]


class MechanismId(Enum):
    """The deterministic instance-to-solution mechanisms under audit."""

    OFFLINE_OPTIMAL = "offline_optimal"
    ONLINE_A = "online_a"
    SP_MEDIAN = "sp_median"

    def solve(self, instance: Instance) -> Solution:
        return _SOLVERS[self](instance)


_SOLVERS = {
    MechanismId.OFFLINE_OPTIMAL: solve_offline,
    MechanismId.ONLINE_A: run_online,
    MechanismId.SP_MEDIAN: run_sp,
}


@dataclass(frozen=True, slots=True)
class Deviation:
    """A profitable single-agent misreport.

    ``gain`` is the agent's truthful-outcome cost minus their
    deviant-outcome cost, both measured against true locations; positive
    means the lie pays.
    """

    agent: int                   # 1-based
    reports: tuple[Coord, ...]   # alternative report, one entry per stage
    gain: Coord


@dataclass(frozen=True, slots=True)
class PairDeviation:
    """A joint misreport by two agents under which both strictly gain."""

    agents: tuple[int, int]      # 1-based, ascending
    reports: tuple[tuple[Coord, ...], tuple[Coord, ...]]
    gains: tuple[Coord, Coord]


def deviation_grid(instance: Instance) -> tuple[Coord, ...]:
    """Every coordinate in the instance plus midpoints of consecutive
    distinct values: the breakpoints of the mechanisms' piecewise behaviour."""
    coords = sorted({instance.start, *(x for row in instance.stages for x in row)})
    grid = set(coords)
    for a, b in pairwise(coords):
        grid.add((a + b) / 2)
    return tuple(sorted(grid))


def _replace_agent(instance: Instance, agent: int, reports: Sequence[Coord]) -> Instance:
    col = agent - 1
    stages = []
    for t, row in enumerate(instance.stages):
        new_row = list(row)
        new_row[col] = reports[t]
        stages.append(tuple(new_row))
    return Instance(instance.n, instance.T, instance.start, tuple(stages))


def _check_budget(grid_size: int, exponent: int, budget: int, what: str) -> None:
    space = grid_size**exponent
    if space > budget:
        raise BudgetError(
            f"{grid_size}^{exponent} = {space} report vectors {what}, "
            f"exceeding the search budget of {budget}"
        )


def find_manipulation(
    instance: Instance, mech: MechanismId, budget: int = DEFAULT_SEARCH_BUDGET
) -> Deviation | None:
    """Exhaustive single-agent search over the deviation grid.

    Tries every report vector for every agent and returns a maximum-gain
    profitable deviation (ties: lowest agent, then lexicographically
    smallest report vector), or ``None`` when no lie pays.
    """
    grid = deviation_grid(instance)
    _check_budget(len(grid), instance.T, budget, "per agent")
    truthful = mech.solve(instance)
    best: Deviation | None = None
    for agent in range(1, instance.n + 1):
        base = agent_cost(instance, truthful, agent)
        true_reports = tuple(row[agent - 1] for row in instance.stages)
        for reports in product(grid, repeat=instance.T):
            if reports == true_reports:
                continue
            outcome = mech.solve(_replace_agent(instance, agent, reports))
            gain = base - agent_cost(instance, outcome, agent)
            if gain > 0 and (best is None or gain > best.gain):
                best = Deviation(agent, reports, gain)
    return best


def find_pair_manipulation(
    instance: Instance, mech: MechanismId, budget: int = DEFAULT_SEARCH_BUDGET
) -> PairDeviation | None:
    """Exhaustive two-agent coalition search over the deviation grid.

    A coalition only counts when *both* members strictly gain. Returns
    the first such joint deviation in deterministic order, or ``None``.
    """
    if instance.n < 2:
        return None
    grid = deviation_grid(instance)
    _check_budget(len(grid), 2 * instance.T, budget, "per pair")
    truthful = mech.solve(instance)
    base = {i: agent_cost(instance, truthful, i) for i in range(1, instance.n + 1)}
    for i, j in combinations(range(1, instance.n + 1), 2):
        for reports_i in product(grid, repeat=instance.T):
            partial = _replace_agent(instance, i, reports_i)
            for reports_j in product(grid, repeat=instance.T):
                outcome = mech.solve(_replace_agent(partial, j, reports_j))
                gain_i = base[i] - agent_cost(instance, outcome, i)
                if gain_i <= 0:
                    continue
                gain_j = base[j] - agent_cost(instance, outcome, j)
                if gain_j > 0:
                    return PairDeviation(
                        (i, j), (reports_i, reports_j), (gain_i, gain_j)
                    )
    return None


@dataclass(frozen=True, slots=True)
class AuditEntry:
    instance_id: str
    deviation: Deviation | None
    error: str | None = None


@dataclass(frozen=True, slots=True)
class AuditReport:
    """Outcome of a corpus sweep: one entry per instance, in corpus order."""

    mechanism: MechanismId
    entries: tuple[AuditEntry, ...]

    @property
    def manipulable(self) -> tuple[AuditEntry, ...]:
        return tuple(e for e in self.entries if e.deviation is not None)

    @property
    def failed(self) -> tuple[AuditEntry, ...]:
        return tuple(e for e in self.entries if e.error is not None)


def audit_strategyproof(
    corpus: Iterable[Instance],
    mech: MechanismId,
    budget: int = DEFAULT_SEARCH_BUDGET,
    ids: Sequence[str] | None = None,
) -> AuditReport:
    """Run ``find_manipulation`` over a corpus, recording per-instance results.

    A budget overrun on one instance is recorded in its entry and the
    sweep continues.
    """
    entries: list[AuditEntry] = []
    for idx, inst in enumerate(corpus):
        iid = ids[idx] if ids is not None else str(idx)
        try:
            dev = find_manipulation(inst, mech, budget)
        except BudgetError as exc:
            entries.append(AuditEntry(iid, None, str(exc)))
            continue
        entries.append(AuditEntry(iid, dev))
    return AuditReport(mech, tuple(entries))
