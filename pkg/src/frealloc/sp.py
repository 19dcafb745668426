"""Strategy-proof placement: the reported middle agent, every stage.

The placement is a function of the current stage's reports alone. For
an even number of agents the tie between the two middle reports is
broken to the left, a rule that never depends on the reported values
themselves.
"""

from __future__ import annotations

from .model import Coord, Instance, Solution, middle_agent

__all__ = ["run_sp", "sp_step"]


def sp_step(x_t) -> Coord:
    """Lower middle order statistic of one stage's reports."""
    return middle_agent(x_t)


def run_sp(instance: Instance) -> Solution:
    """Apply ``sp_step`` stage by stage; movement accrues against the start."""
    return tuple(sp_step(row) for row in instance.stages)
