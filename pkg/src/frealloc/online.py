"""Stage-streaming placement with a one-step optimal tracker.

Alongside its own last placement, the mechanism maintains the placement
a full-information optimal run would have made one stage earlier; that
location only becomes computable once the current stage's reports
arrive, so nothing here ever peeks ahead. Each new stage is then placed
at the point of the current anchored median interval nearest the
midpoint of the median interval the tracked optimum would use. With an
even number of agents both intervals are single points and the output
coincides with the offline optimum.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    Coord,
    Instance,
    Solution,
    StructureError,
    as_coord,
    coord_vector,
    median_interval,
    middle_agent,
)

__all__ = ["OnlineState", "online_step", "run_online"]


@dataclass(frozen=True, slots=True)
class OnlineState:
    """Carry-over between stages of one online session."""

    t: int                          # stage about to be placed, 1-based
    y_prev: Coord                   # facility location after stage t-1
    opt_prev: Coord                 # tracked optimal location at stage t-2
    prev_stage_locations: tuple[Coord, ...]   # agent locations revealed at stage t-1

    @classmethod
    def initial(cls, start) -> "OnlineState":
        s = as_coord(start)
        return cls(t=1, y_prev=s, opt_prev=s, prev_stage_locations=())


def online_step(state: OnlineState, x_t) -> tuple[OnlineState, Coord]:
    """Place the facility for one newly revealed stage.

    Returns the successor state and the placement. Reads only the vector
    it is handed; placements are invariant under whatever arrives later.
    """
    xs = coord_vector(x_t)
    if not xs:
        raise StructureError("stage vector must be non-empty")
    if state.prev_stage_locations and len(xs) != len(state.prev_stage_locations):
        raise StructureError(
            f"stage vector has {len(xs)} entries, expected {len(state.prev_stage_locations)}"
        )
    if state.t == 1:
        opt_now = state.opt_prev
    else:
        # The optimal run's previous placement is the point of its median
        # interval nearest this stage's middle agent.
        box = median_interval(state.prev_stage_locations, state.opt_prev)
        opt_now = box.clamp(middle_agent(xs))
    own = median_interval(xs, state.y_prev)
    y_t = own.clamp(median_interval(xs, opt_now).midpoint())
    return OnlineState(state.t + 1, y_t, opt_now, xs), y_t


def run_online(instance: Instance) -> Solution:
    """Feed the instance's stages through ``online_step`` in order."""
    state = OnlineState.initial(instance.start)
    out: list[Coord] = []
    for row in instance.stages:
        state, y = online_step(state, row)
        out.append(y)
    return tuple(out)
