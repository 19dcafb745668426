"""Instance families, deterministic random instances, and exact
competitive-ratio measurement.

The two hand-built families are the tight cases for the online and the
strategy-proof mechanism; the random generator exists for reproducible
sweeps and is specified down to the draw order so corpora can be
recreated anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .manipulation import MechanismId
from .model import Coord, Instance, StructureError, total_cost
from .oracle import oracle_optimal

__all__ = [
    "RatioReport",
    "SplitMix64",
    "gen_lowerbound_family",
    "gen_random",
    "gen_sp_tight_family",
    "measure_ratio",
]

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64, a 64-bit mixing generator with a single additive state.

    Each draw adds the increment 0x9E3779B97F4A7C15 to the state, then
    mixes the result with two xorshift-multiply rounds (constants
    0xBF58476D1CE4E5B9 and 0x94D049BB133111EB) and a final 31-bit
    xorshift. Identical seeds produce identical streams on any platform.
    """

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Draw from [0, bound) by modulo reduction; bound must be positive."""
        if bound <= 0:
            raise StructureError(f"bound must be positive, got {bound}")
        return self.next_u64() % bound


def gen_random(n: int, T: int, coord_max: int, seed: int) -> Instance:
    """Deterministic instance with integer coordinates in [0, coord_max].

    The draw order is fixed: start location first, then stage vectors in
    stage order with agents left to right, each draw being
    ``next_u64() % (coord_max + 1)``. The same arguments always rebuild
    the identical instance.
    """
    if not isinstance(coord_max, int) or coord_max < 0:
        raise StructureError(f"coord_max must be a nonnegative integer, got {coord_max!r}")
    rng = SplitMix64(seed)
    start = rng.below(coord_max + 1)
    stages = tuple(
        tuple(rng.below(coord_max + 1) for _ in range(n)) for _ in range(T)
    )
    return Instance(n, T, start, stages)


def gen_lowerbound_family(ell: int) -> tuple[Instance, Instance]:
    """The two-stage pair on which no online mechanism can beat the bound.

    Both instances have ``2*ell + 1`` agents and start at 0. Stage 1 puts
    ``ell`` agents at 0 and ``ell + 1`` at 1; stage 2 moves everyone to 0
    in the first instance and to 1 in the second. The instances differ
    only in stage 2, which is exactly what an online mechanism cannot see
    in time.
    """
    if not isinstance(ell, int) or ell < 1:
        raise StructureError(f"ell must be a positive integer, got {ell!r}")
    n = 2 * ell + 1
    stage1 = (0,) * ell + (1,) * (ell + 1)
    base = Instance(n, 2, 0, (stage1, (0,) * n))
    prime = Instance(n, 2, 0, (stage1, (1,) * n))
    return base, prime


def gen_sp_tight_family(n: int) -> Instance:
    """The two-stage instance on which the middle-agent mechanism's ratio
    bound is attained exactly.

    Start at 1; stage 1 puts the first ``floor(n/2)`` agents at 1 and the
    rest at 0, stage 2 puts everyone at 1.
    """
    if not isinstance(n, int) or n < 2:
        raise StructureError(f"n must be an integer >= 2, got {n!r}")
    half = n // 2
    stage1 = (1,) * half + (0,) * (n - half)
    return Instance(n, 2, 1, (stage1, (1,) * n))


@dataclass(frozen=True, slots=True)
class RatioReport:
    """Exact cost ratio of one mechanism run against the offline optimum."""

    instance_id: str
    mechanism: MechanismId
    mech_cost: Coord
    opt_cost: Coord
    ratio: Coord


def measure_ratio(
    instance: Instance, mech: MechanismId, instance_id: str = ""
) -> RatioReport:
    """Exact ratio of the mechanism's cost to the oracle optimum.

    Both costs zero counts as ratio 1 (the mechanism was as good as
    possible on a free instance).
    """
    mech_cost = total_cost(instance, mech.solve(instance))
    _, opt_cost = oracle_optimal(instance)
    if mech_cost == 0 and opt_cost == 0:
        ratio = Fraction(1)
    else:
        ratio = mech_cost / opt_cost
    return RatioReport(instance_id, mech, mech_cost, opt_cost, ratio)
