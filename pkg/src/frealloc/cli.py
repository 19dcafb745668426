"""Command-line surface: instance files in and exact results out.

Instance documents are JSON objects with integer ``n`` and ``T``, a
``start`` coordinate, and ``stages`` as a T-long array of n-long arrays.
Coordinates are strings holding a finite decimal ("2.5") or a fraction
("5/2"); plain JSON integers are also accepted. Binary floats, NaN, and
infinities are rejected outright. Adding ``k``, ``starts``, and
``weights`` turns the document into a weighted multi-facility instance.

Exit codes: 0 on success, 2 for input errors, 3 when a state or search
budget is exceeded. The environment variable FR_BUDGET (an integer)
overrides every DP and search budget.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction

from .experiments import (
    SplitMix64,
    gen_lowerbound_family,
    gen_random,
    gen_sp_tight_family,
    measure_ratio,
)
from .manipulation import (
    DEFAULT_SEARCH_BUDGET,
    MechanismId,
    audit_strategyproof,
    find_pair_manipulation,
)
from .model import (
    BudgetError,
    Coord,
    Instance,
    StructureError,
    as_coord,
    total_cost,
)
from .multi import (
    DEFAULT_STATE_BUDGET,
    WeightedInstance,
    lift_instance,
    solve_multi_dp,
    weighted_cost,
)
from .online import OnlineState, online_step, run_online
from .oracle import DEFAULT_SEQUENCE_BUDGET, oracle_optimal, oracle_optimal_weighted
from .offline import solve_offline
from .sp import run_sp

__all__ = ["emit_instance", "emit_solution", "main", "parse_instance"]

_NUMERAL_MAX_LEN = 64

_MECH_ALIASES = {
    "offline": MechanismId.OFFLINE_OPTIMAL,
    "offline_optimal": MechanismId.OFFLINE_OPTIMAL,
    "online": MechanismId.ONLINE_A,
    "online_a": MechanismId.ONLINE_A,
    "sp": MechanismId.SP_MEDIAN,
    "sp_median": MechanismId.SP_MEDIAN,
}


# ---------------------------------------------------------------------------
# parsing and emission


def _reject_float(text: str):
    raise StructureError(
        f"floating-point numeral {text!r} is not accepted; quote coordinates as strings"
    )


def _reject_constant(text: str):
    raise StructureError(f"non-finite numeral {text!r} is not accepted")


def _checked_int(text: str) -> int:
    if len(text) > _NUMERAL_MAX_LEN:
        raise StructureError(f"numeral of {len(text)} digits is too long")
    return int(text)


def _int_field(obj: dict, name: str) -> int:
    if name not in obj:
        raise StructureError(f"missing field {name!r}")
    value = obj[name]
    if not isinstance(value, int) or isinstance(value, bool):
        raise StructureError(f"field {name!r} must be an integer, got {value!r}")
    return value


def _coord_field(value, path: str) -> Coord:
    if isinstance(value, str):
        if len(value) > _NUMERAL_MAX_LEN:
            raise StructureError(f"{path}: numeral of {len(value)} characters is too long")
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise StructureError(f"{path}: cannot parse coordinate {value!r}") from None
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    raise StructureError(f"{path}: coordinates must be strings or integers, got {value!r}")


def _coord_list(value, path: str, expected: int | None = None) -> tuple[Coord, ...]:
    if not isinstance(value, list):
        raise StructureError(f"{path} must be an array")
    if expected is not None and len(value) != expected:
        raise StructureError(f"{path} has {len(value)} entries, expected {expected}")
    return tuple(_coord_field(v, f"{path}[{i}]") for i, v in enumerate(value))


def parse_instance(data: bytes | str) -> Instance | WeightedInstance:
    """Parse and validate one instance document.

    Raises ``StructureError`` with a line/field diagnostic on malformed
    JSON, schema violations, ragged stage vectors, or negative weights.
    """
    text = data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data
    try:
        obj = json.loads(
            text,
            parse_float=_reject_float,
            parse_constant=_reject_constant,
            parse_int=_checked_int,
        )
    except json.JSONDecodeError as exc:
        raise StructureError(
            f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(obj, dict):
        raise StructureError("instance document must be a JSON object")

    weighted = any(key in obj for key in ("k", "starts", "weights"))
    allowed = {"n", "T", "start", "stages"}
    if weighted:
        allowed |= {"k", "starts", "weights"}
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise StructureError(f"unknown field(s): {', '.join(unknown)}")

    n = _int_field(obj, "n")
    T = _int_field(obj, "T")
    if "stages" not in obj:
        raise StructureError("missing field 'stages'")
    if not isinstance(obj["stages"], list):
        raise StructureError("field 'stages' must be an array of stage vectors")
    if len(obj["stages"]) != T:
        raise StructureError(f"stages has {len(obj['stages'])} entries, expected T={T}")
    stages = tuple(
        _coord_list(row, f"stages[{t}]", expected=n) for t, row in enumerate(obj["stages"])
    )

    if weighted:
        for key in ("k", "starts", "weights"):
            if key not in obj:
                raise StructureError(f"weighted instance is missing field {key!r}")
        k = _int_field(obj, "k")
        starts = _coord_list(obj["starts"], "starts", expected=None)
        weights = _coord_list(obj["weights"], "weights", expected=None)
        if "start" in obj:  # tolerated leftover from the single-facility form
            _coord_field(obj["start"], "start")
        return WeightedInstance(n=n, T=T, k=k, starts=starts, weights=weights, stages=stages)

    if "start" not in obj:
        raise StructureError("missing field 'start'")
    start = _coord_field(obj["start"], "start")
    return Instance(n=n, T=T, start=start, stages=stages)


def _frac(value) -> str:
    return str(as_coord(value))


def emit_solution(solution, cost) -> bytes:
    """Stable JSON bytes for a placement sequence and its exact cost.

    The decimal field is an annotation for human readers; the fraction
    strings are the values of record.
    """
    if solution and isinstance(solution[0], tuple):
        y = [[_frac(c) for c in row] for row in solution]
    else:
        y = [_frac(c) for c in solution]
    cost = as_coord(cost)
    doc = {"y": y, "cost": str(cost), "cost_decimal": float(cost)}
    return json.dumps(doc, separators=(",", ":")).encode("utf-8")


def emit_instance(instance: Instance | WeightedInstance) -> bytes:
    """Stable JSON bytes for an instance; round-trips through ``parse_instance``."""
    stages = [[_frac(x) for x in row] for row in instance.stages]
    if isinstance(instance, WeightedInstance):
        doc = {
            "n": instance.n,
            "T": instance.T,
            "k": instance.k,
            "starts": [_frac(s) for s in instance.starts],
            "weights": [_frac(w) for w in instance.weights],
            "stages": stages,
        }
    else:
        doc = {
            "n": instance.n,
            "T": instance.T,
            "start": _frac(instance.start),
            "stages": stages,
        }
    return json.dumps(doc, separators=(",", ":")).encode("utf-8")


# ---------------------------------------------------------------------------
# command helpers


def _read_document(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _load_instance(path: str) -> Instance | WeightedInstance:
    return parse_instance(_read_document(path))


def _load_single(path: str) -> Instance:
    inst = _load_instance(path)
    if isinstance(inst, WeightedInstance):
        raise StructureError(f"{path}: this command needs a single-facility instance")
    return inst


def _budget(args, default: int) -> int:
    if getattr(args, "budget", None) is not None:
        return args.budget
    env = os.environ.get("FR_BUDGET")
    if env is not None:
        try:
            value = int(env)
        except ValueError:
            raise StructureError(f"FR_BUDGET must be an integer, got {env!r}") from None
        if value < 1:
            raise StructureError(f"FR_BUDGET must be positive, got {value}")
        return value
    return default


def _mechanism(name: str) -> MechanismId:
    try:
        return _MECH_ALIASES[name]
    except KeyError:
        raise StructureError(f"unknown mechanism {name!r}") from None


def _print_bytes(data: bytes) -> None:
    sys.stdout.buffer.write(data + b"\n")
    sys.stdout.buffer.flush()


# ---------------------------------------------------------------------------
# subcommands


def _cmd_solve(args) -> int:
    inst = _load_instance(args.instance)
    if isinstance(inst, WeightedInstance):
        if args.k is not None and args.k != inst.k:
            raise StructureError(
                f"--k {args.k} conflicts with the instance's k={inst.k}"
            )
        sol = solve_multi_dp(inst, state_budget=_budget(args, DEFAULT_STATE_BUDGET))
        _print_bytes(emit_solution(sol, weighted_cost(inst, sol)))
        return 0
    if args.k is not None:
        lifted = lift_instance(inst, args.k)
        sol = solve_multi_dp(lifted, state_budget=_budget(args, DEFAULT_STATE_BUDGET))
        _print_bytes(emit_solution(sol, weighted_cost(lifted, sol)))
        return 0
    sol = solve_offline(inst)
    _print_bytes(emit_solution(sol, total_cost(inst, sol)))
    return 0


def _cmd_online(args) -> int:
    if args.stream:
        if args.start is None:
            raise StructureError("--stream requires --start")
        state = OnlineState.initial(_coord_field(args.start, "--start"))
        for lineno, line in enumerate(sys.stdin, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                row = json.loads(
                    line,
                    parse_float=_reject_float,
                    parse_constant=_reject_constant,
                    parse_int=_checked_int,
                )
            except json.JSONDecodeError as exc:
                raise StructureError(f"stream line {lineno}: {exc.msg}") from exc
            if not isinstance(row, list):
                raise StructureError(f"stream line {lineno}: expected a JSON array")
            xs = tuple(_coord_field(v, f"line {lineno}[{i}]") for i, v in enumerate(row))
            state, y = online_step(state, xs)
            print(_frac(y), flush=True)
        return 0
    if args.instance is None:
        raise StructureError("an instance file is required unless --stream is given")
    inst = _load_single(args.instance)
    sol = run_online(inst)
    _print_bytes(emit_solution(sol, total_cost(inst, sol)))
    return 0


def _cmd_sp(args) -> int:
    inst = _load_single(args.instance)
    sol = run_sp(inst)
    _print_bytes(emit_solution(sol, total_cost(inst, sol)))
    return 0


def _cmd_oracle(args) -> int:
    inst = _load_instance(args.instance)
    if isinstance(inst, WeightedInstance):
        sol, cost = oracle_optimal_weighted(
            inst, sequence_budget=_budget(args, DEFAULT_SEQUENCE_BUDGET)
        )
    else:
        sol, cost = oracle_optimal(inst)
    _print_bytes(emit_solution(sol, cost))
    return 0


def _ratio_instances(args):
    if args.instances:
        if args.family is not None:
            raise StructureError("give either --family or instance files, not both")
        for path in args.instances:
            yield path, _load_single(path)
        return
    if args.family == "lowerbound":
        for ell in range(1, args.max_ell + 1):
            base, prime = gen_lowerbound_family(ell)
            yield f"lowerbound_ell{ell}_base", base
            yield f"lowerbound_ell{ell}_prime", prime
    elif args.family == "sp-tight":
        if args.min_n < 2:
            raise StructureError("--min-n must be at least 2")
        for n in range(args.min_n, args.max_n + 1):
            yield f"sp_tight_n{n}", gen_sp_tight_family(n)
    elif args.family == "random":
        rng = SplitMix64(args.seed)
        for i in range(args.count):
            n = 1 + rng.below(args.max_n)
            if args.odd_n:
                n = n if n % 2 else (n + 1 if n < args.max_n else n - 1)
                n = max(1, n)
            T = 1 + rng.below(args.max_stages)
            seed = rng.next_u64()
            yield f"random_{i}_seed{seed}", gen_random(n, T, args.coord_max, seed)
    else:
        raise StructureError("ratio needs --family or instance files")


def _cmd_ratio(args) -> int:
    mech = _mechanism(args.mech)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(
        [
            "instance_id",
            "mechanism",
            "mech_cost",
            "opt_cost",
            "ratio",
            "mech_cost_decimal",
            "opt_cost_decimal",
            "ratio_decimal",
        ]
    )
    for iid, inst in _ratio_instances(args):
        rep = measure_ratio(inst, mech, instance_id=iid)
        writer.writerow(
            [
                rep.instance_id,
                rep.mechanism.value,
                str(rep.mech_cost),
                str(rep.opt_cost),
                str(rep.ratio),
                float(rep.mech_cost),
                float(rep.opt_cost),
                float(rep.ratio),
            ]
        )
    return 0


def _cmd_audit(args) -> int:
    mech = _mechanism(args.mech)
    budget = _budget(args, DEFAULT_SEARCH_BUDGET)
    instances = [(path, _load_single(path)) for path in args.instances]
    report = audit_strategyproof(
        [inst for _, inst in instances],
        mech,
        budget=budget,
        ids=[path for path, _ in instances],
    )
    results = []
    budget_hit = False
    for (path, inst), entry in zip(instances, report.entries):
        row: dict = {"instance_id": entry.instance_id}
        if entry.error is not None:
            row["error"] = entry.error
            budget_hit = True
        elif entry.deviation is None:
            row["manipulable"] = False
        else:
            dev = entry.deviation
            row["manipulable"] = True
            row["agent"] = dev.agent
            row["reports"] = [_frac(r) for r in dev.reports]
            row["gain"] = _frac(dev.gain)
            row["gain_decimal"] = float(dev.gain)
        if args.pairs:
            try:
                pair = find_pair_manipulation(inst, mech, budget)
            except BudgetError as exc:
                row["pair_error"] = str(exc)
                budget_hit = True
            else:
                if pair is None:
                    row["pair"] = None
                else:
                    row["pair"] = {
                        "agents": list(pair.agents),
                        "reports": [[_frac(r) for r in rep] for rep in pair.reports],
                        "gains": [_frac(g) for g in pair.gains],
                    }
        results.append(row)
    doc = {"mechanism": mech.value, "results": results}
    _print_bytes(json.dumps(doc, separators=(",", ":")).encode("utf-8"))
    return 3 if budget_hit else 0


def _cmd_gen(args) -> int:
    if args.family == "lowerbound":
        if args.ell is None:
            raise StructureError("gen --family lowerbound needs --ell")
        base, prime = gen_lowerbound_family(args.ell)
        inst = prime if args.variant == "prime" else base
    elif args.family == "sp-tight":
        if args.n is None:
            raise StructureError("gen --family sp-tight needs --n")
        inst = gen_sp_tight_family(args.n)
    else:
        if args.n is None or args.stages is None or args.seed is None:
            raise StructureError("gen --family random needs --n, --stages, and --seed")
        inst = gen_random(args.n, args.stages, args.coord_max, args.seed)
    _print_bytes(emit_instance(inst))
    return 0


# ---------------------------------------------------------------------------
# parser wiring


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frealloc",
        description="Exact multi-stage facility reallocation on a line.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="optimal offline solution")
    p_solve.add_argument("instance", help="instance JSON file, or - for stdin")
    p_solve.add_argument(
        "--k", type=int, default=None,
        help="solve with k facilities (lifts a single-facility instance)",
    )
    p_solve.add_argument("--budget", type=int, default=None, help="override the DP state budget")
    p_solve.set_defaults(func=_cmd_solve)

    p_online = sub.add_parser("online", help="stage-by-stage online placement")
    p_online.add_argument("instance", nargs="?", default=None)
    p_online.add_argument(
        "--stream", action="store_true",
        help="read one JSON stage vector per stdin line, emit one placement per line",
    )
    p_online.add_argument("--start", default=None, help="start location (stream mode)")
    p_online.set_defaults(func=_cmd_online)

    p_sp = sub.add_parser("sp", help="strategy-proof middle-agent placement")
    p_sp.add_argument("instance")
    p_sp.set_defaults(func=_cmd_sp)

    p_oracle = sub.add_parser("oracle", help="exhaustive ground-truth optimum")
    p_oracle.add_argument("instance")
    p_oracle.add_argument("--budget", type=int, default=None, help="override the enumeration budget")
    p_oracle.set_defaults(func=_cmd_oracle)

    p_ratio = sub.add_parser("ratio", help="competitive ratios as CSV")
    p_ratio.add_argument("--mech", required=True, choices=sorted(_MECH_ALIASES))
    p_ratio.add_argument("instances", nargs="*", help="instance files (alternative to --family)")
    p_ratio.add_argument("--family", choices=["lowerbound", "sp-tight", "random"], default=None)
    p_ratio.add_argument("--max-ell", type=int, default=10)
    p_ratio.add_argument("--min-n", type=int, default=2)
    p_ratio.add_argument("--max-n", type=int, default=7)
    p_ratio.add_argument("--max-stages", type=int, default=4)
    p_ratio.add_argument("--coord-max", type=int, default=10)
    p_ratio.add_argument("--count", type=int, default=100)
    p_ratio.add_argument("--seed", type=int, default=0)
    p_ratio.add_argument("--odd-n", action="store_true", help="restrict random draws to odd n")
    p_ratio.set_defaults(func=_cmd_ratio)

    p_audit = sub.add_parser("audit", help="search for profitable misreports")
    p_audit.add_argument("--mech", required=True, choices=sorted(_MECH_ALIASES))
    p_audit.add_argument("instances", nargs="+", help="instance JSON files")
    p_audit.add_argument("--pairs", action="store_true", help="also search two-agent coalitions")
    p_audit.add_argument("--budget", type=int, default=None, help="override the search budget")
    p_audit.set_defaults(func=_cmd_audit)

    p_gen = sub.add_parser("gen", help="emit a generated instance")
    p_gen.add_argument("--family", required=True, choices=["lowerbound", "sp-tight", "random"])
    p_gen.add_argument("--ell", type=int, default=None)
    p_gen.add_argument("--variant", choices=["base", "prime"], default="base")
    p_gen.add_argument("--n", type=int, default=None)
    p_gen.add_argument("--stages", type=int, default=None)
    p_gen.add_argument("--coord-max", type=int, default=10)
    p_gen.add_argument("--seed", type=int, default=None)
    p_gen.set_defaults(func=_cmd_gen)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StructureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
