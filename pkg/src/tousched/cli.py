"""Command-line interface.

Subcommands: ``solve`` runs the evolutionary search and writes every
artifact, ``evaluate`` scores one solution against an instance,
``gen`` emits a synthetic instance file, and ``rank`` orders an existing
front CSV.  Exit codes: 0 success, 2 bad input, 3 infeasible instance,
4 degenerate ranking.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .encoding import Chromosome, decode, timing
from .generator import PROFILES, generate_instance
from .instance import (
    InfeasibleInstanceError,
    InstanceFormatError,
    instance_digest,
    parse_instance,
    write_instance,
)
from .moea import TouBatchScheduler, _resolve_threads
from .objectives import BIG_M, check_constraints, evaluate_chromosome
from .reports import (
    gantt_svg,
    load_histogram,
    read_pareto_csv,
    unit_rows,
    write_load_histogram_csv,
    write_manifest,
    write_pareto_csv,
    write_ranking_csv,
    write_schedule_csv,
)
from .tariff import CostMode
from .topsis import DegenerateFrontError, RankedSolution, TopsisRanking, rank_front
from .validation import check_permutation


def _weights(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected two comma-separated weights, e.g. 0.4,0.6")
    try:
        w = (float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if w[0] <= 0 or w[1] <= 0:
        raise argparse.ArgumentTypeError("weights must be positive")
    return w


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tousched",
        description="Electricity-cost-aware batch scheduling under time-of-use tariffs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="evolve a Pareto front and recommend a schedule")
    solve.add_argument("instance", help="instance JSON file")
    solve.add_argument("-o", "--out-dir", default=".", help="directory for result artifacts")
    solve.add_argument("--seed", type=int, default=None, help="master random seed")
    solve.add_argument("--generations", type=int, default=2000)
    solve.add_argument("--population", type=int, default=50)
    solve.add_argument("--pc", type=float, default=0.4, help="crossover probability")
    solve.add_argument("--pm", type=float, default=0.6, help="mutation probability")
    solve.add_argument("--weights", type=_weights, default=(0.4, 0.6), metavar="W1,W2")
    solve.add_argument("--cost-mode", choices=[m.value for m in CostMode], default="proportional")
    solve.add_argument("--svg", action="store_true", help="also write a gantt.svg timeline")
    solve.add_argument("-v", "--verbose", action="count", default=0)
    solve.set_defaults(func=cmd_solve)

    ev = sub.add_parser("evaluate", help="score one solution file against an instance")
    ev.add_argument("instance", help="instance JSON file")
    ev.add_argument("solution", help='solution JSON {"perm": [...], "idle": [...]} or a pareto CSV')
    ev.add_argument("--row", type=int, default=0, help="row to pick when the solution is a CSV")
    ev.add_argument("--cost-mode", choices=[m.value for m in CostMode], default="proportional")
    ev.set_defaults(func=cmd_evaluate)

    gen = sub.add_parser("gen", help="generate a synthetic instance file")
    gen.add_argument("n_slabs", type=int)
    gen.add_argument("unit_count", type=int)
    gen.add_argument("-o", "--out", default="instance.json", help="output file")
    gen.add_argument("--seed", type=int, default=None)
    gen.add_argument("--profile", choices=PROFILES, default="many-varieties,full-load")
    gen.set_defaults(func=cmd_gen)

    rank = sub.add_parser("rank", help="rank an existing front CSV by relative closeness")
    rank.add_argument("front", help="CSV with f1_cny and f2_penalty columns")
    rank.add_argument("-o", "--out", default="ranking.csv", help="output file")
    rank.add_argument("--weights", type=_weights, default=(0.4, 0.6), metavar="W1,W2")
    rank.set_defaults(func=cmd_rank)

    return parser


def _trivial_ranking(front, weights) -> TopsisRanking:
    ind = front[0]
    entry = RankedSolution(
        0, 1.0, ind.objectives.power_cost_cny, ind.objectives.jump_penalty
    )
    return TopsisRanking((entry,), weights)


def cmd_solve(args) -> int:
    instance = parse_instance(args.instance)
    scheduler = TouBatchScheduler(
        population_size=args.population,
        generations=args.generations,
        crossover_prob=args.pc,
        mutation_prob=args.pm,
        cost_mode=args.cost_mode,
        random_state=args.seed,
        verbose=args.verbose,
    )
    started = time.perf_counter()
    scheduler.fit(instance)
    elapsed = time.perf_counter() - started
    front = scheduler.pareto_front_
    if not front:
        print("no feasible schedule found for this instance", file=sys.stderr)
        return 3

    os.makedirs(args.out_dir, exist_ok=True)
    paths = {name: os.path.join(args.out_dir, name) for name in (
        "pareto.csv", "ranking.csv", "schedule_report.csv", "load_histogram.csv", "manifest.json",
    )}
    write_pareto_csv(paths["pareto.csv"], front)

    if len(front) == 1:
        ranking = _trivial_ranking(front, args.weights)
    else:
        ranking = rank_front([ind.objectives for ind in front], args.weights)
    write_ranking_csv(paths["ranking.csv"], ranking)

    best = ranking.recommended
    chosen = front[best.solution_index]
    batch = decode(chosen.chromosome.perm, instance)
    timed = timing(batch, chosen.chromosome.idle, instance)
    write_schedule_csv(paths["schedule_report.csv"], unit_rows(batch, timed, instance))
    write_load_histogram_csv(paths["load_histogram.csv"], load_histogram(timed, instance))
    if args.svg:
        paths["gantt.svg"] = os.path.join(args.out_dir, "gantt.svg")
        with open(paths["gantt.svg"], "w", encoding="utf-8") as fh:
            fh.write(gantt_svg(timed, instance))

    from tousched import __version__

    write_manifest(paths["manifest.json"], {
        "version": __version__,
        "command": "solve",
        "instance_sha256": instance_digest(instance),
        "params": {k: (v.value if isinstance(v, CostMode) else v)
                   for k, v in scheduler.get_params().items()},
        "weights": list(args.weights),
        "threads": _resolve_threads(None),
        "wall_time_s": round(elapsed, 3),
        "artifacts": sorted(os.path.basename(p) for p in paths.values()),
    })

    print(
        f"front size {len(front)}, recommended solution {best.solution_index}: "
        f"closeness {best.closeness:.4f}, power cost {best.power_cost_cny:.2f} CNY, "
        f"jump penalty {best.jump_penalty:g}"
    )
    print(f"artifacts written to {args.out_dir}")
    return 0


def _load_solution(path: str, row: int, instance) -> Chromosome:
    size = len(instance.slabs) * instance.unit_count
    if path.endswith(".csv"):
        rows = read_pareto_csv(path)
        if not 0 <= row < len(rows):
            raise InstanceFormatError(f"row {row} out of range, CSV has {len(rows)} rows")
        perm, idle = rows[row]["perm"], rows[row]["idle"]
    else:
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InstanceFormatError(f"solution file is not valid JSON: {exc}") from None
        if not isinstance(data, dict) or "perm" not in data or "idle" not in data:
            raise InstanceFormatError('solution JSON needs "perm" and "idle" lists')
        perm = tuple(int(c) for c in data["perm"])
        idle = tuple(float(v) for v in data["idle"])
    try:
        check_permutation(perm, size)
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from None
    if len(idle) != instance.unit_count:
        raise InstanceFormatError(
            f"idle vector has {len(idle)} entries, expected {instance.unit_count}"
        )
    return Chromosome(perm, idle)


def cmd_evaluate(args) -> int:
    instance = parse_instance(args.instance)
    chromosome = _load_solution(args.solution, args.row, instance)
    batch = decode(chromosome.perm, instance)
    if not batch.feasible:
        print(f"f1 power cost (CNY): {BIG_M!r}")
        print(f"f2 jump penalty:     {BIG_M!r}")
        print("infeasible decode:")
        if batch.unplaced:
            print(f"  slabs with no valid placement: {sorted(batch.unplaced)}")
        if batch.short_units:
            print(f"  units below the length floor: {[k + 1 for k in batch.short_units]}")
        return 0
    violations = check_constraints(batch.units, chromosome.idle, instance)
    if violations:
        print(f"f1 power cost (CNY): {BIG_M!r}")
        print(f"f2 jump penalty:     {BIG_M!r}")
        print("constraint violations:")
        for v in violations:
            print(f"  {v}")
        return 0
    objectives, batch, timed = evaluate_chromosome(
        chromosome, instance, CostMode.coerce(args.cost_mode)
    )
    print(f"f1 power cost (CNY): {objectives.power_cost_cny!r}")
    print(f"f2 jump penalty:     {objectives.jump_penalty!r}")
    print("feasible: all constraints satisfied")
    header = (
        f"{'unit':>4} {'slabs':>5} {'length_km':>10} {'time_h':>8} "
        f"{'energy_mwh':>10} {'avg_mw':>7} {'idle_h':>7} {'start_h':>8} {'end_h':>8}"
    )
    print(header)
    for r in unit_rows(batch, timed, instance):
        print(
            f"{r['unit']:>4} {r['slab_quantity']:>5} {r['rolling_length_km']:>10.3f} "
            f"{r['processing_time_h']:>8.3f} {r['power_demand_mwh']:>10.3f} "
            f"{r['avg_load_mw']:>7.2f} {r['idle_before_h']:>7.3f} "
            f"{r['start_h']:>8.3f} {r['end_h']:>8.3f}"
        )
    return 0


def cmd_gen(args) -> int:
    instance = generate_instance(args.n_slabs, args.unit_count, args.seed, args.profile)
    write_instance(instance, args.out)
    total = instance.total_time_h
    print(
        f"wrote {args.out}: {args.n_slabs} slabs, {args.unit_count} units, "
        f"load {total / instance.horizon_h:.3f} of the {instance.horizon_h} h horizon"
    )
    return 0


def cmd_rank(args) -> int:
    rows = read_pareto_csv(args.front)
    ranking = rank_front([(r["f1_cny"], r["f2_penalty"]) for r in rows], args.weights)
    write_ranking_csv(args.out, ranking)
    best = ranking.recommended
    print(
        f"ranked {len(ranking.entries)} solutions; best is row {best.solution_index}: "
        f"closeness {best.closeness:.4f}, f1 {best.power_cost_cny:.2f}, f2 {best.jump_penalty:g}"
    )
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InstanceFormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except InfeasibleInstanceError as exc:
        print(f"infeasible instance: {exc}", file=sys.stderr)
        return 3
    except DegenerateFrontError as exc:
        print(f"degenerate ranking: {exc}", file=sys.stderr)
        return 4
    except FileNotFoundError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main())
