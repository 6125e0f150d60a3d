"""Command-line entry point: generate, solve, verify, bench, oracle, render.

Exit codes: 0 success, 1 I/O error, 2 parse/validation error, 3 step-limit
or search-cap exceeded, 4 verification condition not met.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from tiltgather import generators, oracle, strategies
from tiltgather.grid import (
    Instance,
    InstanceError,
    distance_map,
    extreme_pixel,
    parse_instance,
)
from tiltgather.sim import apply, parse_sequence, step as sim_step

EXIT_OK = 0
EXIT_IO = 1
EXIT_PARSE = 2
EXIT_LIMIT = 3
EXIT_UNVERIFIED = 4


class LimitExceeded(RuntimeError):
    pass


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IOError(f"cannot read {path}: {exc}") from exc


def _write_text(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise IOError(f"cannot write {path}: {exc}") from exc


def _load_instance(path: str) -> Instance:
    return parse_instance(_read_text(path))


def _strategy_config(args) -> strategies.StrategyConfig:
    return strategies.StrategyConfig(
        strategy=args.strategy,
        pair_policy={"random": "random", "distant": "distant"}[args.pair],
        preprocess=args.preprocess,
        quadrant=args.quadrant,
        seed=args.seed,
        step_limit=args.limit,
    )


def cmd_generate(args) -> int:
    if args.family == "random":
        inst = generators.gen_random_polyomino(
            args.width, args.height, args.fill, args.holes, args.seed
        )
        if args.particles:
            config = generators.gen_random_config(
                inst.polyomino, args.particles, args.seed
            )
            inst.particles = frozenset(config)
    elif args.family == "chimney":
        inst, _ = generators.gen_chimney(args.chimney_height)
    elif args.family == "dsp-adversarial":
        inst, _ = generators.gen_dsp_adversarial(args.holes_count, args.hole_w, args.hole_h)
    elif args.family == "hardness":
        cnf = generators.parse_dimacs(_read_text(args.cnf))
        inst, _ = generators.gen_hardness(cnf)
    else:
        raise ValueError(f"unknown family {args.family!r}")
    text = inst.to_json() + "\n"
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = _load_instance(args.instance)
    if not inst.particles:
        raise InstanceError("instance has no particles to gather")
    config = _strategy_config(args)
    result = strategies.gather(inst, config)
    out = args.out or (str(Path(args.instance).with_suffix("")) + ".seq")
    _write_text(out, result.sequence + "\n")
    print(
        f"instance={inst.name} strategy={args.strategy} length={result.length} "
        f"gathered={str(result.gathered).lower()} ms={result.wall_time_ms:.1f}"
    )
    if not result.gathered:
        raise LimitExceeded(f"step limit reached after {result.length} commands")
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = _load_instance(args.instance)
    sequence = parse_sequence(_read_text(args.sequence))
    particles = inst.particles
    if args.oblivious:
        particles = frozenset(inst.polyomino.free)
    if not particles:
        raise InstanceError("nothing to verify: no particles")
    final, _ = apply(inst.polyomino, particles, sequence)
    gathered = len(final) == 1
    condition = gathered
    lines = [
        f"particles: {len(final)}",
        f"gathered: {str(gathered).lower()}",
    ]
    if args.radius is not None:
        best = None
        for quadrant in ("NE", "NW", "SE", "SW"):
            e = extreme_pixel(inst.polyomino, quadrant)
            dmap = distance_map(inst.polyomino, [e]).dist
            worst = max(dmap[c] for c in final)
            if best is None or worst < best:
                best = worst
        within = best <= args.radius
        lines.append(f"within_radius: {str(within).lower()} (max_extreme_dist={best})")
        condition = within
    if args.target is not None:
        tx, ty = (int(v) for v in args.target.split(","))
        on_target = gathered and next(iter(final)) == (tx, ty)
        lines.append(f"on_target: {str(on_target).lower()}")
        condition = condition and on_target
    cells = " ".join(f"{x},{y}" for (x, y) in sorted(final))
    lines.append(f"cells: {cells}")
    print("\n".join(lines))
    return EXIT_OK if condition else EXIT_UNVERIFIED


def _bench_rows(config: dict):
    instances = config["instances"]
    strategy_names = config.get("strategies", list(strategies.STRATEGIES))
    pairs = config.get("pairs", ["random"])
    preprocess_opts = config.get("preprocess", [False])
    seeds = config.get("seeds", [0])
    limit = config.get("limit")
    for path in instances:
        for strategy in strategy_names:
            for pair in pairs:
                for pre in preprocess_opts:
                    for seed in seeds:
                        yield (path, strategy, pair, bool(pre), int(seed), limit)


def _bench_run(task):
    path, strategy, pair, pre, seed, limit = task
    inst = _load_instance(path)
    cfg = strategies.StrategyConfig(
        strategy=strategy,
        pair_policy=pair,
        preprocess=pre,
        seed=seed,
        step_limit=limit,
    )
    result = strategies.gather(inst, cfg)
    row = (
        f"{inst.name},{strategy},{pair},{int(pre)},{seed},"
        f"{result.length},{result.wall_time_ms:.1f},{int(result.gathered)}"
    )
    return row, result

def cmd_bench(args) -> int:
    config = json.loads(_read_text(args.config))
    tasks = list(_bench_rows(config))
    print("instance,strategy,pair,preprocess,seed,length,ms,gathered")
    trace_dir = config.get("trace_dir")
    workers = int(os.environ.get("TILTGATHER_THREADS", "1"))
    if workers > 1:
        import concurrent.futures as futures

        with futures.ProcessPoolExecutor(max_workers=workers) as pool:
            outputs = list(pool.map(_bench_run, tasks))
    else:
        outputs = [_bench_run(t) for t in tasks]
    for task, (row, result) in zip(tasks, outputs):
        print(row)
        if trace_dir:
            path, strategy, pair, pre, seed, _ = task
            name = f"{Path(path).stem}_{strategy}_{pair}_{int(pre)}_{seed}.trace"
            Path(trace_dir).mkdir(parents=True, exist_ok=True)
            _write_text(
                str(Path(trace_dir) / name),
                "\n".join(str(c) for c in result.trace) + "\n",
            )
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst = _load_instance(args.instance)
    if not inst.particles:
        raise InstanceError("instance has no particles")
    if len(inst.particles) == 2:
        length, seq = oracle.optimal_pair(inst.polyomino, inst.particles)
    else:
        found = oracle.optimal_config(inst.polyomino, inst.particles, args.state_cap)
        if found is None:
            print("unknown: state cap exhausted")
            return EXIT_LIMIT
        length, seq = found
    print(f"length={length} sequence={seq}")
    return EXIT_OK


def cmd_render(args) -> int:
    inst = _load_instance(args.instance)
    sequence = ""
    if args.sequence:
        sequence = parse_sequence(_read_text(args.sequence))
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    polyomino = inst.polyomino
    config = inst.particles
    states = [config]
    for command in sequence:
        config = sim_step(polyomino, config, command)
        states.append(config)
    frame = 0
    for i in range(0, len(states), args.every):
        _write_pgm(out_dir / f"frame_{frame:06d}.pgm", polyomino, states[i])
        frame += 1
    print(f"wrote {frame} frames to {out_dir}")
    return EXIT_OK


def _write_pgm(path: Path, polyomino, config) -> None:
    w, h = polyomino.width, polyomino.height
    rows = [f"P2", f"{w} {h}", "255"]
    for row in range(h):
        y = h - 1 - row  # image rows top-down; workspace y grows upward
        values = []
        for x in range(w):
            if (x, y) in config:
                values.append("255")
            elif (x, y) in polyomino.free:
                values.append("200")
            else:
                values.append("0")
        rows.append(" ".join(values))
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tiltgather",
        description="Gather particle swarms in polyomino workspaces with uniform tilt commands.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write an instance file")
    p.add_argument("family", choices=["random", "chimney", "dsp-adversarial", "hardness"])
    p.add_argument("--width", type=int, default=20)
    p.add_argument("--height", type=int, default=20)
    p.add_argument("--fill", type=float, default=0.6)
    p.add_argument("--holes", action="store_true")
    p.add_argument("--particles", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--chimney-height", type=int, default=1)
    p.add_argument("--holes-count", type=int, default=4)
    p.add_argument("--hole-w", type=int, default=6)
    p.add_argument("--hole-h", type=int, default=4)
    p.add_argument("--cnf", help="DIMACS file for the hardness family")
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="run a gathering strategy")
    p.add_argument("instance")
    p.add_argument("--strategy", choices=strategies.STRATEGIES, default="mste")
    p.add_argument("--pair", choices=["random", "distant"], default="random")
    p.add_argument("--preprocess", action="store_true")
    p.add_argument("--quadrant", choices=["NE", "NW", "SE", "SW", "auto"], default="auto")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--limit", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="replay a command sequence")
    p.add_argument("instance")
    p.add_argument("sequence")
    p.add_argument("--oblivious", action="store_true",
                   help="replace particles with full occupancy")
    p.add_argument("--radius", type=int,
                   help="accept when all particles are within this distance of an extreme pixel")
    p.add_argument("--target", help="x,y cell the gather must end on")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="run a benchmark config, CSV to stdout")
    p.add_argument("config")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle", help="exact minimum gathering length")
    p.add_argument("instance")
    p.add_argument("--state-cap", type=int, default=oracle.DEFAULT_STATE_CAP)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("render", help="write PGM frames")
    p.add_argument("instance")
    p.add_argument("sequence", nargs="?")
    p.add_argument("--every", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_render)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except IOError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (InstanceError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except LimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT


if __name__ == "__main__":
    sys.exit(main())
