"""Training driver: learn on one instance, keep the shortest gathering log,
finish it with the solver's sum-to-extremum strategy via its CLI, and write
the concatenated command-sequence file."""

from __future__ import annotations

import argparse
import json
import subprocess
import sys
import tempfile
import time
from pathlib import Path

from rlsearch.config import RLEnvConfig, load_config
from rlsearch.env import GatherEnv
from rlsearch.ppo import train_ppo

SOLVER_CLI = "tiltgather"


def _workspace_document(env: GatherEnv, cells, name: str) -> dict:
    ws = env.workspace
    rows = []
    for row in range(ws.height):
        y = ws.height - 1 - row
        rows.append("".join("." if ws.free[y, x] else "#" for x in range(ws.width)))
    return {"name": name, "grid": rows, "particles": [list(c) for c in sorted(cells)]}


def finish_with_solver(env: GatherEnv, command_log: list[str], workdir: Path) -> str:
    """Replay the log, hand the remaining cluster to the solver CLI, and
    return the concatenated sequence."""
    occ = (
        env.workspace.occupancy_from(env.workspace.particles)
        if env.workspace.particles
        else env.workspace.full_occupancy()
    )
    for command in command_log:
        occ = env.workspace.step(occ, command)
    cells = env.workspace.occupied_cells(occ)
    instance_path = workdir / "finish_instance.json"
    instance_path.write_text(
        json.dumps(_workspace_document(env, cells, "rl_finish")), encoding="utf-8"
    )
    sequence_path = workdir / "finish.seq"
    proc = subprocess.run(
        [SOLVER_CLI, "solve", str(instance_path), "--strategy", "mste",
         "--out", str(sequence_path)],
        capture_output=True,
        text=True,
    )
    if proc.returncode != 0:
        raise RuntimeError(f"solver finishing failed: {proc.stderr.strip()}")
    tail = sequence_path.read_text(encoding="utf-8").strip()
    return "".join(command_log) + tail


def verify_with_solver(instance_path: str, sequence_path: str) -> bool:
    proc = subprocess.run(
        [SOLVER_CLI, "verify", instance_path, sequence_path, "--oblivious"],
        capture_output=True,
        text=True,
    )
    return proc.returncode == 0


def train(config: RLEnvConfig, progress_every: int = 50_000) -> str:
    """Run the search and write the finished sequence file.

    Returns the emitted sequence.  Raises RuntimeError when no period
    gathered within the step budget.
    """
    env = GatherEnv(config)
    started = time.time()

    def progress(steps: int, env_: GatherEnv) -> None:
        best = len(env_.best_solution) if env_.best_solution else None
        print(
            f"steps={steps} best_motions={best} "
            f"elapsed={time.time() - started:.0f}s",
            flush=True,
        )

    train_ppo(env, config.total_steps, seed=config.seed, progress=progress)
    if env.best_solution is None:
        raise RuntimeError(
            f"no gathering period within {config.total_steps} steps; "
            f"best residual distance {env.reward_state.best_max if env.reward_state else '?'}"
        )
    with tempfile.TemporaryDirectory() as tmp:
        sequence = finish_with_solver(env, env.best_solution, Path(tmp))
    Path(config.out_path).write_text(sequence + "\n", encoding="utf-8")
    history_path = Path(config.out_path).with_suffix(".history")
    history_path.write_text(
        "\n".join(str(v) for v in env.best_history) + "\n", encoding="utf-8"
    )
    return sequence


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="rlsearch-train",
        description="Search for a short gathering sequence by reinforcement learning.",
    )
    parser.add_argument("config", help="JSON config file mirroring RLEnvConfig")
    parser.add_argument("--total-steps", type=int, help="override the step budget")
    args = parser.parse_args(argv)
    config = load_config(args.config)
    if args.total_steps:
        config.total_steps = args.total_steps
    try:
        sequence = train(config)
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {len(sequence)} commands to {config.out_path}")
    if verify_with_solver(config.instance_path, config.out_path):
        print("verified: gathers from full occupancy")
        return 0
    print("verification failed", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
