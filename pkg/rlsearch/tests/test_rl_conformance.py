"""Conformance with the solver: identical step semantics, shared file formats."""

import json
import random
import re
import subprocess

import pytest

from rlsearch.config import RLEnvConfig
from rlsearch.env import GatherEnv


@pytest.fixture(scope="module")
def maze_file(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("conformance")
    path = tmp / "maze.json"
    proc = subprocess.run(
        ["tiltgather", "generate", "random", "--width", "24", "--height", "24",
         "--fill", "0.7", "--holes", "--seed", "5", "--out", str(path)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    return path


def test_thousand_action_log_matches_solver(maze_file, tmp_path):
    """Replaying a 1000-action random log through the environment and through
    the solver's verifier yields identical occupied-cell sets."""
    config = RLEnvConfig(
        instance_path=str(maze_file),
        motion_limit=10**9,
        frame_skip=2,
        gather_radius=0,
        seed=7,
    )
    env = GatherEnv(config)
    env.reset()
    rng = random.Random(123)
    for _ in range(1000):
        if env.done:
            break
        env.step(rng.randrange(8))
    mine = env.occupied_cells()

    seq_path = tmp_path / "log.seq"
    seq_path.write_text("".join(env.command_log) + "\n")
    proc = subprocess.run(
        ["tiltgather", "verify", str(maze_file), str(seq_path), "--oblivious"],
        capture_output=True, text=True,
    )
    match = re.search(r"^cells: (.*)$", proc.stdout, re.MULTILINE)
    assert match, proc.stdout
    theirs = frozenset(
        tuple(int(v) for v in cell.split(","))
        for cell in match.group(1).split()
    )
    assert mine == theirs
    assert len(env.command_log) >= 2000  # 1000 actions, frame skip 2
