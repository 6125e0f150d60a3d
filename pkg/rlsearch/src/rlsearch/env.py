"""Gathering environment: image observations, diagonal actions, frame
skipping, gathered-within-radius termination."""

from __future__ import annotations

import random

import numpy as np

from rlsearch.config import RLEnvConfig
from rlsearch.reward import RewardState, distance_summary, initial_state, reward_step
from rlsearch.simulator import Workspace

OBS_SIZE = 84
# Actions 0..3 are the basic motions; 4..7 are diagonals expanded into their
# two basic motions in seeded-random order.
BASIC_ACTIONS = ("U", "D", "L", "R")
DIAGONAL_ACTIONS = (("U", "R"), ("U", "L"), ("D", "R"), ("D", "L"))
N_ACTIONS = 8


class GatherEnv:
    """Reset/step environment over one workspace instance."""

    def __init__(self, config: RLEnvConfig):
        self.config = config
        self.workspace = Workspace.from_file(config.instance_path)
        self.extremes = self.workspace.extreme_pixels()
        self.dist_grids = {
            q: self.workspace.distance_grid(cell) for q, cell in self.extremes.items()
        }
        self.rng = random.Random(config.seed)
        self.occ = None
        self.reward_state: RewardState | None = None
        self.command_log: list[str] = []
        self.done = True
        self.best_solution: list[str] | None = None
        self.best_history: list[int] = []

    def observation(self) -> np.ndarray:
        """84x84 single-channel image: 255 where a mapped cell holds particles.

        Cells map to pixels by index scaling, so an 84-wide workspace maps
        one-to-one and a 168-wide one gets 2x2 max-pooled.
        """
        obs = np.zeros((OBS_SIZE, OBS_SIZE), dtype=np.uint8)
        ys, xs = np.nonzero(self.occ)
        h, w = self.workspace.height, self.workspace.width
        rows = (h - 1 - ys) * OBS_SIZE // h
        cols = xs * OBS_SIZE // w
        obs[rows, cols] = 255
        return obs

    def reset(self) -> np.ndarray:
        if self.workspace.particles:
            self.occ = self.workspace.occupancy_from(self.workspace.particles)
        else:
            self.occ = self.workspace.full_occupancy()
        self.reward_state = initial_state(
            self.dist_grids, self.occ, self.config.motion_limit
        )
        self.command_log = []
        self.done = self.reward_state.max_dist0 <= self.config.gather_radius
        return self.observation()

    def _expand(self, action: int) -> list[str]:
        commands = []
        for _ in range(self.config.frame_skip):
            if action < 4:
                commands.append(BASIC_ACTIONS[action])
            else:
                pair = list(DIAGONAL_ACTIONS[action - 4])
                self.rng.shuffle(pair)
                commands.extend(pair)
        # Never emit past the motion limit, so the accumulated penalty stays
        # within -1 for every period.
        room = self.config.motion_limit - len(self.command_log)
        return commands[:room]

    def step(self, action: int):
        if self.done:
            raise RuntimeError("step() called on a finished period; call reset()")
        if not 0 <= action < N_ACTIONS:
            raise ValueError(f"action {action} out of range")
        commands = self._expand(action)
        for command in commands:
            self.occ = self.workspace.step(self.occ, command)
        self.command_log.extend(commands)
        reward, self.reward_state = reward_step(
            self.reward_state, self.dist_grids, self.occ, len(commands)
        )
        worst, _, quadrant = distance_summary(self.dist_grids, self.occ)
        gathered = worst <= self.config.gather_radius
        out_of_motions = len(self.command_log) >= self.config.motion_limit
        self.done = gathered or out_of_motions
        if gathered:
            if self.best_solution is None or len(self.command_log) < len(self.best_solution):
                self.best_solution = list(self.command_log)
            self.best_history.append(len(self.best_solution))
        info = {
            "gathered": gathered,
            "motions": len(self.command_log),
            "extreme": quadrant,
            "max_extreme_dist": worst,
        }
        return self.observation(), reward, self.done, info

    def occupied_cells(self) -> frozenset:
        return self.workspace.occupied_cells(self.occ)
