"""Reward shaping: pay only for all-time improvements of the distance to an
extreme pixel, normalized so each component can contribute at most 1 per
period, with a -1/L penalty per emitted motion."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

_QUADRANT_ORDER = ("NE", "NW", "SE", "SW")


@dataclass(frozen=True)
class RewardState:
    """Running all-time minima and their normalizers for one period."""

    best_max: float
    best_mean: float
    max_dist0: float
    mean_dist0: float
    motion_limit: int


def distance_summary(dist_grids: dict, occ: np.ndarray) -> tuple[int, float, str]:
    """Max and mean particle distance to the best extreme pixel.

    The extreme pixel is the one minimizing the maximal particle distance
    (re-evaluated on every call; ties in NE, NW, SE, SW order), and the mean
    is taken to that same pixel.
    """
    best = None
    for quadrant in _QUADRANT_ORDER:
        grid = dist_grids[quadrant]
        values = grid[occ]
        worst = int(values.max())
        if best is None or worst < best[0]:
            best = (worst, float(values.mean()), quadrant)
    return best


def initial_state(dist_grids: dict, occ: np.ndarray, motion_limit: int) -> RewardState:
    worst, mean, _ = distance_summary(dist_grids, occ)
    return RewardState(
        best_max=float(worst),
        best_mean=mean,
        max_dist0=float(worst),
        mean_dist0=mean,
        motion_limit=motion_limit,
    )


def reward_step(
    prev: RewardState,
    dist_grids: dict,
    occ: np.ndarray,
    motions: int,
) -> tuple[float, RewardState]:
    """Reward for one environment step that emitted ``motions`` basic commands.

    reward = (prev_best_max - new_best_max) / max_dist0
           + (prev_best_mean - new_best_mean) / mean_dist0
           - motions / L
    """
    worst, mean, _ = distance_summary(dist_grids, occ)
    new_best_max = min(prev.best_max, float(worst))
    new_best_mean = min(prev.best_mean, mean)
    reward = -motions / prev.motion_limit
    if prev.max_dist0 > 0:
        reward += (prev.best_max - new_best_max) / prev.max_dist0
    if prev.mean_dist0 > 0:
        reward += (prev.best_mean - new_best_mean) / prev.mean_dist0
    new_state = replace(prev, best_max=new_best_max, best_mean=new_best_mean)
    return reward, new_state
