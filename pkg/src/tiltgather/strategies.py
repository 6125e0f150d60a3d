"""Gathering strategies and the end-to-end driver.

Four strategies are provided.  The pair strategies (static shortest path,
replanning shortest path, move-to-extremum) merge two tracked particles at a
time; the sum-to-extremum greedy works on whole configurations.  All
strategies emit plain command strings and are deterministic given a seed.

Tie-breaking conventions used throughout: "row-major" order on cells means
ascending (y, x); command ties resolve in U, D, L, R order; extremum ties
resolve in NE, NW, SE, SW order.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from tiltgather.grid import (
    Cell,
    Instance,
    Polyomino,
    convex_corners,
    diameter,
    distance_map,
    extreme_pixel,
)
from tiltgather.sim import COMMANDS, Configuration, VECTORS, step_cell

STRATEGIES = ("ssp", "dsp", "mte", "mste")
PAIR_POLICIES = ("random", "distant")
_QUADRANT_ORDER = ("NE", "NW", "SE", "SW")
_CORNER_PUSH = {"NW": "LU", "NE": "RU", "SW": "LD", "SE": "RD"}
_CORNER_TIE = ("NW", "NE", "SW", "SE")
_APD_CELL_LIMIT = 3000


@dataclass
class StrategyConfig:
    strategy: str = "mste"
    pair_policy: str = "random"
    preprocess: bool = False
    quadrant: str = "auto"
    seed: int = 0
    step_limit: Optional[int] = None

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.pair_policy not in PAIR_POLICIES:
            raise ValueError(f"unknown pair policy {self.pair_policy!r}")
        if self.quadrant not in _QUADRANT_ORDER + ("auto",):
            raise ValueError(f"unknown quadrant {self.quadrant!r}")
        if self.step_limit is not None and self.step_limit <= 0:
            raise ValueError("step limit must be positive")


@dataclass
class RunResult:
    sequence: str
    length: int
    gathered: bool
    wall_time_ms: float
    trace: list[int] = field(default_factory=list)


def default_step_limit(polyomino: Polyomino) -> int:
    """50 * D * max(1, k//4); the diameter is estimated on huge workspaces."""
    fast = polyomino.cell_count > 50_000
    d = diameter(polyomino, fast=fast)
    k = polyomino.corner_count
    return 50 * max(1, d) * max(1, k // 4)


def _row_major(cell: Cell) -> tuple[int, int]:
    return (cell[1], cell[0])


def _shift(occ: np.ndarray, free: np.ndarray, command: str) -> np.ndarray:
    """Occupancy grid after one command; blocked particles stay put."""
    new = np.zeros_like(occ)
    if command == "U":
        new[1:, :] |= occ[:-1, :] & free[1:, :]
        new[:-1, :] |= occ[:-1, :] & ~free[1:, :]
        new[-1, :] |= occ[-1, :]
    elif command == "D":
        new[:-1, :] |= occ[1:, :] & free[:-1, :]
        new[1:, :] |= occ[1:, :] & ~free[:-1, :]
        new[0, :] |= occ[0, :]
    elif command == "L":
        new[:, :-1] |= occ[:, 1:] & free[:, :-1]
        new[:, 1:] |= occ[:, 1:] & ~free[:, :-1]
        new[:, 0] |= occ[:, 0]
    elif command == "R":
        new[:, 1:] |= occ[:, :-1] & free[:, 1:]
        new[:, :-1] |= occ[:, :-1] & ~free[:, 1:]
        new[:, -1] |= occ[:, -1]
    else:
        raise ValueError(f"unknown command {command!r}")
    return new


class _World:
    """Mutable simulation state: occupancy grid, command log, count trace."""

    def __init__(self, polyomino: Polyomino, config: Configuration, limit: int):
        self.polyomino = polyomino
        self.free = polyomino.free_mask
        self.occ = np.zeros_like(self.free)
        for (x, y) in config:
            self.occ[y, x] = True
        self.commands: list[str] = []
        self.trace: list[int] = []
        self.limit = limit

    @property
    def exhausted(self) -> bool:
        return len(self.commands) >= self.limit

    def count(self) -> int:
        return int(self.occ.sum())

    def config(self) -> Configuration:
        ys, xs = np.nonzero(self.occ)
        return frozenset(zip(xs.tolist(), ys.tolist()))

    def step(self, command: str) -> None:
        self.occ = _shift(self.occ, self.free, command)
        self.commands.append(command)
        self.trace.append(self.count())

    def run(self, commands: Iterator[str]) -> None:
        """Feed commands until the iterator ends or the limit is reached."""
        for command in commands:
            if self.exhausted:
                break
            self.step(command)


def _pair_distance(polyomino: Polyomino, a: Cell, b: Cell) -> int:
    if a == b:
        return 0
    if polyomino.cell_count <= _APD_CELL_LIMIT:
        apd = polyomino.all_pairs_distances_cached()
        idx = polyomino.cell_index()
        return int(apd[idx[a], idx[b]])
    return distance_map(polyomino, [a]).dist[b]


def _path_commands(polyomino: Polyomino, start: Cell, dmap: dict[Cell, int]) -> list[str]:
    """Deterministic shortest-path command list following a distance map down."""
    commands = []
    cell = start
    d = dmap[cell]
    while d > 0:
        for command in COMMANDS:
            dx, dy = VECTORS[command]
            nb = (cell[0] + dx, cell[1] + dy)
            if nb in polyomino.free and dmap.get(nb, -1) == d - 1:
                commands.append(command)
                cell = nb
                d -= 1
                break
        else:
            raise RuntimeError("distance map has no descent; inconsistent state")
    return commands


def _dsp_commands(polyomino: Polyomino, a: Cell, b: Cell) -> Iterator[str]:
    """Replanning follower: chase along a shortest path, replan when the
    current distance undercuts the remaining plan or the plan runs out."""
    follower, target = sorted((a, b), key=_row_major)
    plan = _path_commands(polyomino, follower, distance_map(polyomino, [target]).dist)
    remaining = len(plan)
    pos = 0
    while follower != target:
        if remaining == 0 or _pair_distance(polyomino, follower, target) < remaining:
            plan = _path_commands(
                polyomino, follower, distance_map(polyomino, [target]).dist
            )
            remaining = len(plan)
            pos = 0
            if remaining == 0:
                return
        command = plan[pos]
        pos += 1
        remaining -= 1
        yield command
        follower = step_cell(polyomino, follower, command)
        target = step_cell(polyomino, target, command)


def _ssp_commands(polyomino: Polyomino, a: Cell, b: Cell) -> Iterator[str]:
    """Walk the follower to a static snapshot of the target, then re-check."""
    follower, target = sorted((a, b), key=_row_major)
    while follower != target:
        snapshot = target
        for command in _path_commands(
            polyomino, follower, distance_map(polyomino, [snapshot]).dist
        ):
            yield command
            follower = step_cell(polyomino, follower, command)
            target = step_cell(polyomino, target, command)
            if follower == target:
                return


def _auto_quadrant(polyomino: Polyomino, cells: list[Cell]) -> str:
    best = None
    for quadrant in _QUADRANT_ORDER:
        e = extreme_pixel(polyomino, quadrant)
        total = sum(_pair_distance(polyomino, c, e) for c in cells)
        if best is None or total < best[0]:
            best = (total, quadrant)
    return best[1]


def _mte_commands(
    polyomino: Polyomino, a: Cell, b: Cell, quadrant: str = "auto"
) -> Iterator[str]:
    """Repeatedly walk the particle farther from the extreme pixel onto it."""
    if quadrant == "auto":
        quadrant = _auto_quadrant(polyomino, [a, b])
    q = extreme_pixel(polyomino, quadrant)
    dmap = distance_map(polyomino, [q]).dist
    while a != b:
        da, db = dmap[a], dmap[b]
        if da > db or (da == db and _row_major(a) <= _row_major(b)):
            mover = a
        else:
            mover = b
        for command in _path_commands(polyomino, mover, dmap):
            yield command
            a = step_cell(polyomino, a, command)
            b = step_cell(polyomino, b, command)
            if a == b:
                return


def _dist_array(polyomino: Polyomino, target: Cell) -> np.ndarray:
    arr = np.full((polyomino.height, polyomino.width), 2**30, dtype=np.int64)
    for cell, d in distance_map(polyomino, [target]).dist.items():
        arr[cell[1], cell[0]] = d
    return arr


def _choose_extremum(polyomino: Polyomino, world: _World) -> tuple[Cell, np.ndarray]:
    best = None
    for quadrant in _QUADRANT_ORDER:
        e = extreme_pixel(polyomino, quadrant)
        arr = _dist_array(polyomino, e)
        total = int(arr[world.occ].sum())
        if best is None or total < best[0]:
            best = (total, e, arr)
    return best[1], best[2]


def _run_mste(
    world: _World,
    pair_policy: str,
    quadrant: str,
    rng: random.Random,
) -> None:
    """Greedy descent of the summed distance to the best extreme pixel;
    stuck states are broken by merging one selected pair via the
    move-to-extremum routine, then the descent resumes."""
    polyomino = world.polyomino
    e, dist_arr = _choose_extremum(polyomino, world)
    while world.count() > 1 and not world.exhausted:
        current = int(dist_arr[world.occ].sum())
        best_cmd = None
        best_sum = current
        for command in COMMANDS:
            cand = int(dist_arr[_shift(world.occ, world.free, command)].sum())
            if cand < best_sum:
                best_sum = cand
                best_cmd = command
        if best_cmd is not None:
            world.step(best_cmd)
            continue
        pair = select_pair(polyomino, world.config(), pair_policy, rng)
        _run_pair(world, pair, "mte", quadrant)


def _run_pair(world: _World, pair: tuple[Cell, Cell], kind: str, quadrant: str) -> None:
    """Drive one pair-merging routine, moving the whole configuration."""
    a, b = pair
    if kind == "dsp":
        gen = _dsp_commands(world.polyomino, a, b)
    elif kind == "ssp":
        gen = _ssp_commands(world.polyomino, a, b)
    elif kind == "mte":
        gen = _mte_commands(world.polyomino, a, b, quadrant)
    else:
        raise ValueError(f"unknown pair strategy {kind!r}")
    world.run(gen)


def select_pair(
    polyomino: Polyomino,
    config: Configuration,
    policy: str,
    rng: random.Random,
) -> tuple[Cell, Cell]:
    """Pick the pair to merge next: uniformly at random, or the most distant
    pair (ties broken row-major on the first cell, then the second)."""
    cells = sorted(config, key=_row_major)
    if len(cells) < 2:
        raise ValueError("need at least two particles to select a pair")
    if policy == "random":
        pair = rng.sample(cells, 2)
        return tuple(sorted(pair, key=_row_major))
    if policy != "distant":
        raise ValueError(f"unknown pair policy {policy!r}")
    if polyomino.cell_count <= _APD_CELL_LIMIT:
        apd = polyomino.all_pairs_distances_cached()
        idx = polyomino.cell_index()
        rows = [idx[c] for c in cells]
        sub = apd[np.ix_(rows, rows)]
        best = None
        for i in range(len(cells)):
            for j in range(i + 1, len(cells)):
                d = sub[i, j]
                if best is None or d > best[0]:
                    best = (d, i, j)
        return (cells[best[1]], cells[best[2]])
    dists = polyomino.distances_from(cells)
    col_idx = {c: i for i, c in enumerate(polyomino.sorted_cells())}
    best = None
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            d = dists[i][col_idx[cells[j]]]
            if best is None or d > best[0]:
                best = (d, i, j)
    return (cells[best[1]], cells[best[2]])


def preprocess_corners(
    polyomino: Polyomino, config: Configuration
) -> tuple[str, Configuration]:
    """Push every particle into a convex corner of the rarest corner type.

    Emits the alternating two-command push repeated diameter-many times
    (2D commands total); afterwards at most floor(k/4) particles remain.
    """
    corners = convex_corners(polyomino)
    chosen = min(_CORNER_TIE, key=lambda t: (len(corners[t]), _CORNER_TIE.index(t)))
    push = _CORNER_PUSH[chosen]
    d = polyomino.diameter
    sequence = push * d
    world = _World(polyomino, config, limit=len(sequence) + 1)
    for command in sequence:
        world.step(command)
    return sequence, world.config()


def _finish(world: _World, started: float) -> RunResult:
    return RunResult(
        sequence="".join(world.commands),
        length=len(world.commands),
        gathered=world.count() == 1,
        wall_time_ms=(time.perf_counter() - started) * 1000.0,
        trace=list(world.trace),
    )


def _pair_run(
    polyomino: Polyomino,
    config: Configuration,
    kind: str,
    limit: Optional[int],
    quadrant: str = "auto",
) -> RunResult:
    started = time.perf_counter()
    cells = sorted(config, key=_row_major)
    if len(cells) > 2:
        raise ValueError(f"{kind} merges exactly two particles, got {len(cells)}")
    limit = limit if limit is not None else default_step_limit(polyomino)
    world = _World(polyomino, frozenset(cells), limit)
    if len(cells) == 2:
        _run_pair(world, (cells[0], cells[1]), kind, quadrant)
    return _finish(world, started)


def dsp(polyomino: Polyomino, config: Configuration, limit: Optional[int] = None) -> RunResult:
    """Two-particle merge via the replanning shortest-path follower."""
    return _pair_run(polyomino, config, "dsp", limit)


def ssp(polyomino: Polyomino, config: Configuration, limit: Optional[int] = None) -> RunResult:
    """Two-particle merge via repeated walks to static target snapshots."""
    return _pair_run(polyomino, config, "ssp", limit)


def mte(
    polyomino: Polyomino,
    config: Configuration,
    quadrant: str = "auto",
    limit: Optional[int] = None,
) -> RunResult:
    """Two-particle merge by repeatedly sending the farther particle to an
    extreme pixel."""
    return _pair_run(polyomino, config, "mte", limit, quadrant)


def mste(
    polyomino: Polyomino,
    config: Configuration,
    strategy_config: Optional[StrategyConfig] = None,
) -> RunResult:
    """Whole-configuration greedy: minimize the summed distance to the best
    extreme pixel, breaking stuck states with pair merges."""
    cfg = strategy_config or StrategyConfig(strategy="mste")
    started = time.perf_counter()
    if not config:
        raise ValueError("configuration is empty")
    limit = cfg.step_limit if cfg.step_limit is not None else default_step_limit(polyomino)
    world = _World(polyomino, config, limit)
    rng = random.Random(cfg.seed)
    _run_mste(world, cfg.pair_policy, cfg.quadrant, rng)
    return _finish(world, started)


def gather(instance: Instance, config: StrategyConfig) -> RunResult:
    """Run a full gathering: optional corner preprocessing, then the chosen
    strategy until one particle remains or the step limit is hit.

    Pair strategies repeatedly select a pair (by the configured policy) and
    merge it while every other particle rides along; the configuration is
    re-read after each merge.
    """
    polyomino = instance.polyomino
    particles = instance.particles
    if not particles:
        raise ValueError("instance has no particles")
    started = time.perf_counter()
    limit = config.step_limit if config.step_limit is not None else default_step_limit(polyomino)
    world = _World(polyomino, particles, limit)
    if world.count() == 1:
        return _finish(world, started)
    rng = random.Random(config.seed)
    if config.preprocess:
        corners = convex_corners(polyomino)
        chosen = min(_CORNER_TIE, key=lambda t: (len(corners[t]), _CORNER_TIE.index(t)))
        world.run(iter(_CORNER_PUSH[chosen] * polyomino.diameter))
    if config.strategy == "mste":
        _run_mste(world, config.pair_policy, config.quadrant, rng)
        return _finish(world, started)
    while world.count() > 1 and not world.exhausted:
        pair = select_pair(polyomino, world.config(), config.pair_policy, rng)
        before = len(world.commands)
        _run_pair(world, pair, config.strategy, config.quadrant)
        if len(world.commands) == before and not world.exhausted:
            break
    return _finish(world, started)
