"""Shared builders and independent reference oracles for the test suite."""

from __future__ import annotations

import random
from collections import deque

import pytest

from tiltgather.grid import Polyomino


def poly_from_rows(rows: list[str]) -> Polyomino:
    """Build a polyomino from text rows, top row first ('.' free, '#' blocked)."""
    height = len(rows)
    width = max(len(r) for r in rows)
    free = set()
    for r, row in enumerate(rows):
        for x, ch in enumerate(row):
            if ch == ".":
                free.add((x, height - 1 - r))
    return Polyomino(width=width, height=height, free=frozenset(free))


def random_polyomino(seed: int, max_cells: int = 12) -> Polyomino:
    """Small random polyomino grown cell by cell; used for oracle cross-checks."""
    rng = random.Random(seed)
    cells = {(0, 0)}
    target = rng.randint(4, max_cells)
    recent = (0, 0)
    while len(cells) < target:
        base = recent if rng.random() < 0.6 else rng.choice(sorted(cells))
        dx, dy = rng.choice([(1, 0), (-1, 0), (0, 1), (0, -1)])
        cell = (base[0] + dx, base[1] + dy)
        if cell not in cells:
            cells.add(cell)
            recent = cell
    xs = [c[0] for c in cells]
    ys = [c[1] for c in cells]
    cells = frozenset((x - min(xs), y - min(ys)) for x, y in cells)
    return Polyomino(
        width=max(c[0] for c in cells) + 1,
        height=max(c[1] for c in cells) + 1,
        free=cells,
    )


def naive_all_pairs(polyomino: Polyomino) -> dict:
    """Plain BFS from every free cell; the reference for distance tests."""
    out = {}
    for source in polyomino.free:
        dist = {source: 0}
        queue = deque([source])
        while queue:
            (x, y) = queue.popleft()
            for nb in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
                if nb in polyomino.free and nb not in dist:
                    dist[nb] = dist[(x, y)] + 1
                    queue.append(nb)
        out[source] = dist
    return out


@pytest.fixture
def row3() -> Polyomino:
    return poly_from_rows(["..."])


@pytest.fixture
def square2() -> Polyomino:
    return poly_from_rows(["..", ".."])


@pytest.fixture
def l_tromino() -> Polyomino:
    # cells (0,0), (1,0), (1,1)
    return poly_from_rows(["#.", ".."])


@pytest.fixture
def plus_pentomino() -> Polyomino:
    return poly_from_rows(["#.#", "...", "#.#"])


@pytest.fixture
def ring3() -> Polyomino:
    return poly_from_rows(["...", ".#.", "..."])
