"""Own tilt simulation over instance files.

This re-implements the uniform tilt step so the environment has no runtime
dependency on the solver package; a conformance test checks it against the
solver's verify command cell for cell.
"""

from __future__ import annotations

import json
from collections import deque
from pathlib import Path

import numpy as np

COMMANDS = "UDLR"
VECTORS = {"U": (0, 1), "D": (0, -1), "L": (-1, 0), "R": (1, 0)}


class Workspace:
    """Free-cell grid loaded from the instance interchange format."""

    def __init__(self, width: int, height: int, free_mask: np.ndarray,
                 particles: frozenset, name: str = ""):
        self.width = width
        self.height = height
        self.free = free_mask  # bool [height, width], indexed [y, x]
        self.particles = particles
        self.name = name

    @classmethod
    def from_file(cls, path: str) -> "Workspace":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        rows = doc["grid"]
        height = len(rows)
        width = len(rows[0])
        free = np.zeros((height, width), dtype=bool)
        for r, row in enumerate(rows):
            if len(row) != width:
                raise ValueError(f"grid row {r} has inconsistent length")
            for x, ch in enumerate(row):
                if ch == ".":
                    free[height - 1 - r, x] = True
                elif ch != "#":
                    raise ValueError(f"invalid grid character {ch!r}")
        particles = frozenset((int(x), int(y)) for x, y in doc.get("particles", []))
        for (x, y) in particles:
            if not free[y, x]:
                raise ValueError(f"particle at ({x},{y}) is blocked")
        return cls(width, height, free, particles, name=doc.get("name", ""))

    def full_occupancy(self) -> np.ndarray:
        return self.free.copy()

    def occupancy_from(self, cells) -> np.ndarray:
        occ = np.zeros_like(self.free)
        for (x, y) in cells:
            occ[y, x] = True
        return occ

    def step(self, occ: np.ndarray, command: str) -> np.ndarray:
        """One uniform tilt: blocked particles stay, co-located ones merge."""
        free = self.free
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

    def occupied_cells(self, occ: np.ndarray) -> frozenset:
        ys, xs = np.nonzero(occ)
        return frozenset(zip(xs.tolist(), ys.tolist()))

    def extreme_pixels(self) -> dict[str, tuple[int, int]]:
        """Quadrant-extreme free cells, primary axis vertical."""
        ys, xs = np.nonzero(self.free)
        cells = list(zip(xs.tolist(), ys.tolist()))
        out = {}
        for quadrant, (sy, sx) in (("NE", (1, 1)), ("NW", (1, -1)),
                                   ("SE", (-1, 1)), ("SW", (-1, -1))):
            out[quadrant] = max(cells, key=lambda c: (sy * c[1], sx * c[0]))
        return out

    def distance_grid(self, source: tuple[int, int]) -> np.ndarray:
        """BFS distances from one free cell; unreachable/blocked get a large value."""
        dist = np.full((self.height, self.width), 2**30, dtype=np.int64)
        sx, sy = source
        dist[sy, sx] = 0
        queue = deque([(sx, sy)])
        while queue:
            x, y = queue.popleft()
            d = dist[y, x] + 1
            for dx, dy in VECTORS.values():
                nx, ny = x + dx, y + dy
                if 0 <= nx < self.width and 0 <= ny < self.height:
                    if self.free[ny, nx] and dist[ny, nx] > d:
                        dist[ny, nx] = d
                        queue.append((nx, ny))
        return dist
