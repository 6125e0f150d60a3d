"""Polyomino workspace model: parsing, geometry queries, BFS distances, corners.

Coordinate convention: a cell is an (x, y) pair with x growing rightward and
y growing upward.  Text grids are written top row first, so text row 0 maps
to y = height-1.  In grid strings '.' is a free cell and '#' is blocked.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path as _csgraph_shortest_path

Cell = tuple[int, int]

QUADRANTS = ("NE", "NW", "SE", "SW")


class InstanceError(ValueError):
    """Raised for malformed instance documents or invalid workspace data."""


def _neighbors(cell: Cell) -> Iterable[Cell]:
    x, y = cell
    yield (x + 1, y)
    yield (x - 1, y)
    yield (x, y + 1)
    yield (x, y - 1)


@dataclass(frozen=True)
class Polyomino:
    """An edge-connected set of free unit cells inside a bounding box.

    Immutable after construction and safe to share across workers.
    """

    width: int
    height: int
    free: frozenset[Cell]

    def __post_init__(self):
        if not self.free:
            raise InstanceError("polyomino has no free cells")
        for (x, y) in self.free:
            if not (0 <= x < self.width and 0 <= y < self.height):
                raise InstanceError(f"cell ({x},{y}) outside bounding box")
        if not self._is_connected():
            raise InstanceError("free region is not edge-connected")

    def _is_connected(self) -> bool:
        start = next(iter(self.free))
        seen = {start}
        queue = deque([start])
        while queue:
            cell = queue.popleft()
            for nb in _neighbors(cell):
                if nb in self.free and nb not in seen:
                    seen.add(nb)
                    queue.append(nb)
        return len(seen) == len(self.free)

    @property
    def cell_count(self) -> int:
        return len(self.free)

    def is_free(self, cell: Cell) -> bool:
        return cell in self.free

    @cached_property
    def free_mask(self) -> np.ndarray:
        """Boolean array indexed [y, x]; True where the cell is free."""
        mask = np.zeros((self.height, self.width), dtype=bool)
        for (x, y) in self.free:
            mask[y, x] = True
        mask.setflags(write=False)
        return mask

    @cached_property
    def _cell_index(self) -> dict[Cell, int]:
        return {cell: i for i, cell in enumerate(sorted(self.free))}

    @cached_property
    def _index_cell(self) -> list[Cell]:
        return sorted(self.free)

    @cached_property
    def _adjacency(self) -> csr_matrix:
        index = self._cell_index
        rows, cols = [], []
        for cell, i in index.items():
            for nb in _neighbors(cell):
                j = index.get(nb)
                if j is not None:
                    rows.append(i)
                    cols.append(j)
        n = len(index)
        data = np.ones(len(rows), dtype=np.int8)
        return csr_matrix((data, (rows, cols)), shape=(n, n))

    def all_pairs_distances(self) -> np.ndarray:
        """Dense matrix of pairwise grid distances over sorted free cells."""
        return _csgraph_shortest_path(self._adjacency, method="D", unweighted=True)

    @cached_property
    def _apd_cache(self) -> np.ndarray:
        return self.all_pairs_distances()

    def all_pairs_distances_cached(self) -> np.ndarray:
        return self._apd_cache

    def cell_index(self) -> dict[Cell, int]:
        """Index of each free cell in the sorted-cell order."""
        return self._cell_index

    def sorted_cells(self) -> list[Cell]:
        return self._index_cell

    def distances_from(self, cells: Iterable[Cell]) -> np.ndarray:
        """Rows of BFS distances from the given free cells (sorted-cell columns)."""
        idx = [self._cell_index[c] for c in cells]
        mat = _csgraph_shortest_path(
            self._adjacency, method="D", unweighted=True, indices=idx
        )
        return np.atleast_2d(mat)

    @cached_property
    def corners(self) -> dict[str, list[Cell]]:
        return convex_corners(self)

    @property
    def corner_count(self) -> int:
        return sum(len(v) for v in self.corners.values())

    @cached_property
    def diameter(self) -> int:
        return diameter(self)


@dataclass(frozen=True)
class DistanceMap:
    """Exact multi-source BFS distances over free cells of a polyomino."""

    sources: frozenset[Cell]
    dist: Mapping[Cell, int]

    def __getitem__(self, cell: Cell) -> int:
        return self.dist[cell]

    def get(self, cell: Cell, default=None):
        return self.dist.get(cell, default)

    @property
    def max_distance(self) -> int:
        return max(self.dist.values())


@dataclass
class Instance:
    """A named workspace with an initial particle configuration."""

    name: str
    polyomino: Polyomino
    particles: frozenset[Cell]
    meta: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        bad = [c for c in self.particles if c not in self.polyomino.free]
        if bad:
            raise InstanceError(f"particle on blocked cell at {sorted(bad)[0]}")

    def to_document(self) -> dict:
        grid_rows = []
        for row in range(self.polyomino.height):
            y = self.polyomino.height - 1 - row
            grid_rows.append(
                "".join(
                    "." if (x, y) in self.polyomino.free else "#"
                    for x in range(self.polyomino.width)
                )
            )
        doc = {
            "name": self.name,
            "grid": grid_rows,
            "particles": [[x, y] for (x, y) in sorted(self.particles)],
        }
        if self.meta:
            doc["meta"] = dict(self.meta)
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_document(), indent=2)


def parse_instance(text: str) -> Instance:
    """Parse the JSON interchange document into a validated Instance.

    The document has fields ``name`` (string), ``grid`` (list of equal-length
    strings over '#'/'.' with the first string being the top row),
    ``particles`` (list of [x, y] pairs) and an optional ``meta`` string map.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(
            f"malformed document at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise InstanceError("document root must be an object")
    for key in ("name", "grid"):
        if key not in doc:
            raise InstanceError(f"missing required field '{key}'")
    rows = doc["grid"]
    if not isinstance(rows, list) or not rows or not all(isinstance(r, str) for r in rows):
        raise InstanceError("'grid' must be a non-empty list of strings")
    width = len(rows[0])
    height = len(rows)
    free = set()
    for r, row in enumerate(rows):
        if len(row) != width:
            raise InstanceError(f"grid row {r} has length {len(row)}, expected {width}")
        for xcol, ch in enumerate(row):
            if ch == ".":
                free.add((xcol, height - 1 - r))
            elif ch != "#":
                raise InstanceError(f"grid row {r}, column {xcol}: invalid character {ch!r}")
    polyomino = Polyomino(width=width, height=height, free=frozenset(free))
    particles = set()
    for i, entry in enumerate(doc.get("particles", [])):
        if (
            not isinstance(entry, (list, tuple))
            or len(entry) != 2
            or not all(isinstance(v, int) for v in entry)
        ):
            raise InstanceError(f"particle {i} is not an [x, y] integer pair")
        cell = (entry[0], entry[1])
        if cell not in free:
            raise InstanceError(f"particle {i} at {cell} is on a blocked cell")
        particles.add(cell)
    meta = doc.get("meta", {})
    if not isinstance(meta, dict):
        raise InstanceError("'meta' must be a string map")
    meta = {str(k): str(v) for k, v in meta.items()}
    return Instance(
        name=str(doc["name"]),
        polyomino=polyomino,
        particles=frozenset(particles),
        meta=meta,
    )


def distance_map(polyomino: Polyomino, sources: Iterable[Cell]) -> DistanceMap:
    """Multi-source BFS over the 4-neighborhood restricted to free cells."""
    sources = frozenset(sources)
    if not sources:
        raise ValueError("source set is empty")
    bad = [c for c in sources if c not in polyomino.free]
    if bad:
        raise ValueError(f"source {sorted(bad)[0]} is not a free cell")
    dist: dict[Cell, int] = {c: 0 for c in sources}
    queue = deque(sources)
    while queue:
        cell = queue.popleft()
        d = dist[cell] + 1
        for nb in _neighbors(cell):
            if nb in polyomino.free and nb not in dist:
                dist[nb] = d
                queue.append(nb)
    return DistanceMap(sources=sources, dist=dist)


def grid_distance(polyomino: Polyomino, a: Cell, b: Cell) -> int:
    """Shortest-path distance between two free cells."""
    return distance_map(polyomino, [a]).dist[b]


def diameter(polyomino: Polyomino, fast: bool = False) -> int:
    """Maximum pairwise grid distance within the polyomino.

    The exact value runs BFS from every free cell (O(n^2)).  With
    ``fast=True`` a double-sweep estimate is returned instead: the
    eccentricity of a BFS-extreme cell, which is a lower bound and never
    worse than half the true diameter.
    """
    if fast:
        start = next(iter(polyomino.free))
        first = distance_map(polyomino, [start])
        far = max(first.dist, key=lambda c: (first.dist[c], c))
        return distance_map(polyomino, [far]).max_distance
    dists = polyomino.all_pairs_distances()
    return int(dists.max())


def convex_corners(polyomino: Polyomino) -> dict[str, list[Cell]]:
    """Classify free cells into the four convex corner types.

    A cell is an NW corner iff its west and north neighbors are both blocked
    (or outside); the other types mirror accordingly.  A single cell may be a
    corner of several types and is counted once per type.
    """
    free = polyomino.free
    out: dict[str, list[Cell]] = {q: [] for q in ("NW", "NE", "SW", "SE")}
    for cell in sorted(free):
        x, y = cell
        west = (x - 1, y) in free
        east = (x + 1, y) in free
        north = (x, y + 1) in free
        south = (x, y - 1) in free
        if not west and not north:
            out["NW"].append(cell)
        if not east and not north:
            out["NE"].append(cell)
        if not west and not south:
            out["SW"].append(cell)
        if not east and not south:
            out["SE"].append(cell)
    return out


def extreme_pixel(polyomino: Polyomino, quadrant: str) -> Cell:
    """Quadrant-extreme free cell, e.g. the top-rightmost cell for NE.

    The primary axis is vertical (maximal y for NE/NW, minimal for SE/SW);
    ties are broken on x (maximal for NE/SE, minimal for NW/SW).
    """
    if quadrant not in QUADRANTS:
        raise ValueError(f"unknown quadrant {quadrant!r}")
    ysign = 1 if quadrant in ("NE", "NW") else -1
    xsign = 1 if quadrant in ("NE", "SE") else -1
    return max(polyomino.free, key=lambda c: (ysign * c[1], xsign * c[0]))
