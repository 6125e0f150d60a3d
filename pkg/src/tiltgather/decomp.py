"""Rectangle decomposition into unit-height runs and its edge-contact graph.

The polyomino is cut by horizontal lines through cell edges, giving one
rectangle per maximal horizontal run of free cells.  Two rectangles are in
contact iff they lie in vertically adjacent rows and share at least one
column; corner contact does not count.  A polyomino is simple (hole-free)
iff this contact graph is a tree.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from tiltgather.grid import Cell, Polyomino


@dataclass(frozen=True)
class Rect:
    """Maximal horizontal run of free cells: row y, columns x0..x1 inclusive."""

    y: int
    x0: int
    x1: int

    def cells(self):
        return [(x, self.y) for x in range(self.x0, self.x1 + 1)]


@dataclass(frozen=True)
class RectDecomposition:
    rects: tuple[Rect, ...]
    contact: tuple[tuple[int, ...], ...]
    cell_to_rect: dict[Cell, int]

    @property
    def edge_count(self) -> int:
        return sum(len(adj) for adj in self.contact) // 2


def decompose(polyomino: Polyomino) -> RectDecomposition:
    """Unit-height run decomposition with row-major (y, x) ordering."""
    rows: dict[int, list[int]] = {}
    for (x, y) in polyomino.free:
        rows.setdefault(y, []).append(x)
    rects: list[Rect] = []
    for y in sorted(rows):
        xs = sorted(rows[y])
        start = prev = xs[0]
        for x in xs[1:]:
            if x != prev + 1:
                rects.append(Rect(y, start, prev))
                start = x
            prev = x
        rects.append(Rect(y, start, prev))
    cell_to_rect: dict[Cell, int] = {}
    for i, rect in enumerate(rects):
        for cell in rect.cells():
            cell_to_rect[cell] = i
    adj: list[set[int]] = [set() for _ in rects]
    for i, rect in enumerate(rects):
        for x in range(rect.x0, rect.x1 + 1):
            above = cell_to_rect.get((x, rect.y + 1))
            if above is not None:
                adj[i].add(above)
                adj[above].add(i)
    contact = tuple(tuple(sorted(s)) for s in adj)
    return RectDecomposition(rects=tuple(rects), contact=contact, cell_to_rect=cell_to_rect)


def is_simple(polyomino: Polyomino) -> bool:
    """True iff the run contact graph is a tree (connected and acyclic)."""
    dec = decompose(polyomino)
    n = len(dec.rects)
    if dec.edge_count != n - 1:
        return False
    seen = {0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in dec.contact[i]:
            if j not in seen:
                seen.add(j)
                queue.append(j)
    return len(seen) == n


def has_hole(polyomino: Polyomino) -> bool:
    """Independent hole detector: flood-fill blocked cells from outside.

    A hole exists iff some blocked cell inside the bounding box is not
    reachable from the exterior through blocked cells (8-connectivity on the
    blocked side, matching enclosure by an edge-connected free cycle).
    """
    w, h = polyomino.width, polyomino.height
    blocked_seen = set()
    queue = deque()
    for x in range(-1, w + 1):
        for y in (-1, h):
            queue.append((x, y))
            blocked_seen.add((x, y))
    for y in range(h):
        for x in (-1, w):
            queue.append((x, y))
            blocked_seen.add((x, y))
    free = polyomino.free
    while queue:
        x, y = queue.popleft()
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                if dx == 0 and dy == 0:
                    continue
                nb = (x + dx, y + dy)
                if nb in blocked_seen or nb in free:
                    continue
                if not (-1 <= nb[0] <= w and -1 <= nb[1] <= h):
                    continue
                blocked_seen.add(nb)
                queue.append(nb)
    for x in range(w):
        for y in range(h):
            if (x, y) not in free and (x, y) not in blocked_seen:
                return True
    return False


def tree_path(dec: RectDecomposition, a: int, b: int) -> list[int]:
    """The unique rectangle path from a to b when the contact graph is a tree."""
    n = len(dec.rects)
    if not (0 <= a < n and 0 <= b < n):
        raise IndexError(f"rect index out of range: {a}, {b}")
    if dec.edge_count != n - 1:
        raise ValueError("contact graph is not a tree")
    if a == b:
        return [a]
    parent: dict[int, int] = {a: a}
    queue = deque([a])
    while queue:
        i = queue.popleft()
        if i == b:
            break
        for j in dec.contact[i]:
            if j not in parent:
                parent[j] = i
                queue.append(j)
    if b not in parent:
        raise ValueError("contact graph is not connected")
    path = [b]
    while path[-1] != a:
        path.append(parent[path[-1]])
    path.reverse()
    return path
