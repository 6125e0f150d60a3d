"""Instance family constructors: satisfiability reduction, lower-bound combs,
shortest-path-adversarial mazes, and seeded random workspaces.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from tiltgather.grid import Cell, Instance, Polyomino, distance_map
from tiltgather.sim import Configuration


@dataclass(frozen=True)
class CnfFormula:
    """3-CNF formula: clauses of exactly three signed, nonzero variable indices."""

    variable_count: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        for clause in self.clauses:
            if len(clause) != 3:
                raise ValueError("every clause needs exactly 3 literals")
            for lit in clause:
                if lit == 0 or abs(lit) > self.variable_count:
                    raise ValueError(f"literal {lit} out of range")

    def satisfied_by(self, assignment: list[bool]) -> bool:
        if len(assignment) != self.variable_count:
            raise ValueError("assignment arity mismatch")
        return all(
            any(assignment[abs(l) - 1] == (l > 0) for l in clause)
            for clause in self.clauses
        )


def parse_dimacs(text: str) -> CnfFormula:
    """Simplified DIMACS: 'p cnf V C' header, clause lines terminated by 0."""
    variable_count = None
    clauses = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) < 4 or parts[1] != "cnf":
                raise ValueError(f"bad DIMACS header: {line!r}")
            variable_count = int(parts[2])
            continue
        lits = [int(tok) for tok in line.split()]
        if not lits or lits[-1] != 0:
            raise ValueError(f"clause line not terminated by 0: {line!r}")
        lits = lits[:-1]
        if len(lits) != 3:
            raise ValueError("only 3-literal clauses are supported")
        clauses.append(tuple(lits))
    if variable_count is None:
        raise ValueError("missing 'p cnf' header")
    return CnfFormula(variable_count=variable_count, clauses=tuple(clauses))


# Gadget dimensions for the satisfiability builder.  One variable phase of
# the canonical command sequence is <side>^ARM, <down>^DROP1, <other
# side>^ARM, <down>^DROP2; the clause columns are timed against exactly this
# rhythm, so these four numbers are load-bearing.
ARM = 7          # horizontal half-width of a variable switch
DROP1 = 3        # descent after the chosen side
DROP2 = 2        # descent through the switch exit
ENTRY = 1        # descent from the top row into the first switch
_PHASE_DROP = DROP1 + DROP2
_CLAUSE_PITCH = 18
_BLOCK_CLAUSE_GAP = 17
_SLOT_OFFSETS = (3, 5, 7)  # arm columns, nearest first; assigned deepest-first


@dataclass(frozen=True)
class HardnessMeta:
    """Build record of a satisfiability instance."""

    diameter: int
    bottom_row_length: int
    target_length: int
    red_particles: tuple[Cell, Cell]
    variable_row_ys: tuple[int, ...]
    variable_count: int
    left_center: int
    right_center: int
    top_y: int


def _switch_cells(center_x: int, entry_y: int) -> set[Cell]:
    """One variable switch: a row, two side drops, a collector, an exit drop."""
    cells = set()
    row_y = entry_y
    collector_y = entry_y - DROP1
    for t in range(-ARM, ARM + 1):
        cells.add((center_x + t, row_y))
        cells.add((center_x + t, collector_y))
    for side in (-ARM, ARM):
        for y in range(collector_y + 1, row_y):
            cells.add((center_x + side, y))
    for y in range(collector_y - DROP2, collector_y):
        cells.add((center_x, y))
    return cells


def _block_cells(center_x: int, variable_count: int, top_y: int) -> set[Cell]:
    cells = {(center_x, top_y)}
    entry = top_y - ENTRY
    for _ in range(variable_count):
        cells |= _switch_cells(center_x, entry)
        entry -= _PHASE_DROP
    return cells


def _clause_cells(
    center_x: int,
    top_y: int,
    row_of_var: dict[int, int],
    literals: tuple[int, int, int],
) -> set[Cell]:
    """One clause gadget: main column, per-literal arms, escape jog."""
    jog_y = 3
    cells = {(center_x, y) for y in range(jog_y, top_y + 1)}
    # Escape jog: both side columns down to one cell above the bottom row.
    for side in (-1, 1):
        for y in range(1, jog_y + 1):
            cells.add((center_x + side, y))
    for sign in (1, -1):
        vars_on_side = sorted(
            {abs(l) for l in literals if (l > 0) == (sign > 0)}
        )
        # Deepest literal gets the nearest arm column, so that an arm shaft
        # never runs adjacent to a lower literal's access row.
        vars_on_side.reverse()
        for slot, var in zip(_SLOT_OFFSETS, vars_on_side):
            row_y = row_of_var[var]
            arm_x = center_x - slot if sign > 0 else center_x + slot
            step = -1 if sign > 0 else 1
            x = center_x + step
            while x != arm_x + step:
                cells.add((x, row_y))
                x += step
            for y in range(1, row_y):
                cells.add((arm_x, y))
    return cells


def gen_hardness(cnf: CnfFormula) -> tuple[Instance, HardnessMeta]:
    """Workspace whose shortest gathering length encodes satisfiability.

    Two variable blocks flank a bottom row; one gadget column per clause
    hangs between them.  The top row holds one particle per block and one
    per clause.  For any assignment, ``assignment_sequence`` produces a
    sequence of length exactly (diameter + bottom row)/2 that gathers all
    particles iff the assignment satisfies the formula.
    """
    if not cnf.clauses:
        raise ValueError("formula has no clauses")
    if cnf.variable_count < 1:
        raise ValueError("formula has no variables")
    v = cnf.variable_count
    m = len(cnf.clauses)
    top_y = ENTRY + _PHASE_DROP * v
    row_of_var = {i: top_y - ENTRY - _PHASE_DROP * (i - 1) for i in range(1, v + 1)}

    left_center = ARM
    clause_centers = [
        left_center + _BLOCK_CLAUSE_GAP + _CLAUSE_PITCH * j for j in range(m)
    ]
    right_center = clause_centers[-1] + _BLOCK_CLAUSE_GAP

    cells = set()
    cells |= _block_cells(left_center, v, top_y)
    cells |= _block_cells(right_center, v, top_y)
    for g, clause in zip(clause_centers, cnf.clauses):
        cells |= _clause_cells(g, top_y, row_of_var, clause)
    for x in range(left_center, right_center + 1):
        cells.add((x, 0))

    width = right_center + ARM + 1
    height = top_y + 1
    polyomino = Polyomino(width=width, height=height, free=frozenset(cells))

    particles = frozenset(c for c in cells if c[1] == top_y)
    red = ((left_center, top_y), (right_center, top_y))

    b = right_center - left_center
    block_depth = ENTRY + v * (2 * ARM + _PHASE_DROP)
    diameter_expected = 2 * block_depth + b
    red_dist = distance_map(polyomino, [red[0]]).dist[red[1]]
    if red_dist != diameter_expected:
        raise AssertionError(
            f"designated particle distance {red_dist} != expected {diameter_expected}"
        )
    target_length = (diameter_expected + b) // 2

    meta = HardnessMeta(
        diameter=diameter_expected,
        bottom_row_length=b,
        target_length=target_length,
        red_particles=red,
        variable_row_ys=tuple(row_of_var[i] for i in range(1, v + 1)),
        variable_count=v,
        left_center=left_center,
        right_center=right_center,
        top_y=top_y,
    )
    instance = Instance(
        name=f"hardness_v{v}_m{m}",
        polyomino=polyomino,
        particles=particles,
        meta={
            "family": "hardness",
            "diameter": str(meta.diameter),
            "bottom_row": str(b),
            "target_length": str(target_length),
            "corridor_width": "1",
            "red": f"{red[0][0]},{red[0][1]};{red[1][0]},{red[1][1]}",
        },
    )
    return instance, meta


def assignment_sequence(meta: HardnessMeta, assignment: list[bool]) -> str:
    """Canonical command sequence for a truth assignment.

    Per variable: move left through its row when true (right when false),
    drop, return across the collector, drop again; finally sweep the bottom
    row left.  Length is exactly ``meta.target_length`` for every assignment.
    """
    if len(assignment) != meta.variable_count:
        raise ValueError(
            f"assignment arity {len(assignment)} != {meta.variable_count}"
        )
    parts = ["D" * ENTRY]
    for value in assignment:
        first, second = ("L", "R") if value else ("R", "L")
        parts.append(first * ARM + "D" * DROP1 + second * ARM + "D" * DROP2)
    parts.append("L" * meta.bottom_row_length)
    sequence = "".join(parts)
    assert len(sequence) == meta.target_length
    return sequence


def gen_chimney(h: int) -> tuple[Instance, tuple[Cell, Cell]]:
    """Comb-shaped workspace of 2h+4 chimneys over a bottom row.

    The two designated particles sit on the tops of the outermost
    full-height chimneys; (h-1)/2 shorter flanking chimneys stand beyond
    each of them.  Flank heights taper so that the designated pair realizes
    the diameter (h+5)(2h+4) exactly.  Requires odd h.
    """
    if h < 1 or h % 2 == 0:
        raise ValueError("chimney height must be a positive odd integer")
    k = (h - 1) // 2
    total = 2 * h + 4
    inner = total - 2 * k  # = h + 5
    d_target = (h + 5) * (2 * h + 4)
    span = d_target - 2 * h
    gap_count = inner - 1  # = h + 4
    narrow, wide = 2 * h + 4, 2 * h + 5
    gaps = [wide, wide] + [narrow] * (gap_count - 4) + [wide, wide]
    assert sum(gaps) == span and len(gaps) == gap_count

    margin = 1
    first_inner = margin + 2 * k
    columns = [first_inner]
    for g in gaps:
        columns.append(columns[-1] + g)
    cells = set()
    width = columns[-1] + 2 * k + margin + 1
    for x in range(width):
        cells.add((x, 0))
    for c in columns:
        for y in range(1, h + 1):
            cells.add((c, y))
    for j in range(1, k + 1):  # tapering flank stubs, outermost shortest
        for c, sign in ((first_inner, -1), (columns[-1], 1)):
            stub_x = c + sign * 2 * j
            for y in range(1, h - 2 * j + 1):
                cells.add((stub_x, y))

    polyomino = Polyomino(width=width, height=h + 1, free=frozenset(cells))
    particles = ((columns[0], h), (columns[-1], h))
    instance = Instance(
        name=f"chimney_h{h}",
        polyomino=polyomino,
        particles=frozenset(particles),
        meta={
            "family": "chimney",
            "h": str(h),
            "chimneys": str(total),
            "diameter": str(d_target),
        },
    )
    return instance, particles


def gen_dsp_adversarial(
    holes: int, w: int, h: int
) -> tuple[Instance, tuple[Cell, Cell]]:
    """Maze aimed at the replanning follower strategy.

    A horizontal row of ``holes`` floating w-by-h blocks sits at mid-height
    of a box with 2h-tall passages above and below.  The two designated
    particles start against the side walls, rotationally mirrored (one just
    above the hole row, the other just below), so the follower's shortest
    paths keep flipping sides of the holes while the other particle drifts.
    The instance records the follower-length bound holes*(6h+w)+3 and the
    diameter bound holes*w+6h+4 in its meta block.
    """
    if holes < 2:
        raise ValueError("need at least 2 holes")
    if w < 1 or h < 1:
        raise ValueError("hole dimensions must be positive")
    pad, gap, passage = 2, 2, 2 * h
    width = 2 * pad + holes * w + (holes - 1) * gap
    height = 2 * passage + h
    cells = {(x, y) for x in range(width) for y in range(height)}
    for i in range(holes):
        x0 = pad + i * (w + gap)
        for x in range(x0, x0 + w):
            for y in range(passage, passage + h):
                cells.discard((x, y))
    polyomino = Polyomino(width=width, height=height, free=frozenset(cells))
    ay = passage + h + 1
    particles = ((0, ay), (width - 1, height - 1 - ay))
    meta = {
        "family": "dsp_adversarial",
        "holes": str(holes),
        "w": str(w),
        "h": str(h),
        "length_bound": str(holes * (6 * h + w) + 3),
        "diameter_bound": str(holes * w + 6 * h + 4),
    }
    instance = Instance(
        name=f"dspadv_H{holes}_w{w}_h{h}",
        polyomino=polyomino,
        particles=frozenset(particles),
        meta=meta,
    )
    return instance, particles


def gen_random_polyomino(
    width_box: int,
    height_box: int,
    fill_ratio: float,
    holes: bool,
    seed: int,
) -> Instance:
    """Seeded random workspace inside a bounding box.

    ``holes=False`` carves a random spanning tree of corridors (hole-free by
    construction); ``holes=True`` starts from the full box and removes
    random cells under a connectivity check, which typically leaves holes.
    Deterministic per seed.
    """
    if width_box < 2 or height_box < 2:
        raise ValueError("bounding box must be at least 2x2")
    if not 0.0 < fill_ratio <= 1.0:
        raise ValueError("fill ratio must be in (0, 1]")
    rng = random.Random(seed)
    if holes:
        free = _carve_by_removal(width_box, height_box, fill_ratio, rng)
    else:
        free = _carve_tree(width_box, height_box, fill_ratio, rng)
    xs = [c[0] for c in free]
    ys = [c[1] for c in free]
    x0, y0 = min(xs), min(ys)
    free = frozenset((x - x0, y - y0) for x, y in free)
    width = max(c[0] for c in free) + 1
    height = max(c[1] for c in free) + 1
    polyomino = Polyomino(width=width, height=height, free=free)
    kind = "holey" if holes else "simple"
    return Instance(
        name=f"random_{kind}_{width_box}x{height_box}_s{seed}",
        polyomino=polyomino,
        particles=frozenset(),
        meta={"family": f"random_{kind}", "seed": str(seed)},
    )


def _carve_tree(width_box: int, height_box: int, fill_ratio: float, rng) -> set[Cell]:
    lattice_w = max(1, (width_box - 1) // 2)
    lattice_h = max(1, (height_box - 1) // 2)
    if lattice_w * lattice_h < 2:
        raise ValueError("box too small to carve")
    nodes = [(x, y) for x in range(lattice_w) for y in range(lattice_h)]
    start = rng.choice(nodes)
    in_tree = {start}
    free: set[Cell] = {(2 * start[0] + 1, 2 * start[1] + 1)}
    frontier = [start]
    while len(in_tree) < len(nodes):
        base = rng.choice(frontier)
        options = []
        bx, by = base
        for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            nb = (bx + dx, by + dy)
            if 0 <= nb[0] < lattice_w and 0 <= nb[1] < lattice_h and nb not in in_tree:
                options.append(nb)
        if not options:
            frontier.remove(base)
            continue
        nb = rng.choice(options)
        in_tree.add(nb)
        frontier.append(nb)
        free.add((2 * nb[0] + 1, 2 * nb[1] + 1))
        free.add((bx + nb[0] + 1, by + nb[1] + 1))
    target = int(fill_ratio * width_box * height_box)
    if target < 1:
        raise ValueError("fill ratio infeasible for this box")
    # Trim random leaves down toward the target size; a tree stays a tree.
    while len(free) > target:
        leaves = [
            c
            for c in free
            if sum(1 for n in _adjacent(c) if n in free) == 1
        ]
        if not leaves:
            break
        free.remove(rng.choice(leaves))
    return free


def _adjacent(cell: Cell):
    x, y = cell
    return ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1))


def _carve_by_removal(width_box: int, height_box: int, fill_ratio: float, rng) -> set[Cell]:
    free = {(x, y) for x in range(width_box) for y in range(height_box)}
    target = max(1, int(fill_ratio * width_box * height_box))
    candidates = sorted(free)
    rng.shuffle(candidates)
    pos = 0
    while len(free) > target:
        if pos >= len(candidates):
            candidates = sorted(free)
            rng.shuffle(candidates)
            pos = 0
        cell = candidates[pos]
        pos += 1
        if cell not in free or len(free) == 1:
            continue
        free.remove(cell)
        if not _connected(free):
            free.add(cell)
    return free


def _connected(free: set[Cell]) -> bool:
    if not free:
        return False
    from collections import deque

    start = next(iter(free))
    seen = {start}
    queue = deque([start])
    while queue:
        cell = queue.popleft()
        for nb in _adjacent(cell):
            if nb in free and nb not in seen:
                seen.add(nb)
                queue.append(nb)
    return len(seen) == len(free)


def gen_random_config(polyomino: Polyomino, count: int, seed: int) -> Configuration:
    """Uniformly sample ``count`` distinct free cells (capped at the cell count)."""
    if count < 1:
        raise ValueError("need at least one particle")
    cells = sorted(polyomino.free)
    count = min(count, len(cells))
    rng = random.Random(seed)
    return frozenset(rng.sample(cells, count))
