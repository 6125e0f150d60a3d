"""Tilt command semantics: apply commands to configurations, track merges.

Commands are the single characters U, D, L, R moving every particle one unit
up, down, left or right unless the destination cell is blocked.  Co-located
particles are merged permanently, so a configuration is simply the set of
occupied cells.
"""

from __future__ import annotations

from typing import Iterable, Optional

from tiltgather.grid import Cell, Polyomino

Configuration = frozenset[Cell]

COMMANDS = "UDLR"
VECTORS: dict[str, tuple[int, int]] = {
    "U": (0, 1),
    "D": (0, -1),
    "L": (-1, 0),
    "R": (1, 0),
}


def parse_sequence(text: str) -> str:
    """Read a command-sequence file body: characters from UDLR, whitespace ignored."""
    out = []
    for ch in text:
        if ch.isspace():
            continue
        up = ch.upper()
        if up not in VECTORS:
            raise ValueError(f"invalid command character {ch!r}")
        out.append(up)
    return "".join(out)


def step_cell(polyomino: Polyomino, cell: Cell, command: str) -> Cell:
    """Image of a single cell under one command."""
    dx, dy = VECTORS[command]
    target = (cell[0] + dx, cell[1] + dy)
    return target if target in polyomino.free else cell


def step(polyomino: Polyomino, config: Configuration, command: str) -> Configuration:
    """Image of a configuration under one command; co-located particles merge."""
    dx, dy = VECTORS[command]
    free = polyomino.free
    out = set()
    for (x, y) in config:
        target = (x + dx, y + dy)
        out.add(target if target in free else (x, y))
    return frozenset(out)


def apply(
    polyomino: Polyomino,
    config: Configuration,
    sequence: Iterable[str],
    record: bool = False,
) -> tuple[Configuration, Optional[list[int]]]:
    """Left-to-right fold of ``step`` over a command sequence.

    With ``record=True`` the returned trace lists the particle count after
    every command.
    """
    trace: Optional[list[int]] = [] if record else None
    for command in sequence:
        config = step(polyomino, config, command)
        if trace is not None:
            trace.append(len(config))
    return config, trace


def is_gathered(config: Configuration) -> bool:
    """True iff all particles have merged into a single cell."""
    return len(config) == 1
