"""Exact minimum-length gathering via state-space search.

Two-particle optimality is polynomial (BFS over the n^2 product graph of
ordered position pairs) even though minimising gathering length for many
particles is intractable in general; that asymmetry makes the pair oracle
the ground truth the strategy tests lean on.
"""

from __future__ import annotations

from collections import deque
from typing import Optional

from tiltgather.grid import Polyomino
from tiltgather.sim import COMMANDS, Configuration, is_gathered, step, step_cell

EXHAUSTIVE_MAX_LEN = 14
DEFAULT_STATE_CAP = 2_000_000


def optimal_pair(polyomino: Polyomino, config: Configuration) -> tuple[int, str]:
    """Minimum-length merging sequence for a two-particle configuration.

    BFS over ordered position pairs; a merged pair is absorbing.  Commands
    are expanded in U, D, L, R order, so the returned sequence is the
    lexicographically first optimum under that alphabet.
    """
    cells = sorted(config)
    if len(cells) == 1:
        return 0, ""
    if len(cells) != 2:
        raise ValueError(f"pair oracle needs 2 particles, got {len(cells)}")
    start = (cells[0], cells[1])
    parent: dict[tuple, tuple] = {start: None}
    queue = deque([start])
    goal = None
    while queue:
        state = queue.popleft()
        if state[0] == state[1]:
            goal = state
            break
        for command in COMMANDS:
            nxt = (
                step_cell(polyomino, state[0], command),
                step_cell(polyomino, state[1], command),
            )
            if nxt not in parent:
                parent[nxt] = (state, command)
                queue.append(nxt)
    if goal is None:
        raise RuntimeError("pair BFS exhausted without a merge; workspace invalid?")
    commands = []
    state = goal
    while parent[state] is not None:
        state, command = parent[state]
        commands.append(command)
    commands.reverse()
    return len(commands), "".join(commands)


def optimal_config(
    polyomino: Polyomino,
    config: Configuration,
    state_cap: int = DEFAULT_STATE_CAP,
) -> Optional[tuple[int, str]]:
    """Minimum-length gathering sequence by BFS over reachable configurations.

    Returns None ("unknown") if the number of visited canonical states
    exceeds ``state_cap``; it never returns a wrong answer.
    """
    if not config:
        raise ValueError("configuration is empty")
    start = frozenset(config)
    parent: dict[frozenset, tuple] = {start: None}
    queue = deque([start])
    goal = None
    while queue:
        state = queue.popleft()
        if len(state) == 1:
            goal = state
            break
        for command in COMMANDS:
            nxt = step(polyomino, state, command)
            if nxt not in parent:
                if len(parent) >= state_cap:
                    return None
                parent[nxt] = (state, command)
                queue.append(nxt)
    if goal is None:
        raise RuntimeError("configuration BFS exhausted without gathering")
    commands = []
    state = goal
    while parent[state] is not None:
        state, command = parent[state]
        commands.append(command)
    commands.reverse()
    return len(commands), "".join(commands)


def exhaustive(
    polyomino: Polyomino,
    config: Configuration,
    max_len: int,
) -> Optional[str]:
    """Brute-force search over all command sequences of length <= max_len.

    Sequences are tried in length-then-lexicographic order over the alphabet
    U < D < L < R; the first gathering sequence found is returned, or None.
    Independent of the BFS oracles: plain simulation of every candidate.
    """
    if max_len > EXHAUSTIVE_MAX_LEN:
        raise ValueError(f"max_len {max_len} exceeds guard {EXHAUSTIVE_MAX_LEN}")
    if not config:
        raise ValueError("configuration is empty")
    start = frozenset(config)
    if is_gathered(start):
        return ""

    if len(start) == 2:
        return _exhaustive_pair(polyomino, start, max_len)

    def dfs(state: Configuration, prefix: list[str], depth: int) -> Optional[str]:
        if depth == 0:
            return None
        for command in COMMANDS:
            nxt = step(polyomino, state, command)
            prefix.append(command)
            if is_gathered(nxt):
                return "".join(prefix)
            found = dfs(nxt, prefix, depth - 1)
            if found is not None:
                return found
            prefix.pop()
        return None

    for length in range(1, max_len + 1):
        found = dfs(start, [], length)
        if found is not None:
            return found
    return None


def _exhaustive_pair(polyomino: Polyomino, config: Configuration, max_len: int) -> Optional[str]:
    """Pair-state specialization of the brute-force enumeration."""
    free = polyomino.free
    vectors = [(command, dx, dy) for command, (dx, dy) in
               [("U", (0, 1)), ("D", (0, -1)), ("L", (-1, 0)), ("R", (1, 0))]]
    a0, b0 = sorted(config)

    def dfs(a, b, prefix: list[str], depth: int) -> Optional[str]:
        if depth == 0:
            return None
        for command, dx, dy in vectors:
            na = (a[0] + dx, a[1] + dy)
            if na not in free:
                na = a
            nb = (b[0] + dx, b[1] + dy)
            if nb not in free:
                nb = b
            prefix.append(command)
            if na == nb:
                return "".join(prefix)
            found = dfs(na, nb, prefix, depth - 1)
            if found is not None:
                return found
            prefix.pop()
        return None

    for length in range(1, max_len + 1):
        found = dfs(a0, b0, [], length)
        if found is not None:
            return found
    return None
