"""Tilt command semantics: stepping, merging, traces, invariants."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import poly_from_rows, random_polyomino
from tiltgather.sim import COMMANDS, apply, is_gathered, parse_sequence, step


class TestStep:
    def test_blocked_particle_stays(self, row3):
        out = step(row3, frozenset({(0, 0), (2, 0)}), "R")
        assert out == {(1, 0), (2, 0)}

    def test_merge_on_second_push(self, row3):
        out = step(row3, frozenset({(1, 0), (2, 0)}), "R")
        assert out == {(2, 0)}

    def test_single_cell_never_moves(self):
        P = poly_from_rows(["."])
        for command in COMMANDS:
            assert step(P, frozenset({(0, 0)}), command) == {(0, 0)}


class TestApply:
    def test_l_tromino_merge(self, l_tromino):
        final, _ = apply(l_tromino, frozenset({(0, 0), (1, 1)}), "RU")
        assert final == {(1, 1)}

    def test_empty_sequence_is_identity(self, row3):
        config = frozenset({(0, 0), (2, 0)})
        final, trace = apply(row3, config, "")
        assert final == config and trace is None

    def test_full_square_corner_convergence(self, square2):
        final, trace = apply(square2, frozenset(square2.free), "LU", record=True)
        assert final == {(0, 1)}
        assert trace == [2, 1]

    def test_trace_counts(self, row3):
        _, trace = apply(row3, frozenset({(0, 0), (2, 0)}), "RR", record=True)
        assert trace == [2, 1]


class TestIsGathered:
    def test_singleton(self):
        assert is_gathered(frozenset({(2, 0)}))

    def test_pair(self):
        assert not is_gathered(frozenset({(0, 0), (2, 0)}))


class TestParseSequence:
    def test_whitespace_ignored(self):
        assert parse_sequence(" R\nrU l ") == "RRUL"

    def test_bad_character(self):
        with pytest.raises(ValueError):
            parse_sequence("RX")


@st.composite
def poly_and_config(draw):
    seed = draw(st.integers(0, 10_000))
    P = random_polyomino(seed, max_cells=16)
    cells = sorted(P.free)
    count = draw(st.integers(1, len(cells)))
    rng = random.Random(seed + 1)
    config = frozenset(rng.sample(cells, count))
    return P, config


class TestInvariants:
    @given(poly_and_config(), st.lists(st.sampled_from("UDLR"), max_size=12))
    @settings(max_examples=60, deadline=None)
    def test_monotone_merging(self, pc, commands):
        P, config = pc
        for command in commands:
            nxt = step(P, config, command)
            assert len(nxt) <= len(config)
            config = nxt

    @given(poly_and_config(), st.lists(st.sampled_from("UDLR"), max_size=14))
    @settings(max_examples=60, deadline=None)
    def test_merged_stay_merged(self, pc, commands):
        P, config = pc
        tracked = {i: cell for i, cell in enumerate(sorted(config))}
        merged_pairs = set()
        from tiltgather.sim import step_cell

        for command in commands:
            for i, j in list(merged_pairs):
                assert tracked[i] == tracked[j]
            tracked = {i: step_cell(P, cell, command) for i, cell in tracked.items()}
            for i in tracked:
                for j in tracked:
                    if i < j and tracked[i] == tracked[j]:
                        merged_pairs.add((i, j))
        for i, j in merged_pairs:
            assert tracked[i] == tracked[j]

    @given(poly_and_config(), st.sampled_from("UDLR"))
    @settings(max_examples=60, deadline=None)
    def test_step_is_pure(self, pc, command):
        P, config = pc
        assert step(P, config, command) == step(P, config, command)

    @given(poly_and_config(), st.sampled_from("UDLR"))
    @settings(max_examples=60, deadline=None)
    def test_repeated_command_reaches_fixpoint(self, pc, command):
        P, config = pc
        bound = max(P.width, P.height)
        for _ in range(bound):
            config = step(P, config, command)
        assert step(P, config, command) == config
