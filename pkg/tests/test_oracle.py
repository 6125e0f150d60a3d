"""Exact search: pair BFS, configuration BFS, brute-force enumeration."""

import random

import pytest

from conftest import poly_from_rows, random_polyomino
from tiltgather.generators import gen_chimney
from tiltgather.oracle import exhaustive, optimal_config, optimal_pair
from tiltgather.sim import apply, is_gathered


class TestOptimalPair:
    def test_row3(self, row3):
        length, seq = optimal_pair(row3, frozenset({(0, 0), (2, 0)}))
        assert length == 2
        final, _ = apply(row3, frozenset({(0, 0), (2, 0)}), seq)
        assert is_gathered(final)

    def test_l_tromino(self, l_tromino):
        config = frozenset({(0, 0), (1, 1)})
        length, seq = optimal_pair(l_tromino, config)
        # cross-checked against full enumeration below
        assert length == len(exhaustive(l_tromino, config, 4)) == 2

    def test_chimney_lower_bound_strict_inequality_logged(self):
        inst, pts = gen_chimney(1)
        length, seq = optimal_pair(inst.polyomino, frozenset(pts))
        final, _ = apply(inst.polyomino, frozenset(pts), seq)
        assert is_gathered(final)
        assert length >= 36  # cannot beat the particle distance here

    def test_wrong_arity(self, row3):
        with pytest.raises(ValueError):
            optimal_pair(row3, frozenset({(0, 0), (1, 0), (2, 0)}))

    def test_replay_is_minimal(self):
        for seed in range(10):
            P = random_polyomino(seed, max_cells=10)
            rng = random.Random(seed)
            a, b = rng.sample(sorted(P.free), 2)
            config = frozenset({a, b})
            length, seq = optimal_pair(P, config)
            final, _ = apply(P, config, seq)
            assert is_gathered(final)
            if length > 0:
                shorter = exhaustive(P, config, max_len=length - 1) if length <= 13 else None
                assert shorter is None


class TestOptimalConfig:
    def test_full_square(self, square2):
        length, seq = optimal_config(square2, frozenset(square2.free))
        assert length == 2

    def test_full_row3(self, row3):
        length, seq = optimal_config(row3, frozenset(row3.free))
        assert length == 2

    def test_full_plus_vs_exhaustive(self, plus_pentomino):
        config = frozenset(plus_pentomino.free)
        length, seq = optimal_config(plus_pentomino, config)
        brute = exhaustive(plus_pentomino, config, max_len=length)
        assert brute is not None and len(brute) == length
        final, _ = apply(plus_pentomino, config, seq)
        assert is_gathered(final)

    def test_state_cap_returns_unknown(self, plus_pentomino):
        assert optimal_config(plus_pentomino, frozenset(plus_pentomino.free), state_cap=3) is None


class TestExhaustive:
    def test_too_short_budget(self, row3):
        assert exhaustive(row3, frozenset({(0, 0), (2, 0)}), 1) is None

    def test_finds_length_two(self, row3):
        seq = exhaustive(row3, frozenset({(0, 0), (2, 0)}), 2)
        assert seq is not None and len(seq) == 2

    def test_guard(self, row3):
        with pytest.raises(ValueError):
            exhaustive(row3, frozenset({(0, 0)}), 15)

    def test_cross_oracle_agreement(self):
        for seed in range(25):
            P = random_polyomino(seed, max_cells=12)
            rng = random.Random(seed + 999)
            a, b = rng.sample(sorted(P.free), 2)
            config = frozenset({a, b})
            length, _ = optimal_pair(P, config)
            found = exhaustive(P, config, max_len=min(12, max(length, 1)))
            assert found is not None and len(found) == length
