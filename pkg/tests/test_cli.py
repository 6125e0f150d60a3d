"""Command-line interface: files in, files out, exit codes, CSV determinism."""

import json
import re
from pathlib import Path

import pytest

from tiltgather.cli import main

ROW3 = {"name": "row3", "grid": ["..."], "particles": [[0, 0], [2, 0]]}
SQ2 = {"name": "sq2", "grid": ["..", ".."], "particles": []}


@pytest.fixture
def row3_file(tmp_path):
    path = tmp_path / "row3.json"
    path.write_text(json.dumps(ROW3))
    return path


@pytest.fixture
def sq2_file(tmp_path):
    path = tmp_path / "sq2.json"
    path.write_text(json.dumps(SQ2))
    return path


class TestSolve:
    def test_row3_mste(self, row3_file, tmp_path, capsys):
        out = tmp_path / "row3.seq"
        code = main(["solve", str(row3_file), "--strategy", "mste", "--out", str(out)])
        assert code == 0
        assert out.read_text().strip() == "RR"
        assert "length=2" in capsys.readouterr().out

    def test_single_particle_empty_file(self, tmp_path, capsys):
        path = tmp_path / "one.json"
        path.write_text(json.dumps({"name": "one", "grid": ["..."], "particles": [[1, 0]]}))
        out = tmp_path / "one.seq"
        assert main(["solve", str(path), "--out", str(out)]) == 0
        assert out.read_text().strip() == ""
        assert "length=0" in capsys.readouterr().out

    def test_limit_exit_code(self, tmp_path, capsys):
        path = tmp_path / "far.json"
        path.write_text(json.dumps({"name": "far", "grid": ["....."],
                                    "particles": [[0, 0], [4, 0]]}))
        out = tmp_path / "far.seq"
        code = main(["solve", str(path), "--strategy", "dsp", "--limit", "1",
                     "--out", str(out)])
        assert code == 3

    def test_missing_file_is_io_error(self, tmp_path):
        assert main(["solve", str(tmp_path / "nope.json")]) == 1

    def test_malformed_is_parse_error(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{broken")
        assert main(["solve", str(path)]) == 2


class TestVerify:
    def test_row3_rr(self, row3_file, tmp_path, capsys):
        seq = tmp_path / "s.seq"
        seq.write_text("RR")
        assert main(["verify", str(row3_file), str(seq)]) == 0
        out = capsys.readouterr().out
        assert "gathered: true" in out
        assert "cells: 2,0" in out

    def test_oblivious_square(self, sq2_file, tmp_path, capsys):
        seq = tmp_path / "s.seq"
        seq.write_text("LU")
        assert main(["verify", str(sq2_file), str(seq), "--oblivious"]) == 0
        out = capsys.readouterr().out
        assert "gathered: true" in out and "cells: 0,1" in out

    def test_not_gathered_exit(self, row3_file, tmp_path, capsys):
        seq = tmp_path / "s.seq"
        seq.write_text("R")
        assert main(["verify", str(row3_file), str(seq)]) == 4

    def test_target_option(self, row3_file, tmp_path, capsys):
        seq = tmp_path / "s.seq"
        seq.write_text("RR")
        assert main(["verify", str(row3_file), str(seq), "--target", "2,0"]) == 0
        assert main(["verify", str(row3_file), str(seq), "--target", "0,0"]) == 4

    def test_radius_option(self, row3_file, tmp_path, capsys):
        seq = tmp_path / "s.seq"
        seq.write_text("R")  # leaves two particles, both within 2 of an extreme
        assert main(["verify", str(row3_file), str(seq), "--radius", "2"]) == 0

    def test_hardness_assignment_round_trip(self, tmp_path, capsys):
        from tiltgather.generators import CnfFormula, assignment_sequence, gen_hardness

        inst, meta = gen_hardness(CnfFormula(2, ((1, 2, 1), (-1, 2, -2))))
        ipath = tmp_path / "hard.json"
        ipath.write_text(inst.to_json())
        spath = tmp_path / "hard.seq"
        spath.write_text(assignment_sequence(meta, [True, True]))
        assert main(["verify", str(ipath), str(spath)]) == 0


class TestBench:
    def test_row_count_and_determinism(self, row3_file, sq2_file, tmp_path, capsys):
        config = {
            "instances": [str(row3_file)],
            "strategies": ["mste", "ssp"],
            "pairs": ["random", "distant"],
            "preprocess": [False, True],
            "seeds": [0, 1],
        }
        cpath = tmp_path / "bench.json"
        cpath.write_text(json.dumps(config))
        assert main(["bench", str(cpath)]) == 0
        first = capsys.readouterr().out
        rows = first.strip().splitlines()
        assert rows[0] == "instance,strategy,pair,preprocess,seed,length,ms,gathered"
        assert len(rows) == 1 + 2 * 2 * 2 * 2
        assert main(["bench", str(cpath)]) == 0
        second = capsys.readouterr().out

        def strip_ms(text):
            return [
                ",".join(v for i, v in enumerate(line.split(",")) if i != 6)
                for line in text.strip().splitlines()
            ]

        assert strip_ms(first) == strip_ms(second)


class TestBenchWorkers:
    def test_worker_pool_matches_serial(self, row3_file, tmp_path, capsys, monkeypatch):
        config = {
            "instances": [str(row3_file)],
            "strategies": ["mste", "dsp"],
            "seeds": [0, 1],
        }
        cpath = tmp_path / "bench.json"
        cpath.write_text(json.dumps(config))
        assert main(["bench", str(cpath)]) == 0
        serial = capsys.readouterr().out
        monkeypatch.setenv("TILTGATHER_THREADS", "2")
        assert main(["bench", str(cpath)]) == 0
        parallel = capsys.readouterr().out

        def strip_ms(text):
            return [
                ",".join(v for i, v in enumerate(line.split(",")) if i != 6)
                for line in text.strip().splitlines()
            ]

        assert strip_ms(serial) == strip_ms(parallel)


class TestSolveVerifyRoundTrip:
    def test_every_solve_output_verifies(self, tmp_path, capsys):
        from tiltgather.generators import gen_random_config, gen_random_polyomino

        inst = gen_random_polyomino(14, 14, 0.7, True, 9)
        inst.particles = gen_random_config(inst.polyomino, 9, 9)
        ipath = tmp_path / "m.json"
        ipath.write_text(inst.to_json())
        for strategy in ("ssp", "dsp", "mte", "mste"):
            spath = tmp_path / f"{strategy}.seq"
            assert main(["solve", str(ipath), "--strategy", strategy,
                         "--out", str(spath)]) == 0
            capsys.readouterr()
            assert main(["verify", str(ipath), str(spath)]) == 0
            assert "gathered: true" in capsys.readouterr().out


class TestOracleCmd:
    def test_pair(self, row3_file, capsys):
        assert main(["oracle", str(row3_file)]) == 0
        assert "length=2" in capsys.readouterr().out

    def test_unknown_on_tiny_cap(self, tmp_path, capsys):
        path = tmp_path / "p.json"
        path.write_text(json.dumps({"name": "p", "grid": ["#.#", "...", "#.#"],
                                    "particles": [[1, 0], [0, 1], [2, 1], [1, 2], [1, 1]]}))
        assert main(["oracle", str(path), "--state-cap", "2"]) == 3


class TestRender:
    def test_row3_frames(self, row3_file, tmp_path, capsys):
        seq = tmp_path / "s.seq"
        seq.write_text("RR")
        out = tmp_path / "frames"
        assert main(["render", str(row3_file), str(seq), "--every", "1",
                     "--out", str(out)]) == 0
        frames = sorted(out.glob("frame_*.pgm"))
        assert len(frames) == 3
        last = frames[-1].read_text().splitlines()
        assert last[0] == "P2"
        assert last[3].split() == ["200", "200", "255"]

    def test_initial_frame_only(self, row3_file, tmp_path):
        out = tmp_path / "frames"
        assert main(["render", str(row3_file), "--out", str(out)]) == 0
        frames = sorted(out.glob("frame_*.pgm"))
        assert len(frames) == 1
        body = frames[0].read_text().splitlines()[3]
        assert body.split() == ["255", "200", "255"]

    def test_square_oblivious_gather_y_flip(self, sq2_file, tmp_path):
        # gathered at (0,1): top-left pixel of the rendered image
        inst = json.loads(sq2_file.read_text())
        inst["particles"] = [[0, 0], [0, 1], [1, 0], [1, 1]]
        sq_full = tmp_path / "full.json"
        sq_full.write_text(json.dumps(inst))
        seq = tmp_path / "s.seq"
        seq.write_text("LU")
        out = tmp_path / "frames"
        assert main(["render", str(sq_full), str(seq), "--every", "2",
                     "--out", str(out)]) == 0
        frames = sorted(out.glob("frame_*.pgm"))
        assert len(frames) == 2  # ceil((2+1)/2)
        rows = frames[-1].read_text().splitlines()
        assert rows[3].split() == ["255", "200"]
        assert rows[4].split() == ["200", "200"]


class TestGenerate:
    def test_random_to_stdout(self, capsys):
        assert main(["generate", "random", "--width", "10", "--height", "10",
                     "--fill", "0.5", "--seed", "1"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["name"].startswith("random_simple")

    def test_hardness_from_dimacs(self, tmp_path, capsys):
        cnf = tmp_path / "f.cnf"
        cnf.write_text("p cnf 2 1\n1 -2 2 0\n")
        out = tmp_path / "inst.json"
        assert main(["generate", "hardness", "--cnf", str(cnf), "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["meta"]["family"] == "hardness"

    def test_chimney(self, capsys):
        assert main(["generate", "chimney", "--chimney-height", "1"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["meta"]["diameter"] == "36"
