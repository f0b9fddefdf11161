#!/usr/bin/env python3
"""Command-line tests: exit codes, output records and the bench harness"""

import json
import sqlite3

import pytest

from bench_runner import BenchRunner, RunRecord, make_corpus, run_single
from errors import BenchDisagreement
from instance_files import corpus_files, instance_seed, read_solution
from spectral_editor import (EXIT_CAPACITY, EXIT_INDETERMINATE, EXIT_NO, EXIT_USAGE, EXIT_YES,
                             build_parser, main)

P3_TEXT = "3 2\n0 1\n1 2\n"


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


def run(config_file, *args):
    return main(["--config", config_file, *args])


class TestSolve:
    def test_yes(self, config_file, write, capsys):
        path = write("p3.inst", "EVD 2 1\n" + P3_TEXT)
        assert run(config_file, "solve", path) == EXIT_YES
        out = capsys.readouterr().out
        assert "answer=YES" in out
        assert "engine=poly:forest" in out

    def test_no(self, config_file, write):
        path = write("p3.inst", "EVD 2 0\n" + P3_TEXT)
        assert run(config_file, "solve", path, "--engine", "fpt") == EXIT_NO

    def test_json_and_solution_file(self, config_file, write, tmp_path, capsys):
        path = write("p3.inst", "EVD 2 1\n" + P3_TEXT)
        output = tmp_path / "p3.sol"
        assert run(config_file, "solve", path, "--engine", "oracle", "--json", "--output", str(output)) == EXIT_YES
        payload = json.loads(capsys.readouterr().out)
        assert payload["answer"] == "YES"
        # the oracle deletes vertex 0, leaving K2 with eigenvalues -1 and 1
        assert payload["distinct_count"] == 2
        assert read_solution(output).size == 1
        assert read_solution(output).vertices == frozenset({0})
        assert run(config_file, "verify", path, str(output)) == EXIT_YES

    def test_unsupported_combination(self, config_file, write, capsys):
        path = write("eea.inst", "EEA 2 1\n" + P3_TEXT)
        assert run(config_file, "solve", path, "--engine", "fpt") == EXIT_USAGE
        assert "Supported:" in capsys.readouterr().err

    def test_parse_error(self, config_file, write, capsys):
        path = write("bad.inst", "EVD 2 1\n2 1\n0 0\n")
        assert run(config_file, "solve", path) == EXIT_USAGE
        assert "line 3" in capsys.readouterr().err

    def test_capacity(self, config_file, write):
        with open(config_file, "w") as f:
            json.dump({"oracle_max_subsets": 1}, f)
        path = write("k4.inst", "EEE 2 2\n4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n")
        assert run(config_file, "solve", path) == EXIT_CAPACITY

    def test_indeterminate(self, config_file, write):
        with open(config_file, "w") as f:
            json.dump({"oracle_max_subsets": 0, "revd_max_nodes": 0}, f)
        path = write("p5.inst", "EVD 3 1\n5 4\n0 1\n1 2\n2 3\n3 4\n")
        assert run(config_file, "solve", path) == EXIT_INDETERMINATE

    def test_config_is_created(self, config_file, write):
        path = write("p3.inst", "EVD 2 1\n" + P3_TEXT)
        run(config_file, "solve", path)
        with open(config_file) as f:
            assert json.load(f)["revd_max_nodes"] == 200_000


class TestVerifyAndKernelize:
    def test_verify_rejects_over_budget(self, config_file, write, capsys):
        instance = write("p3.inst", "EVD 2 0\n" + P3_TEXT)
        solution = write("p3.sol", "V 1\n")
        assert run(config_file, "verify", instance, solution) == EXIT_NO
        assert "verdict=reject" in capsys.readouterr().out

    def test_kernelize_no(self, config_file, write, capsys):
        # K2 + K2 + K2 + K5
        edges = ["0 1", "2 3", "4 5"] + [f"{u} {v}" for u in range(6, 11) for v in range(u + 1, 11)]
        path = write("eea.inst", "EEA 2 2\n11 13\n" + "\n".join(edges) + "\n")
        assert run(config_file, "kernelize", path) == EXIT_NO
        assert "RR3" in capsys.readouterr().out

    def test_kernelize_reduced(self, config_file, write, tmp_path):
        path = write("eea.inst", "EEA 2 1\n4 1\n2 3\n")
        output = tmp_path / "kernel.inst"
        assert run(config_file, "kernelize", path, "--output", str(output)) == EXIT_YES
        assert output.read_text().startswith("EEA 2 1\n4 1\n")

    def test_kernelize_wrong_kind(self, config_file, write):
        path = write("evd.inst", "EVD 2 1\n" + P3_TEXT)
        assert run(config_file, "kernelize", path) == EXIT_USAGE


class TestGenerateAndSpectrum:
    def test_three_partition_sidecar(self, config_file, tmp_path):
        output = tmp_path / "tp.inst"
        code = run(config_file, "generate", "--construction", "2eea-3partition",
                   "--numbers", "1,1,1,1,1,1", "--b", "3", "--output", str(output))
        assert code == EXIT_YES
        sidecar = json.loads(output.with_suffix(".json").read_text())
        assert sidecar["budget"] == 18
        assert sidecar["vertices"] == 60
        assert sidecar["expected"] == "YES"

    def test_independent_set_sidecar(self, config_file, tmp_path):
        output = tmp_path / "is.inst"
        assert run(config_file, "generate", "--construction", "is-copies", "--named", "k33",
                   "--z", "4", "--output", str(output)) == EXIT_YES
        sidecar = json.loads(output.with_suffix(".json").read_text())
        assert sidecar["expected"] == "NO"
        assert sidecar["budget"] == 4

    def test_missing_parameter(self, config_file, tmp_path):
        assert run(config_file, "generate", "--construction", "vc-paths", "--named", "k4",
                   "--output", str(tmp_path / "vc.inst")) == EXIT_USAGE

    def test_source_precondition(self, config_file, tmp_path):
        assert run(config_file, "generate", "--construction", "reed-triangles", "--named", "k4",
                   "--r", "3", "--output", str(tmp_path / "t.inst")) == EXIT_USAGE

    def test_spectrum(self, config_file, write, capsys):
        path = write("k4.txt", "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n")
        assert run(config_file, "spectrum", path) == EXIT_YES
        out = capsys.readouterr().out
        assert "distinct=2" in out
        assert "charpoly: x^4 - 6x^2 - 8x - 3" in out


class TestBench:
    def test_make_corpus(self, config_file, tmp_path):
        corpus = tmp_path / "corpus"
        assert run(config_file, "bench", str(corpus), "--make-corpus", "3", "--seed", "7") == EXIT_YES
        files = corpus_files(corpus)
        assert len(files) == 3
        assert all(instance_seed(p.read_text()) == 7 for p in files)

    def test_corpus_is_reproducible(self, tmp_path):
        first = [p.read_text() for p in make_corpus(tmp_path / "a", 4, seed=11)]
        second = [p.read_text() for p in make_corpus(tmp_path / "b", 4, seed=11)]
        assert first == second

    def test_empty_corpus(self, config_file, tmp_path, capsys):
        (tmp_path / "empty").mkdir()
        assert run(config_file, "bench", str(tmp_path / "empty")) == EXIT_YES
        assert capsys.readouterr().out == ""

    def test_unknown_engine(self, config_file, tmp_path):
        assert run(config_file, "bench", str(tmp_path), "--engines", "oracle,magic") == EXIT_USAGE

    def test_bench_records_and_database(self, config_file, tmp_path, capsys):
        corpus = tmp_path / "corpus"
        make_corpus(corpus, 4, seed=3, n_max=6, k_max=2)
        db = tmp_path / "bench.db"
        assert run(config_file, "bench", str(corpus), "--engines", "oracle,fpt,auto",
                   "--db", str(db)) == EXIT_YES
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 12
        assert all(line.startswith("instance=inst_") for line in lines)
        with sqlite3.connect(db) as conn:
            assert conn.execute("SELECT COUNT(*) FROM run_records").fetchone()[0] == 12
            assert conn.execute("SELECT disagreements FROM bench_sessions").fetchone()[0] == 0

    def test_unsupported_engine_is_recorded(self):
        job = ("eea", "EEA 2 1\n" + P3_TEXT, "fpt", {})
        record = run_single(job)
        assert record.answer == "UNSUPPORTED"
        assert not record.decided

    def test_disagreement_is_reported(self):
        records = [RunRecord("x", "oracle", "YES"), RunRecord("x", "fpt", "NO"),
                   RunRecord("y", "oracle", "YES"), RunRecord("y", "fpt", "CAPACITY")]
        with pytest.raises(BenchDisagreement) as excinfo:
            BenchRunner().check_agreement(records, {"x": "EVD 2 0\n" + P3_TEXT})
        assert "engines disagree on x" in str(excinfo.value)
        assert len(excinfo.value.records) == 2


def test_no_command_prints_help(config_file):
    assert main(["--config", config_file]) == EXIT_USAGE


@pytest.mark.parametrize("argv", [
    ["solve", "x"],
    ["verify", "x", "y"],
    ["kernelize", "x"],
    ["generate", "--construction", "is-copies", "--output", "o"],
    ["spectrum", "x"],
    ["bench", "x"],
])
def test_parser_knows_every_subcommand(argv):
    assert build_parser().parse_args(argv).command == argv[0]


def test_verify_needs_instance_and_solution():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["verify", "x"])
