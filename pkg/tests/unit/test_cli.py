import json
import logging
from pathlib import Path

import pytest

from jdm_sampler.presentation.cli import main

INPUTS = Path(__file__).resolve().parents[2] / "inputs"
SIX_NODE = str(INPUTS / "six_node.jdm")
TEN_NODE = str(INPUTS / "ten_node.jdm")
TRIANGLE_EDGES = str(INPUTS / "triangle.edges")


@pytest.fixture(autouse=True)
def isolated(monkeypatch):
    """ Clear sampler environment and restore root logging after each command """
    for key in ("JDM_SAMPLER_SEED", "JDM_SAMPLER_JOBS", "JDM_SAMPLER_ORACLE_LIMIT", "JDM_SAMPLER_HISTOGRAM_BINS", "JDM_SAMPLER_LOG_LEVEL"):
        monkeypatch.delenv(key, raising=False)
    root = logging.getLogger()
    saved = (list(root.handlers), root.level)
    yield monkeypatch
    root.handlers[:] = saved[0]
    root.setLevel(saved[1])


def test_check_graphical(capsys):
    assert main(["check", SIX_NODE]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "graphical: yes"
    assert "class sizes: 2:4 3:2" in out
    assert "N: 6" in out
    assert "M: 7" in out


def test_check_ten_node_jdm(capsys):
    assert main(["check", TEN_NODE]) == 0
    out = capsys.readouterr().out
    assert "N: 10" in out


def test_check_not_graphical(tmp_path, capsys):
    path = tmp_path / "bad.jdm"
    path.write_text("2\n0 0\n0 1\n")
    assert main(["check", str(path)]) == 1
    out = capsys.readouterr().out
    assert out.startswith("graphical: no\nreason: ")


def test_check_malformed(tmp_path, capsys):
    path = tmp_path / "broken.jdm"
    path.write_text("2\n0 1\n")
    assert main(["check", str(path)]) == 2
    assert "line 2" in capsys.readouterr().err


def test_check_missing_file(tmp_path):
    assert main(["check", str(tmp_path / "missing.jdm")]) == 2


def test_sample_is_reproducible(tmp_path, capsys):
    first, second = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    args = ["--seed", "3", "--n-spectra", "2", "--samples-per-spectra", "3"]
    assert main(["sample", SIX_NODE, *args, "--out", str(first)]) == 0
    assert capsys.readouterr().out == "samples: 6\n"
    assert main(["sample", SIX_NODE, *args, "--out", str(second)]) == 0

    assert first.read_text() == second.read_text()
    records = [json.loads(line) for line in first.read_text().splitlines()]
    assert [r["sample_id"] for r in records] == list(range(6))
    assert [r["spectra_id"] for r in records] == [0, 0, 0, 1, 1, 1]


@pytest.mark.parametrize(
    "text, code",
    [
        ("2\n0 0\n0 1\n", 1),
        ("2\n0 1\n", 2),
    ],
)
def test_failed_sample_keeps_existing_output(tmp_path, text, code):
    jdm = tmp_path / "input.jdm"
    jdm.write_text(text)
    out = tmp_path / "samples.jsonl"
    out.write_text("previous\n")

    assert main(["sample", str(jdm), "--seed", "1", "--out", str(out)]) == code
    assert out.read_text() == "previous\n"
    assert sorted(p.name for p in tmp_path.iterdir()) == ["input.jdm", "samples.jsonl"]


def test_failed_sample_creates_no_output(tmp_path):
    out = tmp_path / "samples.jsonl"
    assert main(["sample", str(tmp_path / "missing.jdm"), "--seed", "1", "--out", str(out)]) == 2
    assert list(tmp_path.iterdir()) == []


def test_sample_to_stdout(capsys):
    assert main(["sample", SIX_NODE, "--seed", "1", "--samples-per-spectra", "2"]) == 0
    captured = capsys.readouterr()
    assert len(captured.out.splitlines()) == 2
    assert "samples: 2" in captured.err


def test_unseeded_run_reports_its_seed(capsys):
    assert main(["spectra", SIX_NODE]) == 0
    assert "seed: " in capsys.readouterr().err


def test_seed_from_environment(isolated, capsys):
    isolated.setenv("JDM_SAMPLER_SEED", "8")
    assert main(["spectra", SIX_NODE, "--n-spectra", "3"]) == 0
    from_env = capsys.readouterr()
    assert "seed: " not in from_env.err
    assert main(["spectra", SIX_NODE, "--n-spectra", "3", "--seed", "8"]) == 0
    assert capsys.readouterr().out == from_env.out


def test_spectra_output_and_histogram(tmp_path, capsys):
    out, histogram = tmp_path / "spectra.txt", tmp_path / "weights.csv"
    assert main(["spectra", TEN_NODE, "--seed", "4", "--n-spectra", "5", "--out", str(out), "--histogram", str(histogram), "--bins", "3"]) == 0
    assert capsys.readouterr().out == ""
    assert out.read_text().count("# spectra_id=") == 5
    assert len(histogram.read_text().splitlines()) == 4


def test_estimate(tmp_path, capsys):
    samples = tmp_path / "samples.jsonl"
    assert main(["sample", SIX_NODE, "--seed", "5", "--n-spectra", "4", "--samples-per-spectra", "2", "--out", str(samples)]) == 0
    capsys.readouterr()

    assert main(["estimate", str(samples)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("observable\tkey\tweighted")
    assert [line.split("\t")[1] for line in lines[1:]] == ["2", "3"]
    assert all(line.split("\t")[-1] == "8" for line in lines[1:])


def test_estimate_cycles(tmp_path, capsys):
    samples = tmp_path / "samples.jsonl"
    assert main(["sample", SIX_NODE, "--seed", "5", "--out", str(samples)]) == 0
    capsys.readouterr()
    assert main(["estimate", str(samples), "--observable", "cycles", "--max-cycle-len", "6"]) == 0
    keys = [line.split("\t")[1] for line in capsys.readouterr().out.splitlines()[1:]]
    assert keys == ["3", "4", "5", "6"]


def test_estimate_empty_stream(tmp_path, capsys):
    empty = tmp_path / "empty.jsonl"
    empty.write_text("")
    assert main(["estimate", str(empty)]) == 1
    assert "error:" in capsys.readouterr().err


def test_estimate_missing_file(tmp_path):
    assert main(["estimate", str(tmp_path / "missing.jsonl")]) == 2


def test_extract(capsys):
    assert main(["extract", TRIANGLE_EDGES]) == 0
    assert capsys.readouterr().out == "2\n0 0\n0 3\n"


def test_enumerate(capsys):
    assert main(["enumerate", SIX_NODE]) == 0
    assert capsys.readouterr().out.startswith("# classes=3 ")


def test_enumerate_respects_oracle_limit(isolated, capsys):
    isolated.setenv("JDM_SAMPLER_ORACLE_LIMIT", "5")
    assert main(["enumerate", SIX_NODE]) == 1
    assert "error:" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["sample", SIX_NODE, "--jobs", "0"],
        ["sample", SIX_NODE, "--n-spectra", "0"],
        ["sample", SIX_NODE, "--seed", "-1"],
        ["estimate", "-", "--max-cycle-len", "2"],
        ["spectra", SIX_NODE, "--bins", "0"],
    ],
)
def test_bad_arguments(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err.startswith("error: ")


def test_bad_environment(isolated, capsys):
    isolated.setenv("JDM_SAMPLER_JOBS", "many")
    assert main(["check", SIX_NODE]) == 2
    assert "JDM_SAMPLER_JOBS" in capsys.readouterr().err
