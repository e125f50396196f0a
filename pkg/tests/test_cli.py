import json
import subprocess
import sys

import numpy as np
import pytest

from riccicore.cli import main
from riccicore.report import read_csv
from sample_graphs import random_weak

EX3 = "x1 x2\nx2 x3\nx3 x1\nx3 x4\nx4 x5\nx5 x4\n"

FAST = ["--iterations", "2"]
COMMANDS = {
    "stats": [],
    "augment": [],
    "curvature": ["--augment"],
    "flow": ["--augment", "--iterations", "2"],
    "extract-core": FAST + ["--tau", "0.6"],
    "baseline": ["--method", "closeness", "--k", "5"],
    "alpha-sweep": FAST + ["--alphas", "0.0", "0.3"],
    "compare": FAST + ["--tau", "0.6"],
    "robustness": FAST + ["--tau", "0.6", "--ratios", "0.3", "0.6", "--trials", "2"],
}


@pytest.fixture
def ex3(tmp_path):
    path = tmp_path / "ex3.txt"
    path.write_text(EX3)
    return path


@pytest.fixture(scope="module")
def small_graph(tmp_path_factory):
    g = random_weak(np.random.default_rng(8), 25, 0.1)
    path = tmp_path_factory.mktemp("data") / "small.txt"
    path.write_text("".join(f"{g.labels[u]} {g.labels[v]}\n" for u, v in g.edges))
    return path


def run(*argv):
    return main([str(a) for a in argv])


def test_help_exits_zero(capsys):
    assert run("--help") == 0
    assert "usage" in capsys.readouterr().out
    assert run("extract-core", "--help") == 0


def test_version(capsys):
    assert run("--version") == 0
    assert "riccicore" in capsys.readouterr().out


def test_usage_errors_exit_two(capsys):
    assert run("frobnicate") == 2
    assert run("stats", "--no-such-flag") == 2
    assert run("extract-core", "--tau", "abc") == 2
    assert run() == 2


def test_missing_input_exit_one(tmp_path, capsys):
    missing = tmp_path / "nowhere.tsv"
    assert run("extract-core", "--input", missing, "--output-dir", tmp_path) == 1
    assert str(missing) in capsys.readouterr().err


def test_input_required(tmp_path, capsys):
    assert run("stats", "--output-dir", tmp_path) == 2
    assert "--input" in capsys.readouterr().err


def test_invalid_value_exit_one(ex3, tmp_path, capsys):
    assert run("extract-core", "--input", ex3, "--tau", "1.5", "--output-dir", tmp_path) == 1
    assert "tau" in capsys.readouterr().err


def test_curvature_requires_strong_graph(ex3, tmp_path, capsys):
    assert run("curvature", "--input", ex3, "--output-dir", tmp_path) == 1
    assert "strongly connected" in capsys.readouterr().err


def test_extract_core_example3(ex3, tmp_path, capsys):
    assert run("extract-core", "--input", ex3, "--cut-count", "3", "--output-dir", tmp_path) == 0
    assert "core: 3 nodes, 3 edges" in capsys.readouterr().out
    core = json.loads((tmp_path / "core.json").read_text())
    assert core["core"]["core_nodes"] == ["x1", "x2", "x3"]
    assert core["artificial_edges"] == [["x4", "x1"]]
    metrics = json.loads((tmp_path / "metrics.json").read_text())
    assert (metrics["r_d_in"], metrics["r_d_out"], metrics["r_s"]) == (1.0, 5 / 6, 1.0)
    nodes = read_csv(tmp_path / "nodes.csv")
    assert [r["is_core"] for r in nodes] == ["true"] * 3 + ["false"] * 2
    assert [r["label"] for r in read_csv(tmp_path / "core_nodes.csv")] == ["x1", "x2", "x3"]
    assert len(read_csv(tmp_path / "core_edges.csv")) == 3


def test_metrics_command(ex3, tmp_path, capsys):
    nodes = tmp_path / "nodes.txt"
    nodes.write_text("x1\nx2\nx3\n")
    assert run("metrics", "--graph", ex3, "--core-nodes", nodes, "--output-dir", tmp_path) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["r_d_out"] == pytest.approx(5 / 6)
    edges = tmp_path / "edges.txt"
    edges.write_text("x1 x2\nx2 x3\n")
    assert run("metrics", "--graph", ex3, "--core-nodes", nodes, "--core-edges", edges,
               "--output-dir", tmp_path) == 0
    assert json.loads(capsys.readouterr().out)["r_d_in"] == pytest.approx(2 / 3)


def test_metrics_reads_own_csv_output(ex3, tmp_path):
    assert run("extract-core", "--input", ex3, "--cut-count", "3", "--output-dir", tmp_path) == 0
    assert run("metrics", "--graph", ex3, "--core-nodes", tmp_path / "core_nodes.csv",
               "--core-edges", tmp_path / "core_edges.csv", "--output-dir", tmp_path / "m") == 0
    doc = json.loads((tmp_path / "m" / "metrics.json").read_text())
    assert doc["r_d_out"] == pytest.approx(5 / 6)


def test_curvature_csv_columns(ex3, tmp_path):
    assert run("curvature", "--input", ex3, "--augment", "--output-dir", tmp_path) == 0
    rows = read_csv(tmp_path / "curvature.csv")
    assert list(rows[0]) == ["src", "dst", "weight", "rho", "wasserstein", "kappa"]
    assert len(rows) == 7


def test_config_file_precedence(ex3, tmp_path):
    toml = tmp_path / "run.toml"
    toml.write_text('alpha = 0.3\ncut-count = 3\n[extract-core]\niterations = 4\n')
    assert run("--config", toml, "extract-core", "--input", ex3, "--iterations", "5",
               "--output-dir", tmp_path) == 0
    config = json.loads((tmp_path / "core.json").read_text())["config"]
    assert (config["alpha"], config["cut_count"], config["iterations"]) == (0.3, 3, 5)
    js = tmp_path / "run.json"
    js.write_text(json.dumps({"seed": 9, "extract-core": {"tau": 0.5}}))
    assert run("--config", js, "extract-core", "--input", ex3, "--output-dir", tmp_path) == 0
    config = json.loads((tmp_path / "core.json").read_text())["config"]
    assert (config["seed"], config["tau"]) == (9, 0.5)


def test_config_unknown_key(ex3, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"alhpa": 0.2}')
    assert run("--config", bad, "stats", "--input", ex3) == 2
    assert "alhpa" in capsys.readouterr().err


def test_config_missing_file(ex3, tmp_path):
    assert run("--config", tmp_path / "none.toml", "stats", "--input", ex3) == 1


def test_output_dir_from_environment(ex3, tmp_path, monkeypatch):
    monkeypatch.setenv("RICCICORE_OUTPUT_DIR", str(tmp_path / "env"))
    assert run("stats", "--input", ex3) == 0
    assert (tmp_path / "env" / "stats.json").exists()


def test_global_flags_after_subcommand(ex3, tmp_path):
    assert run("stats", "--input", ex3, "--output-dir", tmp_path / "late") == 0
    assert (tmp_path / "late" / "stats.json").exists()


@pytest.mark.parametrize("command", sorted(COMMANDS))
def test_subcommands_are_byte_reproducible(command, small_graph, tmp_path):
    outs = []
    for k in ("a", "b"):
        out = tmp_path / k
        args = [command, "--input", small_graph, "--seed", "3", *COMMANDS[command]]
        assert run(*args, "--output-dir", out) == 0
        outs.append(out)
    files = sorted(p.name for p in outs[0].iterdir())
    assert files
    assert files == sorted(p.name for p in outs[1].iterdir())
    for name in files:
        a, b = (outs[0] / name).read_bytes(), (outs[1] / name).read_bytes()
        if name.endswith((".csv", ".json")):
            a = a.replace(str(outs[0]).encode(), b"OUT")
            b = b.replace(str(outs[1]).encode(), b"OUT")
        assert a == b, name


def test_console_entry_point(ex3, tmp_path):
    proc = subprocess.run([sys.executable, "-m", "riccicore.cli", "stats", "--input", str(ex3),
                           "--output-dir", str(tmp_path)], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "vertices=5" in proc.stdout
