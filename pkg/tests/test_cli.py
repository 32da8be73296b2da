import csv
import json
import subprocess
import sys

from ztdp import parse_graph, parse_tree_decomposition, validate
from ztdp.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_grid(tmp_path, capsys):
    path = tmp_path / "g.gr"
    code, _, _ = run_cli(capsys, "gen", "grid", "4", "4", "-o", str(path))
    assert code == 0
    g = parse_graph(path.read_text())
    assert g.n == 16 and len(g.edges) == 24
    assert "c grid 4 4" in path.read_text()


def test_gen_grid_3d(capsys):
    code, out, _ = run_cli(capsys, "gen", "grid", "2", "2", "2")
    assert code == 0
    assert len(parse_graph(out).edges) == 12


def test_gen_random_deterministic(tmp_path, capsys):
    a = tmp_path / "a.gr"
    b = tmp_path / "b.gr"
    assert run_cli(capsys, "gen", "random", "-n", "6", "-p", "0.5", "--seed", "7",
                   "-o", str(a))[0] == 0
    assert run_cli(capsys, "gen", "random", "-n", "6", "-p", "0.5", "--seed", "7",
                   "-o", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_decompose_balanced_roundtrip(tmp_path, capsys):
    graph = tmp_path / "g.gr"
    run_cli(capsys, "gen", "grid", "4", "4", "-o", str(graph))
    code, out, _ = run_cli(capsys, "decompose", str(graph))
    assert code == 0
    report = json.loads(out)
    assert report["tree_depth_h"] <= 12
    td = parse_tree_decomposition((tmp_path / "g.td").read_text())
    assert validate(parse_graph(graph.read_text()), td).ok


def test_decompose_path_needs_grid(tmp_path, capsys):
    graph = tmp_path / "r.gr"
    run_cli(capsys, "gen", "random", "-n", "5", "--seed", "1", "-o", str(graph))
    code, _, err = run_cli(capsys, "decompose", str(graph), "--method", "path")
    assert code == 2
    assert "grid" in err


def test_decompose_path_bag_size(tmp_path, capsys):
    graph = tmp_path / "g.gr"
    run_cli(capsys, "gen", "grid", "3", "3", "-o", str(graph))
    code, out, _ = run_cli(capsys, "decompose", str(graph), "--method", "path")
    assert code == 0
    assert json.loads(out)["width"] + 1 == 4


def test_count_pm_grid(tmp_path, capsys):
    graph = tmp_path / "g.gr"
    run_cli(capsys, "gen", "grid", "2", "2", "-o", str(graph))
    code, out, _ = run_cli(capsys, "count", str(graph), "--problem", "pm")
    assert code == 0
    report = json.loads(out)
    assert report["schema"] == "ztdp/run-report/1"
    assert report["answer"] == "2"
    assert report["ok"] is True
    assert report["checks"]["path_bound"]["ok"] is True
    assert report["checks"]["grid_depth_bound"]["ok"] is True
    assert int(report["answer"]) == 2


def test_count_pm_3x3_is_zero(tmp_path, capsys):
    graph = tmp_path / "g.gr"
    run_cli(capsys, "gen", "grid", "3", "3", "-o", str(graph))
    for engine in ("zeta", "table", "oracle"):
        code, out, _ = run_cli(capsys, "count", str(graph), "--problem", "pm",
                               "--engine", engine)
        assert code == 0
        assert json.loads(out)["answer"] == "0"


def test_count_domsets_k2(tmp_path, capsys):
    graph = tmp_path / "k2.gr"
    graph.write_text("p gr 2 1\n1 2\n")
    for engine in ("zeta", "table", "oracle"):
        code, out, _ = run_cli(capsys, "count", str(graph), "--problem", "domsets",
                               "--engine", engine)
        assert code == 0
        assert json.loads(out)["answer"] == "3"


def test_count_matchpoly_coefficients(tmp_path, capsys):
    graph = tmp_path / "p3.gr"
    graph.write_text("p gr 3 2\n1 2\n2 3\n")
    code, out, _ = run_cli(capsys, "count", str(graph), "--problem", "matchpoly")
    assert code == 0
    assert json.loads(out)["answer"] == ["1", "2"]


def test_count_setcover_and_packings(tmp_path, capsys):
    hyper = tmp_path / "h.hg"
    hyper.write_text("p hg 2 3\n1\n2\n1 2\n")
    code, out, _ = run_cli(capsys, "count", str(hyper), "--problem", "setcover")
    assert code == 0
    assert json.loads(out)["answer"] == "5"
    code, out, _ = run_cli(capsys, "count", str(hyper), "--problem", "packings",
                           "-l", "2")
    assert code == 0
    assert json.loads(out)["answer"] == "1"
    code, _, err = run_cli(capsys, "count", str(hyper), "--problem", "packings")
    assert code == 2 and "-l" in err


def test_count_rejects_invalid_td(tmp_path, capsys):
    graph = tmp_path / "k2.gr"
    graph.write_text("p gr 2 1\n1 2\n")
    td = tmp_path / "bad.td"
    td.write_text("s td 2 1 2\nb 1 1\nb 2 2\n1 2\n")
    code, _, err = run_cli(capsys, "count", str(graph), "--problem", "pm",
                           "--td", str(td))
    assert code == 2
    assert "invalid" in err


def test_count_accepts_valid_td(tmp_path, capsys):
    graph = tmp_path / "k2.gr"
    graph.write_text("p gr 2 1\n1 2\n")
    td = tmp_path / "ok.td"
    td.write_text("s td 1 2 2\nb 1 1 2\n")
    code, out, _ = run_cli(capsys, "count", str(graph), "--problem", "pm",
                           "--td", str(td))
    assert code == 0
    assert json.loads(out)["answer"] == "1"


def test_count_modulus_and_parallel(tmp_path, capsys):
    graph = tmp_path / "g.gr"
    run_cli(capsys, "gen", "grid", "4", "4", "-o", str(graph))
    code, out, _ = run_cli(capsys, "count", str(graph), "--problem", "pm",
                           "--modulus", "7")
    assert code == 0
    assert json.loads(out)["answer"] == str(36 % 7)
    base = json.loads(run_cli(capsys, "count", str(graph), "--problem", "pm")[1])
    par = json.loads(run_cli(capsys, "count", str(graph), "--problem", "pm",
                             "--parallel", "4")[1])
    base["stats"].pop("wall_time")
    par["stats"].pop("wall_time")
    assert base == par


def test_count_oracle_budget(tmp_path, capsys):
    graph = tmp_path / "big.gr"
    run_cli(capsys, "gen", "grid", "5", "5", "-o", str(graph))
    code, _, err = run_cli(capsys, "count", str(graph), "--problem", "pm",
                           "--engine", "oracle")
    assert code == 2
    assert "budget" in err


def test_bench_csv(tmp_path, capsys):
    out_file = tmp_path / "bench.csv"
    code, _, _ = run_cli(capsys, "bench", "--n-min", "2", "--n-max", "4",
                         "-o", str(out_file))
    assert code == 0
    with open(out_file) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 6  # 3 instances x 2 engines
    by_engine = {}
    for row in rows:
        assert row["path_bound_ok"] == "True"
        by_engine.setdefault(row["n"], {})[row["engine"]] = row["answer"]
    for n, answers in by_engine.items():
        assert answers["zeta"] == answers["table"]
    zeta6 = [r for r in rows if r["engine"] == "zeta"]
    assert all(r["table_entries"] == "" for r in zeta6)


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "ztdp.cli", "gen", "grid", "2", "2"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "p gr 4 4" in proc.stdout
