import csv
import io
import itertools

import numpy as np
import pytest

from graphslc.cli import SWEEP_COLUMNS, main


def k6_pair(path):
    lines = [f"{a} {b}" for a, b in itertools.combinations(range(6), 2)]
    lines += [f"{a + 100} {b + 100}" for a, b in itertools.combinations(range(6), 2)]
    path.write_text("\n".join(lines) + "\n")
    return path


def read_tree(path):
    return {p.name: p.read_bytes() for p in sorted(path.iterdir())}


def kv(text):
    return dict(line.split("=", 1) for line in text.strip().splitlines())


def test_cluster_two_cliques(tmp_path, capsys):
    src = k6_pair(tmp_path / "g.txt")
    assert main(["cluster", str(src), "--method", "ecg", "--ms", "5", "--seed", "1",
                 "--output-dir", str(tmp_path / "out")]) == 0
    info = kv(capsys.readouterr().out)
    assert info["clusters"] == "2" and float(info["coverage"]) == 1.0
    lines = sorted((tmp_path / "out" / "clusters.txt").read_text().splitlines())
    assert lines == ["0 1 2 3 4 5", "100 101 102 103 104 105"]
    assert (tmp_path / "out" / "condensed_tree.csv").read_text().startswith("cluster_id,parent_id")
    assert (tmp_path / "out" / "node_map.txt").read_text().splitlines()[6] == "6 100"


def test_cluster_ms_too_large(tmp_path, capsys):
    src = tmp_path / "g.txt"
    src.write_text("\n".join(f"{k} {k + 1}" for k in range(9)) + "\n")
    assert main(["cluster", str(src), "--method", "sc", "--ms", "50", "--seed", "0",
                 "--output-dir", str(tmp_path / "o")]) == 0
    info = kv(capsys.readouterr().out)
    assert info["clusters"] == "0" and float(info["coverage"]) == 0.0 and info["outliers"] == "10"


@pytest.mark.parametrize("method", ["sc", "rww", "n2v", "rnbrw", "simrank", "ecg", "lc", "lgtp",
                                    "eecg", "lg-sc", "lg-ecg", "lg-rnbrw", "lg-n2v", "lg-rww",
                                    "lg-simrank"])
def test_cluster_byte_identical(tmp_path, method):
    src = k6_pair(tmp_path / "g.txt")
    with open(src, "a") as fh:
        fh.write("5 100\n2 103\n")
    outs = []
    for run in range(2):
        d = tmp_path / f"run{run}"
        assert main(["cluster", str(src), "--method", method, "--ms", "3", "--seed", "4",
                     "--walks", "4", "--walk-len", "10", "--scores", "--output-dir", str(d)]) == 0
        outs.append(read_tree(d))
    assert outs[0] == outs[1]


def test_cluster_without_seed_prints_seed(tmp_path, capsys):
    src = k6_pair(tmp_path / "g.txt")
    main(["cluster", str(src), "--method", "lc", "--output-dir", str(tmp_path / "o")])
    err = capsys.readouterr().err
    assert err.startswith("seed=") and int(err.split("=")[1]) >= 0


def test_cluster_errors_exit_nonzero(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("0 1\n1 2 3 4\n")
    assert main(["cluster", str(bad), "--method", "lc", "--seed", "0"]) != 0
    assert "line 2" in capsys.readouterr().err
    assert main(["cluster", str(tmp_path / "missing.txt"), "--method", "lc", "--seed", "0"]) != 0
    src = k6_pair(tmp_path / "g.txt")
    assert main(["cluster", str(src), "--method", "lc", "--ms", "1", "--seed", "0",
                 "--output-dir", str(tmp_path / "o")]) != 0


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_evaluate_examples(tmp_path, capsys):
    graph = write(tmp_path, "g.txt", "1 2\n2 3\n3 4\n")
    truth = write(tmp_path, "t.txt", "1 2\n3 4\n")
    assert main(["evaluate", "--pred", truth, "--truth", truth, "--graph", graph]) == 0
    rep = kv(capsys.readouterr().out)
    assert float(rep["precision"]) == float(rep["recall"]) == float(rep["f1"]) == 1.0

    pred = write(tmp_path, "p.txt", "1 2 3\n")
    out = tmp_path / "rep"
    assert main(["evaluate", "--pred", pred, "--truth", truth, "--graph", graph, "--output-dir", str(out)]) == 0
    rep = kv(capsys.readouterr().out)
    assert round(float(rep["precision"]), 3) == 0.667 and round(float(rep["f1"]), 3) == 0.8
    rows = list(csv.DictReader(io.StringIO((out / "report.csv").read_text())))
    assert round(float(rows[0]["recall"]), 3) == 1.0
    assert kv((out / "report.txt").read_text())["clusters"] == "1"

    empty = write(tmp_path, "e.txt", "")
    assert main(["evaluate", "--pred", empty, "--truth", truth, "--graph", graph]) == 0
    captured = capsys.readouterr()
    rep = kv(captured.out)
    assert rep["empty"] == "True" and float(rep["f1"]) == 0.0 and "empty" in captured.err


def test_evaluate_bad_label(tmp_path, capsys):
    graph = write(tmp_path, "g.txt", "1 2\n")
    pred = write(tmp_path, "p.txt", "1 7\n")
    assert main(["evaluate", "--pred", pred, "--truth", pred, "--graph", graph]) != 0
    assert "7" in capsys.readouterr().err


def test_generate_deterministic_and_verify(tmp_path, capsys):
    for d in ("a", "b"):
        assert main(["generate", "--n", "300", "--mu", "0.3", "--outliers", "0.1", "--overlap", "0.1",
                     "--seed", "8", "--output-dir", str(tmp_path / d)]) == 0
    assert read_tree(tmp_path / "a") == read_tree(tmp_path / "b")
    capsys.readouterr()
    assert main(["generate", "--n", "100", "--mu", "0", "--min-size", "50", "--max-size", "50",
                 "--seed", "2", "--verify", "--output-dir", str(tmp_path / "c")]) == 0
    assert float(kv(capsys.readouterr().out)["intra_fraction"]) >= 0.99
    assert main(["generate", "--n", "10", "--min-size", "20", "--mean-degree", "4", "--seed", "1",
                 "--output-dir", str(tmp_path / "d")]) != 0
    assert "error" in capsys.readouterr().err


def sweep_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_sweep_matches_manual_run(tmp_path, capsys):
    gen = ["--n", "300", "--outliers", "0.1", "--mean-degree", "8"]
    assert main(["sweep", *gen, "--methods", "ecg", "--mus", "0.25", "--ms", "10", "--reps", "1",
                 "--seed", "6"]) == 0
    row = sweep_rows(capsys.readouterr().out)[0]
    assert list(row) == list(SWEEP_COLUMNS)

    assert main(["generate", *gen, "--mu", "0.25", "--seed", "6", "--output-dir", str(tmp_path / "g")]) == 0
    assert main(["cluster", str(tmp_path / "g" / "graph.txt"), "--method", "ecg", "--ms", "10",
                 "--seed", "6", "--output-dir", str(tmp_path / "c")]) == 0
    capsys.readouterr()
    assert main(["evaluate", "--pred", str(tmp_path / "c" / "clusters.txt"),
                 "--truth", str(tmp_path / "g" / "truth.txt"),
                 "--graph", str(tmp_path / "g" / "graph.txt")]) == 0
    rep = kv(capsys.readouterr().out)
    for key in ("precision", "recall", "f1", "coverage"):
        assert row[key] == rep[key]
    assert float(row["clusters"]) == float(rep["clusters"])


def test_sweep_reproducible_and_parallel(tmp_path, capsys):
    args = ["sweep", "--n", "300", "--methods", "ecg,lc", "--mus", "0.2,0.4", "--reps", "5",
            "--ms", "10", "--seed", "3"]
    outs = []
    for jobs in ("1", "1", "2"):
        assert main(args + ["--jobs", jobs]) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1] == outs[2]
    assert len(sweep_rows(outs[0])) == 4


def test_sweep_monotone_in_mu(capsys):
    assert main(["sweep", "--n", "600", "--methods", "ecg", "--mus", "0.1,0.7", "--reps", "3",
                 "--seed", "0"]) == 0
    rows = sweep_rows(capsys.readouterr().out)
    assert float(rows[0]["f1"]) > float(rows[1]["f1"])


def test_sweep_failed_cell_is_nan(capsys):
    assert main(["sweep", "--n", "60", "--min-size", "20", "--max-size", "20", "--overlap", "0.0",
                 "--overlaps", "0.0,0.9", "--methods", "lc", "--ms", "5", "--seed", "1"]) == 0
    rows = sweep_rows(capsys.readouterr().out)
    assert rows[0]["error"] == "" and rows[1]["error"] != ""
    assert np.isnan(float(rows[1]["f1"]))


def test_sweep_rejects_unknown_method(capsys):
    assert main(["sweep", "--methods", "nope", "--seed", "0"]) != 0
