import pytest

from dtwmean.cli import run


@pytest.fixture
def files(tmp_path):
    x = tmp_path / "x.txt"
    y = tmp_path / "y.txt"
    x.write_text("1\n2\n3\n")
    y.write_text("1,3\n")
    return tmp_path, str(x), str(y)


def test_dist(files, capsys):
    _, x, y = files
    assert run(["dist", x, y, "--path"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "distance 1.0"
    assert out[1] == "(1,1) (2,1) (3,2)"


def test_mean_commands(files, capsys):
    _, x, y = files
    assert run(["mean-exact", x, y]) == 0
    assert "frechet" in capsys.readouterr().out
    assert run(["mean-dba", x, y, "--init", "0"]) == 0
    assert "converged True" in capsys.readouterr().out
    assert run(["mean-ssg", x, y, "--max-iter", "5", "--seed", "3", "--init", y]) == 0
    assert "iterations 5" in capsys.readouterr().out


def test_exit_codes(files, capsys):
    tmp, x, y = files
    assert run(["eval-correctness", "--trials", "0", "--synthetic", "1"]) == 1
    assert run(["dist", x]) == 1
    assert run(["bogus"]) == 1
    assert run(["dist", x, y, "--frobnicate"]) == 1
    assert run(["eval-correctness"]) == 1
    assert run(["eval-driftout", "--synthetic", "1", "--methods", "kmeans"]) == 1
    assert run(["mean-exact", x]) == 1
    assert run(["mean-ssg", x, y, "--eta0", "0.01", "--eta1", "0.1"]) == 1
    assert run(["dist", x, str(tmp / "missing")]) == 2
    bad = tmp / "bad.txt"
    bad.write_text("1,abc\n")
    assert run(["eval-correctness", "--dataset", f"bad={bad}"]) == 2
    assert run(["mean-exact", x, y, "--max-n", "2"]) == 3
    assert run(["eval-correctness", "--synthetic", "1", "--length", "30", "--max-n", "10", "--trials", "2"]) == 3
    capsys.readouterr()


def test_eval_driftout_exact_is_zero(tmp_path, capsys):
    out = tmp_path / "d.csv"
    argv = ["eval-driftout", "--synthetic", "2", "--length", "6", "--count", "20", "--trials", "10"]
    assert run(argv + ["--methods", "exact", "--output", str(out)]) == 0
    assert out.read_text().splitlines() == ["dataset,exact_pct", "synthetic00,0.000000", "synthetic01,0.000000", "total,0.000000"]
    assert run(argv + ["--methods", "dba,ssg", "--format", "json", "--output", str(tmp_path / "d.out")]) == 0
    assert (tmp_path / "d.out").read_text().startswith("{")
    capsys.readouterr()


def test_gen_synthetic_then_evaluate(tmp_path, capsys):
    assert run(["gen-synthetic", "--output", str(tmp_path), "--datasets", "1", "--count", "12", "--length", "8"]) == 0
    path = tmp_path / "synthetic00.tsv"
    assert len(path.read_text().splitlines()) == 12
    rep = tmp_path / "c.csv"
    assert run(["eval-correctness", "--dataset", f"walk={path}", "--trials", "5", "--output", str(rep)]) == 0
    lines = rep.read_text().splitlines()
    assert lines[0].startswith("dataset,n_eq") and lines[1].startswith("walk,")
    assert run(["eval-correctness", "--ucr-root", str(tmp_path), "--names", "synthetic00", "--trials", "3"]) == 0
    capsys.readouterr()
