import csv

import numpy as np
import pytest

from conftest import random_dataset
from smoothperf import harness
from smoothperf.cli import main
from smoothperf.data import Dataset, dump_svmlight, load_svmlight
from smoothperf.solvers import TracePoint


@pytest.fixture
def tiny(tmp_path):
    rng = np.random.default_rng(0)
    X = rng.normal(size=(40, 4))
    y = np.where(X[:, 0] + 0.5 * rng.normal(size=40) > 0, 1, -1)
    train = tmp_path / "tiny.svml"
    train.write_text(dump_svmlight(Dataset.from_dense(X[:30], y[:30])))
    test = tmp_path / "tiny_test.svml"
    test.write_text(dump_svmlight(Dataset.from_dense(X[30:], y[30:])))
    return train, test


def read_rows(path):
    with open(path, newline="") as f:
        return list(csv.reader(f))


def test_train_writes_trace_and_model(tiny, tmp_path):
    train, test = tiny
    trace, model = tmp_path / "t.csv", tmp_path / "w.txt"
    code = main(["train", "--loss", "prbep", "--solver", "lbfgs", "--train", str(train),
                 "--test", str(test), "--lambda", "1", "--epsilon", "0.001",
                 "--trace", str(trace), "--model", str(model)])
    assert code == 0
    rows = read_rows(trace)
    assert rows[0] == ["iter", "cpu_ms", "primal_J", "smooth_J", "test_metric"]
    assert [int(r[0]) for r in rows[1:]] == list(range(len(rows) - 1))
    cpu = [float(r[1]) for r in rows[1:]]
    assert cpu == sorted(cpu)
    assert harness.load_model(model).size == 4


def test_train_trace_to_stdout(tiny, capsys):
    code = main(["train", "--loss", "rocarea", "--solver", "agm", "--train", str(tiny[0]),
                 "--lambda", "1", "--max-iter", "20"])
    out = capsys.readouterr()
    assert code == 0
    assert out.out.splitlines()[0] == "iter,cpu_ms,primal_J,smooth_J,test_metric"
    assert "status=" in out.err


def test_bundle_trace_has_empty_smooth_column(tiny, tmp_path, caplog):
    trace = tmp_path / "b.csv"
    code = main(["train", "--loss", "prbep", "--solver", "bundle", "--train", str(tiny[0]),
                 "--lambda", "1", "--mu-mult", "100", "--trace", str(trace)])
    assert code == 0
    assert all(r[3] == "" and r[4] == "" for r in read_rows(trace)[1:])
    assert "ignored" in caplog.text


@pytest.mark.parametrize("solver", ["lbfgs", "agm", "bundle"])
def test_deterministic_except_cpu(tiny, tmp_path, solver):
    paths = [tmp_path / f"{solver}{i}.csv" for i in range(2)]
    for p in paths:
        assert main(["train", "--loss", "rocarea", "--solver", solver, "--train", str(tiny[0]),
                     "--test", str(tiny[1]), "--lambda", "0.1", "--trace", str(p)]) == 0
    a, b = (read_rows(p) for p in paths)
    strip = lambda rows: [r[:1] + r[2:] for r in rows]
    assert strip(a) == strip(b)


def test_usage_errors(tiny, capsys):
    assert main(["train", "--loss", "prbep", "--solver", "lbfgs", "--lambda", "1"]) == 1
    assert "usage" in capsys.readouterr().err
    assert main(["train", "--loss", "f1", "--solver", "lbfgs", "--train", str(tiny[0]),
                 "--lambda", "1"]) == 1
    assert main(["train", "--bogus"]) == 1
    assert main(["compare", "--loss", "prbep", "--solvers", "", "--train", str(tiny[0]),
                 "--lambda", "1"]) == 1
    assert main(["compare", "--loss", "prbep", "--solvers", "lbfgs,sgd", "--train",
                 str(tiny[0]), "--lambda", "1"]) == 1


def test_runtime_errors(tmp_path, tiny):
    assert main(["train", "--loss", "prbep", "--solver", "lbfgs", "--train",
                 str(tmp_path / "missing"), "--lambda", "1"]) == 2
    bad = tmp_path / "bad.svml"
    bad.write_text("+1 1:1\nxyz\n")
    assert main(["train", "--loss", "prbep", "--solver", "lbfgs", "--train", str(bad),
                 "--lambda", "1"]) == 2
    one_class = tmp_path / "pos.svml"
    one_class.write_text("+1 1:1\n+1 1:2\n")
    assert main(["train", "--loss", "prbep", "--solver", "lbfgs", "--train", str(one_class),
                 "--lambda", "1"]) == 2
    assert main(["train", "--loss", "prbep", "--solver", "lbfgs", "--train", str(tiny[0]),
                 "--lambda", "0"]) == 2


def test_eval_round_trip(tiny, tmp_path, capsys):
    train, test = tiny
    for loss in ("prbep", "rocarea"):
        trace, model = tmp_path / f"{loss}.csv", tmp_path / f"{loss}.w"
        for solver in ("lbfgs", "bundle"):
            assert main(["train", "--loss", loss, "--solver", solver, "--train", str(train),
                         "--test", str(test), "--lambda", "0.1", "--trace", str(trace),
                         "--model", str(model)]) == 0
            capsys.readouterr()
            assert main(["eval", "--model", str(model), "--test", str(test),
                         "--loss", loss]) == 0
            lines = dict(l.split("=") for l in capsys.readouterr().out.split())
            assert lines[f"{loss}_metric"] == read_rows(trace)[-1][4]


def test_eval_examples(tmp_path, capsys):
    data = tmp_path / "sep.svml"
    data.write_text("+1 1:2\n+1 1:1\n-1 1:-1\n-1 1:-3\n")
    model = tmp_path / "w"
    harness.save_model(model, [1.0])
    assert main(["eval", "--model", str(model), "--test", str(data), "--loss", "prbep"]) == 0
    assert "prbep_metric=1\n" in capsys.readouterr().out
    harness.save_model(model, [0.0])
    assert main(["eval", "--model", str(model), "--test", str(data), "--loss", "rocarea"]) == 0
    assert "rocarea_metric=0.5\n" in capsys.readouterr().out
    model.write_text("1\nabc\n")
    assert main(["eval", "--model", str(model), "--test", str(data), "--loss", "prbep"]) == 2


def test_eval_extra_test_features_ignored(tmp_path, capsys):
    data = tmp_path / "wide.svml"
    data.write_text("+1 1:2 5:100\n-1 1:-1 3:-7\n")
    model = tmp_path / "w"
    harness.save_model(model, [1.0])
    assert main(["eval", "--model", str(model), "--test", str(data), "--loss", "rocarea"]) == 0
    assert "rocarea_metric=1\n" in capsys.readouterr().out


def test_model_round_trip_exact(tmp_path):
    w = np.random.default_rng(3).normal(size=9) * 1e-7
    harness.save_model(tmp_path / "m", w)
    np.testing.assert_array_equal(harness.load_model(tmp_path / "m"), w)
    (tmp_path / "m").write_text("3\n1\n2\n")
    with pytest.raises(ValueError):
        harness.load_model(tmp_path / "m")


def test_compare_writes_summary(tiny, tmp_path, capsys):
    out = tmp_path / "cmp"
    code = main(["compare", "--loss", "prbep", "--solvers", "lbfgs,bundle", "--mu-mults", "1",
                 "--train", str(tiny[0]), "--test", str(tiny[1]), "--lambda", "1",
                 "--out-dir", str(out)])
    assert code == 0
    rows = read_rows(out / "summary.csv")
    assert rows[0] == list(harness.SUMMARY_HEADER)
    assert [r[0] for r in rows[1:]] == ["lbfgs@mu*1", "bundle"]
    finals = [float(r[2]) for r in rows[1:]]
    assert abs(finals[0] - finals[1]) <= 2e-3
    assert (out / "trace_lbfgs_mu1.csv").exists() and (out / "trace_bundle.csv").exists()


def test_compare_mu_grid():
    rng = np.random.default_rng(4)
    d = random_dataset(rng, 60, 3)
    runs, summary = harness.compare(d, "prbep", ["lbfgs"], [1, 100, 1000], 1e-2)
    assert [r["configuration"] for r in summary] == ["lbfgs@mu*1", "lbfgs@mu*100",
                                                     "lbfgs@mu*1000"]
    best = min(tp.primal_J for r in runs for tp in r.trace)
    assert any(r["cpu_ms_to_target"] is not None for r in summary)
    assert all(r["final_primal_J"] >= best for r in summary)
    with pytest.raises(ValueError):
        harness.compare(d, "prbep", [], [1], 1e-2)


def test_time_to_target():
    trace = [TracePoint(0, 0.0, 5.0), TracePoint(1, 2.0, 3.0), TracePoint(2, 4.0, 1.0)]
    assert harness.time_to_target(trace, 3.0) == 2.0
    assert harness.time_to_target(trace, 0.5) is None


def test_test_set_padded_to_train_width(tmp_path):
    train = tmp_path / "a.svml"
    train.write_text("+1 1:1 2:1\n-1 1:-1\n")
    test = tmp_path / "b.svml"
    test.write_text("+1 1:1\n-1 3:5\n")
    assert main(["train", "--loss", "rocarea", "--solver", "lbfgs", "--train", str(train),
                 "--test", str(test), "--lambda", "1", "--trace",
                 str(tmp_path / "t.csv")]) == 0
    assert load_svmlight(test, n_features=2).p == 2
