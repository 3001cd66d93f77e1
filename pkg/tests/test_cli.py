import csv
import io
import json
import math

import pytest

from castopt.cli import main
from castopt.output import fmt, read_csv_body

MINIMAL = """\
objective = "ackley"
d = 1
N = 100
steps = 10
seed = 1
"""


def write(tmp_path, text, name="cfg.toml"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def rows(path):
    return list(csv.DictReader(io.StringIO(read_csv_body(path))))


def test_run_minimal(tmp_path, capsys):
    cfg = write(tmp_path, MINIMAL)
    out = tmp_path / "out"
    assert main(["run", cfg, "--out", str(out)]) == 0
    assert {p.name for p in out.iterdir()} == {"trace.csv", "histogram.csv", "summary.json"}
    trace = rows(out / "trace.csv")
    assert len(trace) == 10
    assert list(trace[0]) == ["step", "best_mse", "avg_mse", "m1", "m2", "var",
                              "geo_mean", "best_T"]
    assert [int(r["step"]) for r in trace] == list(range(1, 11))
    hist = rows(out / "histogram.csv")
    assert len(hist) == 10 * 50
    assert sum(int(r["count"]) for r in hist if r["step"] == "1") == 100
    summary = json.loads((out / "summary.json").read_text())
    assert summary["header"]["seed"] == 1
    assert set(summary["runs"][0]) >= {"success", "steps_to_basin", "final_best_mse"}
    assert "trace.csv" in capsys.readouterr().out


def test_headers_present(tmp_path):
    cfg = write(tmp_path, MINIMAL)
    main(["run", cfg, "--out", str(tmp_path / "o")])
    for name in ("trace.csv", "histogram.csv"):
        head = (tmp_path / "o" / name).read_text().splitlines()[:3]
        assert head[0].startswith("# castopt ")
        assert head[1] == "# seed = 1"
        config = json.loads(head[2].split("= ", 1)[1])
        assert config["objective"] == "ackley" and config["proposal"] == "cauchy"
        assert config["shrink"] == 0.5 and config["hist_bins"] == 50


def test_seed_override_byte_identical(tmp_path):
    cfg = write(tmp_path, MINIMAL)
    a, b = tmp_path / "a", tmp_path / "b"
    main(["run", cfg, "--seed", "7", "--out", str(a)])
    main(["run", cfg, "--seed", "7", "--out", str(b)])
    for name in ("trace.csv", "histogram.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    assert "# seed = 7" in (a / "trace.csv").read_text()
    c = tmp_path / "c"
    main(["run", cfg, "--seed", "8", "--out", str(c)])
    assert read_csv_body(a / "trace.csv") != read_csv_body(c / "trace.csv")


def test_jobs_do_not_change_output(tmp_path):
    cfg = write(tmp_path, MINIMAL + "repeats = 3\n")
    a, b = tmp_path / "a", tmp_path / "b"
    main(["run", cfg, "--jobs", "1", "--out", str(a)])
    main(["run", cfg, "--jobs", "2", "--out", str(b)])
    assert read_csv_body(a / "trace.csv") == read_csv_body(b / "trace.csv")
    assert rows(a / "trace.csv")[0]["run"] == "0"


def test_missing_objective_exit_code(tmp_path, capsys):
    cfg = write(tmp_path, "d = 1\nN = 100\nsteps = 10\n")
    assert main(["run", cfg, "--out", str(tmp_path / "o")]) == 2
    assert "objective" in capsys.readouterr().err


def test_unknown_key_line_number(tmp_path, capsys):
    cfg = write(tmp_path, MINIMAL + "temperatur = 0.1\n")
    assert main(["run", cfg, "--out", str(tmp_path / "o")]) == 2
    err = capsys.readouterr().err
    assert "temperatur" in err and "cfg.toml:6:" in err


def test_bad_value_exit_code(tmp_path, capsys):
    cfg = write(tmp_path, MINIMAL + "mu = 0.9\n")
    assert main(["run", cfg, "--out", str(tmp_path / "o")]) == 2


def test_set_override(tmp_path):
    cfg = write(tmp_path, MINIMAL)
    out = tmp_path / "o"
    assert main(["run", cfg, "--set", "steps=4", "--set", "cooling=log",
                 "--out", str(out)]) == 0
    trace = rows(out / "trace.csv")
    assert len(trace) == 4
    assert float(trace[0]["best_T"]) == pytest.approx(0.05 / math.log(1 + math.e))


COMPARE = """\
objective = "ackley"
d = 2
N = 30
steps = 12
repeats = {repeats}
seed = 3

[arms.cast]
cooling = "cast"

[arms.sa]
cooling = "log"
"""


def test_compare_columns(tmp_path):
    cfg = write(tmp_path, COMPARE.format(repeats=2))
    out = tmp_path / "o"
    assert main(["compare", cfg, "--out", str(out)]) == 0
    table = rows(out / "compare.csv")
    assert list(table[0]) == ["step", "cast_best_logmse", "sa_best_logmse",
                              "cast_avg_logmse", "sa_avg_logmse", "cast_m1",
                              "cast_geo_mean", "cast_best_T", "sa_T"]
    assert len(table) == 12
    assert float(table[0]["sa_T"]) == pytest.approx(0.05 / math.log(1 + math.e))


def test_compare_single_repeat_equals_run(tmp_path):
    cfg = write(tmp_path, COMPARE.format(repeats=1))
    main(["compare", cfg, "--out", str(tmp_path / "c")])
    table = rows(tmp_path / "c" / "compare.csv")
    from castopt import derive_stream, run
    from castopt.config import load_document, parse_compare

    _, arms = parse_compare(load_document(cfg))
    trace = run(arms["cast"].run_config(), derive_stream(3, "compare:cast", 0))
    assert float(table[-1]["cast_best_logmse"]) == pytest.approx(
        math.log10(max(trace.best_mse[-1], 1e-30)), rel=1e-15)


def test_compare_needs_two_arms(tmp_path, capsys):
    text = COMPARE.format(repeats=1).split("[arms.sa]")[0]
    assert main(["compare", write(tmp_path, text), "--out", str(tmp_path / "o")]) == 2
    assert "two" in capsys.readouterr().err


def test_compare_mismatched_steps(tmp_path, capsys):
    text = COMPARE.format(repeats=1) + "steps = 20\n"
    assert main(["compare", write(tmp_path, text), "--out", str(tmp_path / "o")]) == 2
    assert "mismatched" in capsys.readouterr().err


SWEEP = """\
objective = "ackley"
d = 2
N = 20
max_steps = 20
runs_per_cell = 2
seed = 4

[axes]
mu = [0.0, 1.0]
lambda = {lam}
"""


def test_sweep_heatmap(tmp_path):
    cfg = write(tmp_path, SWEEP.format(lam="[0.0, 1.0]"))
    out = tmp_path / "o"
    assert main(["sweep", cfg, "--out", str(out)]) == 0
    names = {p.name for p in out.iterdir()}
    assert {"cells.csv", "cells.json", "marginal_mu.csv", "marginal_lambda.csv",
            "heatmap.csv"} <= names
    heat = {(float(r["mu"]), float(r["lambda"])): r for r in rows(out / "heatmap.csv")}
    assert len(heat) == 4
    assert heat[(1.0, 0.0)]["success_rate"] == "" and heat[(1.0, 0.0)]["mean_steps"] == ""
    for key in [(0.0, 0.0), (0.0, 1.0), (1.0, 1.0)]:
        assert heat[key]["success_rate"] != ""
    cells = rows(out / "cells.csv")
    assert [c["valid"] for c in cells] == ["true", "true", "false", "true"]


def test_sweep_rerun_identical(tmp_path):
    cfg = write(tmp_path, SWEEP.format(lam="{lin = [0.5, 1.0, 2]}"))
    main(["sweep", cfg, "--out", str(tmp_path / "a")])
    main(["sweep", cfg, "--out", str(tmp_path / "b"), "--jobs", "2"])
    for name in ("cells.csv", "heatmap.csv", "marginal_mu.csv"):
        assert read_csv_body(tmp_path / "a" / name) == read_csv_body(tmp_path / "b" / name)


def test_sweep_empty_axis(tmp_path, capsys):
    cfg = write(tmp_path, SWEEP.format(lam="[]"))
    assert main(["sweep", cfg, "--out", str(tmp_path / "o")]) == 2
    assert "lambda" in capsys.readouterr().err


def test_decay_study(tmp_path):
    cfg = write(tmp_path, MINIMAL.replace("N = 100", "N = 200") + "repeats = 2\n")
    out = tmp_path / "o"
    assert main(["decay-study", cfg, "--out", str(out)]) == 0
    table = rows(out / "decay.csv")
    assert len(table) == 11
    first = table[0]
    assert first["step"] == "0"
    assert float(first["ref_log"]) == 0.05 and float(first["ref_geo"]) == 0.05
    assert float(first["m1"]) == pytest.approx(0.05, abs=0.005)
    assert float(table[5]["ref_log"]) == pytest.approx(0.05 / math.log(5 + math.e))
    hist = rows(out / "decay_histogram.csv")
    assert len(hist) == 11 * 50


def test_decay_study_rejects_baseline(tmp_path):
    cfg = write(tmp_path, MINIMAL + 'cooling = "log"\n')
    assert main(["decay-study", cfg, "--out", str(tmp_path / "o")]) == 2


def test_fmt_round_trip():
    for x in (0.1, 1 / 3, 1e-300, 123456.789, -2.5e-17):
        assert float(fmt(x)) == x
    assert fmt(None) == "" and fmt(float("nan")) == "" and fmt(True) == "true"
