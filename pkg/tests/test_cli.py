"""Command line tests: parsing, end-to-end runs, error reporting."""

import pytest

from hedgetrack.bench import SWEEP_SUMMARY_HEADER
from hedgetrack.cli import build_parser, main


def test_bench_defaults():
    args = build_parser().parse_args(["bench", "--sigma-o", "1", "--out", "x"])
    assert args.rho_list == (0.0, 0.01, 0.05, 0.10, 0.15, 0.20)
    assert args.trackers == ("nh", "bayes", "pf")
    assert args.trials == 100
    assert args.seed == 0
    assert args.format == "csv"
    assert args.workers is None


@pytest.mark.parametrize("argv", [
    ["bench", "--out", "x"],                                      # missing sigma
    ["bench", "--sigma-o", "1", "--out", "x", "--seed", "-1"],    # seed below range
    ["bench", "--sigma-o", "1", "--out", "x", "--seed", str(2**64)],
    ["bench", "--sigma-o", "1", "--out", "x", "--rho-list", ","],
    ["bench", "--sigma-o", "1", "--out", "x", "--format", "tsv"],
    ["sweep", "--param", "beta", "--values", "1", "--sigma-o", "1",
     "--rho", "0", "--out", "x"],
    ["teleport"],
])
def test_bad_arguments_exit_2(argv):
    with pytest.raises(SystemExit) as exc:
        build_parser().parse_args(argv)
    assert exc.value.code == 2


def test_bench_end_to_end(tmp_path, capsys):
    out = tmp_path / "runA"
    code = main(["bench", "--sigma-o", "1", "--rho-list", "0",
                 "--trackers", "bayes", "--trials", "2", "--out", str(out)])
    assert code == 0
    assert (out / "trials.csv").exists() and (out / "summary.csv").exists()
    printed = capsys.readouterr().out.splitlines()
    assert len(printed) == 2 and all(line.startswith("wrote ") for line in printed)
    # same seed, fresh directory: byte-identical output
    out2 = tmp_path / "runB"
    assert main(["bench", "--sigma-o", "1", "--rho-list", "0",
                 "--trackers", "bayes", "--trials", "2", "--out", str(out2)]) == 0
    assert (out / "summary.csv").read_bytes() == (out2 / "summary.csv").read_bytes()


def test_bench_rejects_unknown_tracker(tmp_path, capsys):
    code = main(["bench", "--sigma-o", "1", "--trackers", "kalman",
                 "--trials", "1", "--out", str(tmp_path / "o")])
    assert code == 1
    assert capsys.readouterr().err.startswith("error:")


def test_simulate_end_to_end(tmp_path, capsys):
    out = tmp_path / "trace.csv"
    code = main(["simulate", "--sigma-o", "1", "--rho", "0.05",
                 "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 201
    assert lines[0].startswith("t,true_state,nh_estimate")
    assert capsys.readouterr().out == f"wrote {out}\n"


def test_simulate_reports_write_failure(tmp_path, capsys):
    blocked = tmp_path / "dir"
    blocked.mkdir()
    code = main(["simulate", "--sigma-o", "1", "--rho", "0",
                 "--out", str(blocked)])
    assert code == 1
    assert capsys.readouterr().err.startswith("error:")


def test_sweep_end_to_end(tmp_path, capsys):
    out = tmp_path / "sweep"
    code = main(["sweep", "--param", "alpha", "--values", "0.02,0.1",
                 "--sigma-o", "1", "--rho", "0.1", "--trials", "2",
                 "--out", str(out)])
    assert code == 0
    lines = (out / "summary.csv").read_text().splitlines()
    assert lines[0] == ",".join(SWEEP_SUMMARY_HEADER)
    assert len(lines) == 3  # one row per swept value
    assert capsys.readouterr().out.count("wrote ") == 2
