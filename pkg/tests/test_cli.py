import json

import pytest

from armpilot.cli import build_parser, main
from armpilot.traces import bundled_trace_path


def test_parser_covers_spec_commands():
    parser = build_parser()
    args = parser.parse_args(["serve", "--config", "x.json", "--port", "9000"])
    assert args.command == "serve" and args.port == 9000
    args = parser.parse_args(["replay", "--trace", "a", "--out", "b", "--seed", "3"])
    assert args.seed == 3
    args = parser.parse_args(["bench-ik", "--n", "10", "--seed", "4"])
    assert args.n == 10
    args = parser.parse_args(
        ["task", "--name", "translate", "--from", "B", "--to", "C", "--trace", "t"]
    )
    assert args.from_marker == "B" and args.to_marker == "C"


def test_replay_writes_log_and_figures(tmp_path):
    out = tmp_path / "runs" / "demo.jsonl"
    rc = main([
        "replay", "--trace", str(bundled_trace_path("mapping_demo")),
        "--out", str(out), "--seed", "0",
    ])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 270
    rec = json.loads(lines[0])
    assert rec["frame"] == 0
    figures = sorted(p.name for p in out.parent.glob("*.png"))
    assert figures == ["demo_gripper.png", "demo_lag.png", "demo_path.png"]


def test_replay_no_figures_flag(tmp_path):
    out = tmp_path / "demo.jsonl"
    rc = main([
        "replay", "--trace", str(bundled_trace_path("mapping_demo")),
        "--out", str(out), "--no-figures",
    ])
    assert rc == 0
    assert list(out.parent.glob("*.png")) == []


def test_replay_seed_changes_nothing_structural(tmp_path):
    out1 = tmp_path / "a.jsonl"
    out2 = tmp_path / "b.jsonl"
    for out, seed in ((out1, "7"), (out2, "7")):
        main(["replay", "--trace", str(bundled_trace_path("mapping_demo")),
              "--out", str(out), "--seed", seed, "--no-figures"])
    assert out1.read_bytes() == out2.read_bytes()


def test_bench_ik_cli(tmp_path, capsys):
    out = tmp_path / "bench.json"
    rc = main(["bench-ik", "--n", "25", "--seed", "0", "--out", str(out)])
    assert rc == 0
    report = json.loads(out.read_text())
    assert report["n_targets"] == 25
    assert report["budget_ok"] is True
    shown = capsys.readouterr().out
    assert "round-trip pass rate" in shown


def test_task_cli(tmp_path):
    out = tmp_path / "task.json"
    rc = main([
        "task", "--name", "translate", "--from", "B", "--to", "C",
        "--trace", str(bundled_trace_path("translate_b_to_c")),
        "--out", str(out),
    ])
    assert rc == 0
    report = json.loads(out.read_text())
    assert report["success"] is True
    assert (tmp_path / "task_task.png").exists()


def test_task_cli_failure_exit_code(tmp_path):
    rc = main([
        "task", "--name", "rotate", "--from", "B", "--to", "C",
        "--trace", str(bundled_trace_path("translate_b_to_c")),
    ])
    assert rc == 1
