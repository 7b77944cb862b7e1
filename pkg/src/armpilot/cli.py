"""Command line: serve the gateway, replay traces, benchmark IK, run cube tasks.

Report-producing commands write their delimited output at --out and render
matplotlib figures alongside it (suppress with --no-figures).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .bench import bench_ik
from .config import load_config
from .server import GatewayServer
from .session import replay
from .tasks import TaskSpec, run_task
from .traces import ingest_trace


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", default=None, help="engine config JSON (defaults built in)")


def cmd_serve(args) -> int:
    config = load_config(args.config)
    server = GatewayServer(config, host=args.host, port=args.port)
    print(f"gateway: {len(config.chain)}-joint chain at {config.frame_rate:.0f} FPS")
    try:
        server.run_forever(announce=True)
    except KeyboardInterrupt:
        pass
    return 0


def cmd_replay(args) -> int:
    config = load_config(args.config)
    if args.seed is not None:
        config = config.with_seed(args.seed)
    trace = ingest_trace(args.trace)
    t0 = time.perf_counter()
    log = replay(config, trace)
    elapsed = time.perf_counter() - t0
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    log.write(out)
    print(f"replayed {len(log)} frames in {elapsed:.2f}s -> {out}")
    if not args.no_figures and len(log):
        from .report import session_figures

        for p in session_figures(log, out.with_suffix("")):
            print(f"figure: {p}")
    return 0


def cmd_bench_ik(args) -> int:
    config = load_config(args.config)
    report = bench_ik(
        config.chain, config.ik, n_targets=args.n, rng_seed=args.seed
    )
    text = json.dumps(report.to_dict(), indent=2)
    print(text)
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text + "\n", encoding="utf-8")
    ok = report.budget_ok and report.pass_rate >= 0.99 and report.unreachable_flag_rate == 1.0
    print(f"budget p99 {report.solve_ms_p99:.2f} ms <= {report.budget_ms:.2f} ms: "
          f"{'PASS' if report.budget_ok else 'FAIL'}; "
          f"round-trip pass rate {report.pass_rate:.3f}: "
          f"{'PASS' if report.pass_rate >= 0.99 else 'FAIL'}")
    return 0 if ok else 1


def cmd_task(args) -> int:
    config = load_config(args.config)
    if args.seed is not None:
        config = config.with_seed(args.seed)
    task = TaskSpec(args.name, args.from_marker, args.to_marker)
    trace = ingest_trace(args.trace)
    t0 = time.perf_counter()
    report, log = run_task(task, trace, config)
    elapsed = time.perf_counter() - t0
    text = json.dumps(report.to_dict(), indent=2)
    print(text)
    print(f"task {'SUCCESS' if report.success else 'FAILURE'} ({report.reason}) "
          f"in {elapsed:.2f}s wall")
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text + "\n", encoding="utf-8")
        if not args.no_figures:
            from .report import task_figures

            for p in task_figures(task, report, log, out.with_suffix("")):
                print(f"figure: {p}")
    return 0 if report.success else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="armpilot",
        description="Embodied arm teleoperation engine: gateway, replay, IK bench, cube tasks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the live teleoperation gateway")
    _add_common(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("replay", help="replay a hand trace into a session log")
    _add_common(p)
    p.add_argument("--trace", required=True, help="trace file (NDJSON)")
    p.add_argument("--out", required=True, help="session log output (NDJSON)")
    p.add_argument("--seed", type=int, default=None, help="override ik rng seed")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("bench-ik", help="round-trip convergence and timing benchmark")
    _add_common(p)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="write the report JSON here")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_bench_ik)

    p = sub.add_parser("task", help="run a scripted cube task against a trace")
    _add_common(p)
    p.add_argument("--name", required=True, choices=["translate", "rotate"])
    p.add_argument("--from", dest="from_marker", required=True, choices=list("ABCD"))
    p.add_argument("--to", dest="to_marker", required=True, choices=list("ABCD"))
    p.add_argument("--trace", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="write the report JSON here")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_task)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
