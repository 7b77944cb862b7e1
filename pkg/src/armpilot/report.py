"""Report figures rendered next to the delimited outputs.

All figures go through the Agg backend so rendering works headless; paths of
the written files are returned so callers can list them.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .session import SessionLog


def _save(fig, path: Path) -> Path:
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def session_figures(log: SessionLog, out_prefix) -> list[Path]:
    """Lag/overlap timeline, top-view TCP paths, gripper trace."""
    out_prefix = Path(out_prefix)
    out_prefix.parent.mkdir(parents=True, exist_ok=True)
    t = np.array([f.time for f in log])
    lag = np.array([f.lag_distance for f in log])
    anomaly = np.array([f.anomaly for f in log], dtype=bool)
    overlap = np.array([f.overlap for f in log], dtype=bool)
    grip = np.array([f.physical.gripper_openness for f in log])
    target_mm = np.array([f.target.openness_mm for f in log])
    vpos = np.array([f.target.pose.position for f in log])
    ppos = np.array([f.physical.tcp_pose.position for f in log])
    written = []

    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(9, 6), sharex=True)
    ax1.plot(t, lag * 1000.0, lw=1.2, label="TCP lag")
    if anomaly.any():
        ax1.fill_between(t, 0, (lag * 1000.0).max() or 1.0, where=anomaly,
                         alpha=0.2, color="orange", label="anomaly")
    ax1.set_ylabel("twin lag [mm]")
    ax1.legend(loc="upper right", fontsize=8)
    ax2.plot(t, overlap.astype(int), lw=1.0, drawstyle="steps-post")
    ax2.set_ylabel("overlap")
    ax2.set_xlabel("time [s]")
    ax2.set_yticks([0, 1])
    written.append(_save(fig, out_prefix.with_name(out_prefix.name + "_lag.png")))

    fig, ax = plt.subplots(figsize=(6, 6))
    ax.plot(vpos[:, 0], vpos[:, 1], lw=1.0, label="target")
    ax.plot(ppos[:, 0], ppos[:, 1], lw=1.0, label="physical TCP")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.set_aspect("equal")
    ax.legend(fontsize=8)
    written.append(_save(fig, out_prefix.with_name(out_prefix.name + "_path.png")))

    fig, ax = plt.subplots(figsize=(9, 3))
    ax.plot(t, grip, lw=1.2, label="gripper")
    ax.plot(t, target_mm, lw=0.8, ls="--", label="commanded")
    ax.set_xlabel("time [s]")
    ax.set_ylabel("openness [mm]")
    ax.legend(fontsize=8)
    written.append(_save(fig, out_prefix.with_name(out_prefix.name + "_gripper.png")))
    return written


def bench_figures(report, solve_times_ms, out_prefix) -> list[Path]:
    """Solve-time histogram with the frame budget marked."""
    out_prefix = Path(out_prefix)
    out_prefix.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.hist(solve_times_ms, bins=60)
    ax.axvline(report.budget_ms, color="red", ls="--",
               label=f"frame budget {report.budget_ms:.1f} ms")
    ax.axvline(report.solve_ms_p99, color="black", ls=":",
               label=f"p99 {report.solve_ms_p99:.1f} ms")
    ax.set_xlabel("solve time [ms]")
    ax.set_ylabel("count")
    ax.legend(fontsize=8)
    return [_save(fig, out_prefix.with_name(out_prefix.name + "_solve_times.png"))]


def task_figures(task, report, log: SessionLog, out_prefix) -> list[Path]:
    """Top view: markers, cube start, TCP path."""
    out_prefix = Path(out_prefix)
    out_prefix.parent.mkdir(parents=True, exist_ok=True)
    ppos = np.array([f.physical.tcp_pose.position for f in log])
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.plot(ppos[:, 0], ppos[:, 1], lw=1.0, label="physical TCP")
    for name, p in task.markers.items():
        ax.plot(p[0], p[1], "s", ms=10, mfc="none", mec="red")
        ax.annotate(name, (p[0], p[1]), textcoords="offset points", xytext=(6, 6))
    start = task.cube_start()
    ax.plot(start[0], start[1], "o", ms=8, label="cube start")
    fx, fy = report.final_cube_position[0], report.final_cube_position[1]
    ax.plot(fx, fy, "o", ms=8, mfc="none", label="cube end")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.set_aspect("equal")
    ax.set_title(f"{report.task} {report.start_marker}->{report.end_marker}: "
                 f"{'success' if report.success else 'failure'}")
    ax.legend(fontsize=8)
    return [_save(fig, out_prefix.with_name(out_prefix.name + "_task.png"))]
