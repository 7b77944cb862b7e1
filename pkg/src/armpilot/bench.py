"""Round-trip IK benchmark: convergence pass rate and frame-budget timing.

Reachable targets are sampled as FK images of random in-limit configurations;
the solver is warm-started across frames (seed = q* + N(0, 0.1) clamped, then
each frame reuses the previous best). A target passes when residuals drop to
1 mm / 0.5 deg within the frame cap. A second phase samples points outside
the reach sphere and checks that every one is flagged unreachable.

Timing fields are wall-clock and vary run to run; everything else (the
deterministic core) is a pure function of the rng seed.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .ik import IkConfig, Solver
from .kinematics import KinematicChain, Pose, forward_kinematics

FRAME_BUDGET_MS = 1000.0 / 35.0
SEED_NOISE_SIGMA = 0.1


@dataclass(frozen=True)
class BenchReport:
    n_targets: int
    frames_cap: int
    converged: int
    pass_rate: float
    median_frames: float
    max_frames: int
    n_unreachable: int
    unreachable_flagged: int
    unreachable_flag_rate: float
    solve_calls: int
    solve_ms_median: float
    solve_ms_p99: float
    budget_ms: float
    budget_ok: bool
    rng_seed: int

    def deterministic_core(self) -> dict:
        return {
            "n_targets": self.n_targets,
            "frames_cap": self.frames_cap,
            "converged": self.converged,
            "pass_rate": self.pass_rate,
            "median_frames": self.median_frames,
            "max_frames": self.max_frames,
            "n_unreachable": self.n_unreachable,
            "unreachable_flagged": self.unreachable_flagged,
            "unreachable_flag_rate": self.unreachable_flag_rate,
            "solve_calls": self.solve_calls,
            "rng_seed": self.rng_seed,
        }

    def to_dict(self) -> dict:
        d = self.deterministic_core()
        d.update(
            {
                "solve_ms_median": self.solve_ms_median,
                "solve_ms_p99": self.solve_ms_p99,
                "budget_ms": self.budget_ms,
                "budget_ok": self.budget_ok,
            }
        )
        return d


def bench_ik(
    chain: KinematicChain,
    cfg: IkConfig | None = None,
    n_targets: int = 1000,
    rng_seed: int = 0,
    frames_cap: int = 60,
    n_unreachable: int | None = None,
) -> BenchReport:
    if n_targets < 1:
        raise ValueError("n_targets must be >= 1")
    base_cfg = cfg if cfg is not None else IkConfig()
    from dataclasses import replace

    cfg = replace(base_cfg, rng_seed=rng_seed)
    solver = Solver(chain, cfg)
    rng = np.random.default_rng(rng_seed)
    lo, hi = chain.limits_lo, chain.limits_hi

    q_stars = rng.uniform(lo, hi, (n_targets, len(chain)))
    noise = rng.normal(0.0, SEED_NOISE_SIGMA, q_stars.shape)

    converged = 0
    frames_used = []
    times = []
    for i in range(n_targets):
        target = forward_kinematics(chain, q_stars[i])
        seed = np.clip(q_stars[i] + noise[i], lo, hi)
        for frame in range(frames_cap):
            t0 = time.perf_counter()
            sol = solver.solve(target, seed)
            times.append(time.perf_counter() - t0)
            seed = sol.q
            if sol.reachable:
                converged += 1
                frames_used.append(frame + 1)
                break

    if n_unreachable is None:
        n_unreachable = max(50, n_targets // 10)
    flagged = 0
    base = chain.base_frame.position
    for _ in range(n_unreachable):
        direction = rng.normal(size=3)
        direction /= np.linalg.norm(direction)
        p = base + direction * chain.reach_radius * rng.uniform(1.05, 1.7)
        t0 = time.perf_counter()
        sol = solver.solve(Pose(p), chain.home_config())
        times.append(time.perf_counter() - t0)
        flagged += not sol.reachable

    times_ms = np.asarray(times) * 1000.0
    p99 = float(np.percentile(times_ms, 99))
    return BenchReport(
        n_targets=n_targets,
        frames_cap=frames_cap,
        converged=converged,
        pass_rate=converged / n_targets,
        median_frames=float(np.median(frames_used)) if frames_used else float("nan"),
        max_frames=max(frames_used) if frames_used else 0,
        n_unreachable=n_unreachable,
        unreachable_flagged=flagged,
        unreachable_flag_rate=flagged / n_unreachable if n_unreachable else 1.0,
        solve_calls=len(times),
        solve_ms_median=float(np.median(times_ms)),
        solve_ms_p99=p99,
        budget_ms=FRAME_BUDGET_MS,
        budget_ok=bool(p99 <= FRAME_BUDGET_MS),
        rng_seed=rng_seed,
    )
