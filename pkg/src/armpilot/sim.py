"""Digital twin of the physical arm: latency, velocity and acceleration caps.

The follower moves along the joint-space straight line toward the active
command. Progress along the line is driven by a trapezoidal speed profile on
the TCP arc length, tabulated once per command by finite-differencing FK
along the path. The profile is kept in closed form and sampled at the
accumulated path time each step, so speed/acceleration caps hold exactly and
arrival lands within one tick of the analytic profile time.

The cruise speed is the smaller of the Cartesian line-velocity limit and the
per-joint ceiling mapped through the worst path segment: with
u <= (min_segment_chord / ds) * min_j(vel_j / |dq_j|) every joint stays legal
on every segment, because ds/d(arc) <= 1 / min_chord_rate pointwise.

Commands pass through a FIFO that releases each entry command_latency
seconds after enqueue; of all released commands the newest wins and
retargets the profile from the follower's current state. A retarget carries
over the component of the current TCP velocity along the new path (clamped
to [0, brakeable]), so a direction reversal brakes instantly in this
kinematic model; within a single command the caps hold throughout.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from .kinematics import (
    KinematicChain,
    Pose,
    as_config,
    batch_tcp,
    forward_kinematics,
    within_limits,
)
from .mapping import MAX_OPENNESS_MM

_PATH_SAMPLES = 128
_ZERO_PATH = 1e-9


@dataclass(frozen=True)
class RobotLimits:
    max_line_velocity: float = 2.0
    max_line_acceleration: float = 0.2
    gripper_speed: float = 100.0
    command_latency: float = 0.15

    def __post_init__(self):
        if self.max_line_velocity <= 0 or self.max_line_acceleration <= 0:
            raise ValueError("line velocity/acceleration limits must be positive")
        if self.gripper_speed <= 0:
            raise ValueError("gripper_speed must be positive")
        # latency 0 is a valid test configuration, negative is not
        if self.command_latency < 0:
            raise ValueError("command_latency must be >= 0")

    def to_dict(self) -> dict:
        return {
            "max_line_velocity": self.max_line_velocity,
            "max_line_acceleration": self.max_line_acceleration,
            "gripper_speed": self.gripper_speed,
            "command_latency": self.command_latency,
        }

    @staticmethod
    def from_dict(d: dict) -> "RobotLimits":
        return RobotLimits(**d)


@dataclass(frozen=True)
class RobotState:
    q: np.ndarray
    joint_velocities: np.ndarray
    gripper_openness: float
    tcp_pose: Pose
    time: float


class _JointLinePath:
    """Straight joint-space segment with a tabulated TCP arc length.

    The arc -> path-parameter map uses a monotone C1 interpolant; a
    piecewise-linear map has rate jumps at the table knots that show up as
    spurious finite-difference TCP acceleration.
    """

    def __init__(self, chain: KinematicChain, q0: np.ndarray, q1: np.ndarray):
        self.q0 = q0
        self.q1 = q1
        self.dq = q1 - q0
        s_grid = np.linspace(0.0, 1.0, _PATH_SAMPLES + 1)
        pts, _ = batch_tcp(chain, q0 + s_grid[:, None] * self.dq)
        chords = np.linalg.norm(np.diff(pts, axis=0), axis=1)
        self.s_grid = s_grid
        self.arc_grid = np.concatenate(([0.0], np.cumsum(chords)))
        self.length = float(self.arc_grid[-1])
        self.start_tangent = np.zeros(3)
        for k in range(len(chords)):
            if chords[k] > _ZERO_PATH:
                self.start_tangent = (pts[k + 1] - pts[k]) / chords[k]
                break
        # max path-parameter rate allowed by per-joint velocity limits
        with np.errstate(divide="ignore"):
            rates = np.where(
                np.abs(self.dq) > 0.0, chain.max_velocities / np.abs(self.dq), np.inf
            )
        self.s_rate_cap = float(np.min(rates))
        self._s_of_arc = None
        if self.length > _ZERO_PATH:
            ds = 1.0 / _PATH_SAMPLES
            self.arc_speed_cap = float(np.min(chords)) / ds * self.s_rate_cap
            keep = np.concatenate(([True], np.diff(self.arc_grid) > _ZERO_PATH * ds))
            if keep.sum() >= 2:
                self._s_of_arc = PchipInterpolator(
                    self.arc_grid[keep], self.s_grid[keep], extrapolate=False
                )
        else:
            self.arc_speed_cap = np.inf

    def config_at_arc(self, arc: float) -> np.ndarray:
        if arc >= self.length:
            return self.q1
        if self._s_of_arc is not None:
            s = float(self._s_of_arc(arc))
        else:
            s = float(np.interp(arc, self.arc_grid, self.s_grid))
        return self.q0 + min(max(s, 0.0), 1.0) * self.dq


class _ArcProfile:
    """Closed-form trapezoidal/triangular speed profile over an arc length."""

    def __init__(self, distance: float, v_init: float, v_max: float, accel: float):
        a = accel
        d = distance
        u0 = min(max(v_init, 0.0), v_max, np.sqrt(2.0 * a * d) if d > 0 else 0.0)
        v_cruise = min(v_max, np.sqrt(a * d + 0.5 * u0 * u0))
        self.a = a
        self.d = d
        self.u0 = u0
        self.v_cruise = v_cruise
        self.t_acc = (v_cruise - u0) / a
        d_acc = (v_cruise * v_cruise - u0 * u0) / (2.0 * a)
        d_dec = v_cruise * v_cruise / (2.0 * a)
        self.t_cruise = max(0.0, (d - d_acc - d_dec) / v_cruise) if v_cruise > 0 else 0.0
        self.t_dec = v_cruise / a
        self.total_time = self.t_acc + self.t_cruise + self.t_dec
        self._d_acc = d_acc

    def arc_at(self, t: float) -> float:
        if t <= 0.0:
            return 0.0
        if t >= self.total_time:
            return self.d
        if t < self.t_acc:
            return self.u0 * t + 0.5 * self.a * t * t
        if t < self.t_acc + self.t_cruise:
            return self._d_acc + self.v_cruise * (t - self.t_acc)
        tail = self.total_time - t
        return self.d - 0.5 * self.a * tail * tail

    def speed_at(self, t: float) -> float:
        if t <= 0.0:
            return self.u0
        if t >= self.total_time:
            return 0.0
        if t < self.t_acc:
            return self.u0 + self.a * t
        if t < self.t_acc + self.t_cruise:
            return self.v_cruise
        return self.a * (self.total_time - t)


class RobotSim:
    """Single-owner simulator; step() advances, sample() only observes."""

    def __init__(
        self,
        chain: KinematicChain,
        limits: RobotLimits | None = None,
        home: np.ndarray | None = None,
    ):
        self.chain = chain
        self.limits = limits if limits is not None else RobotLimits()
        q = chain.home_config() if home is None else as_config(chain, home)
        if not within_limits(chain, q):
            raise ValueError("home configuration violates joint limits")
        self._q = q
        self._qdot = np.zeros(len(chain))
        self._gripper = 0.0
        self._gripper_cmd = 0.0
        self._time = 0.0
        self._tcp = forward_kinematics(chain, q)
        self._tcp_velocity = np.zeros(3)
        self._queue: deque[tuple[float, np.ndarray, float]] = deque()
        self._goal_q: np.ndarray | None = None
        self._path: _JointLinePath | None = None
        self._profile: _ArcProfile | None = None
        self._path_time = 0.0
        self._progress = 0.0

    def enqueue_command(self, q, openness_mm: float, now: float) -> None:
        """Queue a joint command; visible to the follower after the latency."""
        q = as_config(self.chain, q)
        if not within_limits(self.chain, q, tol=1e-9):
            raise ValueError("command outside joint limits rejected")
        if not 0.0 <= openness_mm <= MAX_OPENNESS_MM:
            raise ValueError(f"openness {openness_mm} outside [0, {MAX_OPENNESS_MM}]")
        release = float(now) + self.limits.command_latency
        if self._queue and release < self._queue[-1][0]:
            raise ValueError("command release times must be non-decreasing")
        self._queue.append((release, q, float(openness_mm)))

    def _activate(self, cmd_q: np.ndarray, openness: float) -> None:
        self._gripper_cmd = openness
        if self._goal_q is not None and np.array_equal(cmd_q, self._goal_q):
            return
        self._goal_q = cmd_q
        path = _JointLinePath(self.chain, self._q.copy(), cmd_q)
        self._path = path
        self._path_time = 0.0
        self._progress = 0.0
        if path.length > _ZERO_PATH:
            carry = max(0.0, float(np.dot(self._tcp_velocity, path.start_tangent)))
            self._profile = _ArcProfile(
                distance=path.length,
                v_init=min(carry, path.arc_speed_cap),
                v_max=min(self.limits.max_line_velocity, path.arc_speed_cap),
                accel=self.limits.max_line_acceleration,
            )
        else:
            self._profile = None

    def step(self, dt: float) -> RobotState:
        """Advance the follower by dt seconds."""
        if not 0.0 < dt <= 0.1:
            raise ValueError("dt must lie in (0, 0.1] seconds")
        now = self._time

        newest = None
        while self._queue and self._queue[0][0] <= now:
            newest = self._queue.popleft()
        if newest is not None:
            self._activate(newest[1], newest[2])

        q_prev = self._q
        if self._path is not None:
            path = self._path
            self._path_time += dt
            if self._profile is None:
                # TCP barely moves: slew the path parameter at the joint cap
                rate = path.s_rate_cap if np.isfinite(path.s_rate_cap) else 1.0 / dt
                self._progress = min(1.0, self._progress + rate * dt)
                self._q = path.q0 + self._progress * path.dq
                if self._progress >= 1.0:
                    self._q = path.q1
                    self._finish_path()
            else:
                arc = self._profile.arc_at(self._path_time)
                self._q = path.config_at_arc(arc)
                if self._path_time >= self._profile.total_time:
                    self._q = path.q1
                    self._finish_path()

        self._qdot = (self._q - q_prev) / dt

        delta = self._gripper_cmd - self._gripper
        max_step = self.limits.gripper_speed * dt
        self._gripper += float(np.clip(delta, -max_step, max_step))

        self._time = now + dt
        tcp_prev = self._tcp.position
        self._tcp = forward_kinematics(self.chain, self._q)
        self._tcp_velocity = (self._tcp.position - tcp_prev) / dt
        return self.sample()

    def _finish_path(self) -> None:
        self._path = None
        self._profile = None
        self._path_time = 0.0
        self._progress = 0.0

    def sample(self) -> RobotState:
        """Immutable snapshot of the current state; never advances time."""
        q = self._q.copy()
        q.setflags(write=False)
        qd = self._qdot.copy()
        qd.setflags(write=False)
        return RobotState(
            q=q,
            joint_velocities=qd,
            gripper_openness=self._gripper,
            tcp_pose=self._tcp,
            time=self._time,
        )
