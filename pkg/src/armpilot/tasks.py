"""Scripted cube tasks: translate a cube between tabletop markers, or rotate it.

The tabletop carries four square markers (A-D) in a row within reach of the
default chain; the cube is a grasp proxy, not physics: it attaches rigidly to
the physical TCP when the gripper closes below the attach width while the TCP
is within grasp_threshold of the cube center, and detaches (settling onto the
table plane) when the gripper opens past the release width. The hysteresis
gap prevents attach/detach flicker.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .kinematics import reach_check
from .session import Session, SessionConfig
from .traces import TraceEvent, TraceSample
from .transforms import quat_conjugate, quat_multiply, quat_rotate, quat_to_matrix, quat_yaw

TABLE_Z = 0.05
CUBE_SIZE = 0.06

# markers in a row along the table's long axis, 0.25 m apart, within reach
MARKERS = {
    "A": np.array([0.40, -0.375, TABLE_Z]),
    "B": np.array([0.40, -0.125, TABLE_Z]),
    "C": np.array([0.40, 0.125, TABLE_Z]),
    "D": np.array([0.40, 0.375, TABLE_Z]),
}

ATTACH_OPENNESS_MM = 60.0
RELEASE_OPENNESS_MM = 80.0


@dataclass(frozen=True)
class TaskSpec:
    name: str
    start_marker: str
    end_marker: str
    markers: dict = field(default_factory=lambda: {k: v.copy() for k, v in MARKERS.items()})
    cube_size: float = CUBE_SIZE
    grasp_threshold: float = 0.08
    translate_tolerance: float = 0.02
    rotate_target_deg: float = 90.0
    rotate_tolerance_deg: float = 10.0
    rotate_max_translation: float = 0.02

    def __post_init__(self):
        if self.name not in ("translate", "rotate"):
            raise ValueError(f"unknown task {self.name!r}")
        for m in (self.start_marker, self.end_marker):
            if m not in self.markers:
                raise ValueError(f"unknown marker {m!r}")
        if self.start_marker == self.end_marker and self.name == "translate":
            raise ValueError("translate needs distinct start/end markers")

    def cube_start(self) -> np.ndarray:
        if self.name == "rotate":
            base = 0.5 * (self.markers[self.start_marker] + self.markers[self.end_marker])
        else:
            base = self.markers[self.start_marker]
        return base + np.array([0.0, 0.0, self.cube_size / 2.0])


@dataclass
class SimCube:
    """Minimal grasp proxy: a cube that rides the TCP while attached."""

    position: np.ndarray
    yaw: float = 0.0
    attached: bool = False
    _grip_offset: np.ndarray | None = None
    _grip_quat: np.ndarray | None = None
    _grip_yaw: float = 0.0

    def attach(self, tcp_pose) -> None:
        self.attached = True
        R = quat_to_matrix(tcp_pose.orientation)
        self._grip_offset = R.T @ (self.position - tcp_pose.position)
        self._grip_quat = tcp_pose.orientation.copy()
        self._grip_yaw = self.yaw

    def follow(self, tcp_pose) -> None:
        self.position = tcp_pose.position + quat_rotate(
            tcp_pose.orientation, self._grip_offset
        )
        rel = quat_multiply(tcp_pose.orientation, quat_conjugate(self._grip_quat))
        self.yaw = self._grip_yaw + quat_yaw(rel)

    def release(self, rest_z: float) -> None:
        self.attached = False
        self.position = np.array([self.position[0], self.position[1], rest_z])


@dataclass(frozen=True)
class TaskReport:
    task: str
    start_marker: str
    end_marker: str
    success: bool
    reason: str
    grasped: bool
    released: bool
    final_cube_position: tuple
    final_distance_to_end: float
    yaw_delta_deg: float
    anomaly_count: int
    motion_time_s: float
    frames: int
    duration_s: float

    def to_dict(self) -> dict:
        return {
            "task": self.task,
            "start_marker": self.start_marker,
            "end_marker": self.end_marker,
            "success": self.success,
            "reason": self.reason,
            "grasped": self.grasped,
            "released": self.released,
            "final_cube_position": list(self.final_cube_position),
            "final_distance_to_end": self.final_distance_to_end,
            "yaw_delta_deg": self.yaw_delta_deg,
            "anomaly_count": self.anomaly_count,
            "motion_time_s": self.motion_time_s,
            "frames": self.frames,
            "duration_s": self.duration_s,
        }


def run_task(task: TaskSpec, trace, config: SessionConfig | None = None):
    """Replay a trace against a session with a SimCube; judge the outcome.

    Returns (TaskReport, SessionLog).
    """
    config = config if config is not None else SessionConfig()
    for name, p in task.markers.items():
        if not reach_check(config.chain, p):
            raise ValueError(f"marker {name} at {list(p)} is outside reach")

    session = Session(config)
    start = task.cube_start()
    cube = SimCube(position=start.copy())
    rest_z = float(start[2])
    start_yaw = cube.yaw

    grasped = False
    released_after_grasp = False
    anomaly_count = 0
    motion_time = 0.0
    dt = config.dt

    for item in trace:
        if isinstance(item, TraceEvent):
            session.apply_event(item.event)
            continue
        if not isinstance(item, TraceSample):
            raise TypeError(f"not a trace item: {item!r}")
        frame = session.tick(item.to_hand_sample())
        physical = frame.physical
        anomaly_count += frame.anomaly
        if float(np.linalg.norm(physical.joint_velocities, ord=np.inf)) > 1e-6:
            motion_time += dt

        tcp = physical.tcp_pose
        if cube.attached:
            if physical.gripper_openness > RELEASE_OPENNESS_MM:
                cube.release(rest_z)
                released_after_grasp = True
            else:
                cube.follow(tcp)
        else:
            near = float(np.linalg.norm(tcp.position - cube.position)) <= task.grasp_threshold
            if physical.gripper_openness < ATTACH_OPENNESS_MM and near:
                cube.attach(tcp)
                grasped = True

    end = task.markers[task.end_marker]
    dist_end = float(np.linalg.norm(cube.position[:2] - end[:2]))
    dist_start = float(np.linalg.norm(cube.position[:2] - task.cube_start()[:2]))
    yaw_delta = float(np.degrees(abs(cube.yaw - start_yaw)))

    if not grasped:
        success, reason = False, "never grasped"
    elif cube.attached or not released_after_grasp:
        success, reason = False, "never released"
    elif task.name == "translate":
        if dist_end <= task.translate_tolerance:
            success, reason = True, "ok"
        else:
            success, reason = False, f"released {dist_end:.3f} m from end marker"
    else:  # rotate
        lo = task.rotate_target_deg - task.rotate_tolerance_deg
        hi = task.rotate_target_deg + task.rotate_tolerance_deg
        if not lo <= yaw_delta <= hi:
            success, reason = False, f"yaw delta {yaw_delta:.1f} deg outside [{lo}, {hi}]"
        elif dist_start > task.rotate_max_translation:
            success, reason = False, f"cube translated {dist_start:.3f} m"
        else:
            success, reason = True, "ok"

    report = TaskReport(
        task=task.name,
        start_marker=task.start_marker,
        end_marker=task.end_marker,
        success=success,
        reason=reason,
        grasped=grasped,
        released=released_after_grasp,
        final_cube_position=tuple(float(x) for x in cube.position),
        final_distance_to_end=dist_end,
        yaw_delta_deg=yaw_delta,
        anomaly_count=int(anomaly_count),
        motion_time_s=round(motion_time, 9),
        frames=len(session.log),
        duration_s=round(len(session.log) * dt, 9),
    )
    return report, session.log
