"""Adjustable spatial mapping between hand samples and gripper targets.

The mapping is anchored: a hand anchor pose and a gripper anchor pose.
Hand displacement from its anchor, scaled per axis by scale*diag(mx, my, 1),
lands on the gripper anchor; relative hand rotation composes onto the
gripper anchor orientation through a fixed rotation offset. Every
reconfiguration (unfreeze, set_scale, flip_axis, set_rotation_offset)
re-anchors on the current hand and gripper poses, so the mapped target is
continuous across the switch.

All states are immutable; operations return new states.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .kinematics import Pose
from .transforms import quat_conjugate, quat_multiply, quat_normalize

MAX_OPENNESS_MM = 145.0
SCALE_MIN = 0.5
SCALE_MAX = 2.0


class MappingStateError(RuntimeError):
    """Operation invalid for the mapping's current state."""


@dataclass(frozen=True)
class HandSample:
    """Wrist pose in the world frame plus normalized hand openness."""

    pose: Pose
    aperture: float
    timestamp: float

    def __post_init__(self):
        if not np.isfinite(self.aperture):
            raise ValueError("aperture must be finite")
        object.__setattr__(self, "aperture", float(min(max(self.aperture, 0.0), 1.0)))
        object.__setattr__(self, "timestamp", float(self.timestamp))


@dataclass(frozen=True)
class GripperTarget:
    pose: Pose
    openness_mm: float

    def __post_init__(self):
        if not 0.0 <= self.openness_mm <= MAX_OPENNESS_MM:
            raise ValueError(f"openness {self.openness_mm} outside [0, {MAX_OPENNESS_MM}]")


@dataclass(frozen=True)
class MappingState:
    frozen: bool
    hand_anchor: Pose
    gripper_anchor: Pose
    scale: float
    mirror_x: int
    mirror_y: int
    rotation_offset: np.ndarray
    anchor_aperture: float

    def __post_init__(self):
        if not SCALE_MIN <= self.scale <= SCALE_MAX:
            raise ValueError(f"scale {self.scale} outside [{SCALE_MIN}, {SCALE_MAX}]")
        if self.mirror_x not in (-1, 1) or self.mirror_y not in (-1, 1):
            raise ValueError("mirror signs must be exactly +1 or -1")
        q = quat_normalize(self.rotation_offset)
        q.setflags(write=False)
        object.__setattr__(self, "rotation_offset", q)


def map_openness(aperture: float) -> float:
    """Linear retargeting of [0, 1] hand openness to gripper millimeters."""
    if not np.isfinite(aperture):
        raise ValueError("aperture must be finite")
    return float(min(max(aperture, 0.0), 1.0)) * MAX_OPENNESS_MM


def new_mapping(hand: HandSample, gripper_pose: Pose) -> MappingState:
    """Anchor a fresh, active, identity-configured mapping."""
    return MappingState(
        frozen=False,
        hand_anchor=hand.pose,
        gripper_anchor=gripper_pose,
        scale=1.0,
        mirror_x=1,
        mirror_y=1,
        rotation_offset=np.array([1.0, 0.0, 0.0, 0.0]),
        anchor_aperture=hand.aperture,
    )


def map_hand(ms: MappingState, hand: HandSample) -> GripperTarget:
    """Map one hand sample to a gripper target.

    While frozen the output is the anchor target itself, independent of the
    input: pose and openness are both paused.
    """
    if ms.frozen:
        return GripperTarget(
            pose=Pose(ms.gripper_anchor.position,
                      quat_multiply(ms.rotation_offset, ms.gripper_anchor.orientation)),
            openness_mm=map_openness(ms.anchor_aperture),
        )
    delta = hand.pose.position - ms.hand_anchor.position
    offset = ms.scale * np.array([ms.mirror_x * delta[0], ms.mirror_y * delta[1], delta[2]])
    relative = quat_multiply(
        hand.pose.orientation, quat_conjugate(ms.hand_anchor.orientation)
    )
    orientation = quat_multiply(
        ms.rotation_offset, quat_multiply(relative, ms.gripper_anchor.orientation)
    )
    return GripperTarget(
        pose=Pose(ms.gripper_anchor.position + offset, orientation),
        openness_mm=map_openness(hand.aperture),
    )


def freeze(ms: MappingState) -> MappingState:
    """Pause the mapping; anchors and configuration unchanged. Idempotent."""
    return replace(ms, frozen=True)


def _reanchor(ms: MappingState, hand: HandSample, gripper: Pose, **changes) -> MappingState:
    # The stored gripper anchor folds the inverse rotation offset so that
    # mapping the re-anchor hand sample reproduces `gripper` exactly.
    offset = changes.get("rotation_offset", ms.rotation_offset)
    anchored = Pose(
        gripper.position,
        quat_multiply(quat_conjugate(quat_normalize(offset)), gripper.orientation),
    )
    return replace(
        ms,
        hand_anchor=hand.pose,
        gripper_anchor=anchored,
        anchor_aperture=hand.aperture,
        **changes,
    )


def unfreeze(ms: MappingState, current_hand: HandSample, current_gripper: Pose) -> MappingState:
    """Resume after a freeze, re-anchoring on the current hand/gripper poses."""
    if not ms.frozen:
        raise MappingStateError("unfreeze called on an active mapping")
    return _reanchor(ms, current_hand, current_gripper, frozen=False)


def set_scale(
    ms: MappingState, s: float, current_hand: HandSample, current_gripper: Pose
) -> MappingState:
    """Clamp s into [0.5, 2.0] and re-anchor so the target does not jump."""
    if not np.isfinite(s):
        raise ValueError("scale must be finite")
    s = float(min(max(s, SCALE_MIN), SCALE_MAX))
    return _reanchor(ms, current_hand, current_gripper, scale=s)


def flip_axis(
    ms: MappingState, axis: str, current_hand: HandSample, current_gripper: Pose
) -> MappingState:
    """Negate the mirror sign of the x or y axis, re-anchoring like set_scale."""
    if axis == "x":
        return _reanchor(ms, current_hand, current_gripper, mirror_x=-ms.mirror_x)
    if axis == "y":
        return _reanchor(ms, current_hand, current_gripper, mirror_y=-ms.mirror_y)
    raise ValueError(f"only the x and y arrows exist, got {axis!r}")


def set_rotation_offset(
    ms: MappingState, quat, current_hand: HandSample, current_gripper: Pose
) -> MappingState:
    """Replace the comfort rotation offset, re-anchoring on the current poses."""
    q = quat_normalize(quat)
    return _reanchor(ms, current_hand, current_gripper, rotation_offset=q)


def comfort_offset(angle_rad: float = np.deg2rad(20.0), axis=(0.0, 1.0, 0.0)) -> np.ndarray:
    """The ~20 degree wrist-relief preset as a quaternion."""
    from .transforms import quat_from_axis_angle

    return quat_from_axis_angle(axis, angle_rad)
