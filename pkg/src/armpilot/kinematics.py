"""Kinematic chains: serial revolute-joint geometry, FK, limits, reachability.

A chain is an ordered list of revolute joints. The tool frame is obtained by
composing, left to right: base frame, then per joint its fixed origin
transform followed by the rotation about its axis, then the tool offset
(child-after-parent, world-frame base first).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .transforms import (
    UNIT_NORM_TOL,
    axis_angle_matrices,
    quat_angle_between,
    quat_from_axis_angle,
    quat_multiply,
    quat_normalize,
    quat_rotate,
)


class ChainError(ValueError):
    """Base error for chain documents."""


class ChainParseError(ChainError):
    """Document is not well-formed chain-spec JSON."""


class ChainValidationError(ChainError):
    """Document parsed but violates a chain invariant."""


def _frozen_array(values, shape) -> np.ndarray:
    a = np.array(values, dtype=float).reshape(shape)
    if not np.all(np.isfinite(a)):
        raise ValueError(f"non-finite values: {a!r}")
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Pose:
    """Position in meters plus a unit quaternion orientation (w >= 0)."""

    position: np.ndarray
    orientation: np.ndarray

    def __init__(self, position, orientation=(1.0, 0.0, 0.0, 0.0)):
        object.__setattr__(self, "position", _frozen_array(position, (3,)))
        q = quat_normalize(orientation)
        q.setflags(write=False)
        object.__setattr__(self, "orientation", q)

    def transform_point(self, p) -> np.ndarray:
        return self.position + quat_rotate(self.orientation, p)

    def compose(self, other: "Pose") -> "Pose":
        """This pose followed by `other` expressed in this pose's frame."""
        return Pose(
            self.transform_point(other.position),
            quat_multiply(self.orientation, other.orientation),
        )

    def to_dict(self) -> dict:
        return {"t": list(self.position), "q": list(self.orientation)}

    @staticmethod
    def from_dict(d: dict) -> "Pose":
        return Pose(d["t"], d["q"])


IDENTITY_POSE = Pose((0.0, 0.0, 0.0))


@dataclass(frozen=True)
class JointSpec:
    """One revolute joint: fixed origin transform, rotation axis, limits."""

    axis: np.ndarray
    origin_translation: np.ndarray
    origin_rotation: np.ndarray
    limit_lo: float
    limit_hi: float
    max_velocity: float

    def __post_init__(self):
        axis = _frozen_array(self.axis, (3,))
        if abs(np.linalg.norm(axis) - 1.0) >= UNIT_NORM_TOL:
            raise ChainValidationError(f"joint axis must be unit length, got {axis}")
        object.__setattr__(self, "axis", axis)
        object.__setattr__(
            self, "origin_translation", _frozen_array(self.origin_translation, (3,))
        )
        q = quat_normalize(self.origin_rotation)
        q.setflags(write=False)
        object.__setattr__(self, "origin_rotation", q)
        if not self.limit_lo < self.limit_hi:
            raise ChainValidationError(
                f"joint limits must satisfy lo < hi, got [{self.limit_lo}, {self.limit_hi}]"
            )
        if not self.max_velocity > 0:
            raise ChainValidationError("joint max_velocity must be positive")


@dataclass(frozen=True)
class KinematicChain:
    joints: tuple[JointSpec, ...]
    base_frame: Pose = field(default=IDENTITY_POSE)
    tool_offset: Pose = field(default=IDENTITY_POSE)
    reach_radius: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "joints", tuple(self.joints))
        if len(self.joints) < 1:
            raise ChainValidationError("chain needs at least one joint")
        if not self.reach_radius > 0:
            raise ChainValidationError("reach_radius must be positive")

    def __len__(self) -> int:
        return len(self.joints)

    @property
    def limits_lo(self) -> np.ndarray:
        return np.array([j.limit_lo for j in self.joints])

    @property
    def limits_hi(self) -> np.ndarray:
        return np.array([j.limit_hi for j in self.joints])

    @property
    def max_velocities(self) -> np.ndarray:
        return np.array([j.max_velocity for j in self.joints])

    def home_config(self) -> np.ndarray:
        """All-zero configuration, pushed inside limits where zero is excluded."""
        return np.clip(np.zeros(len(self)), self.limits_lo, self.limits_hi)

    def to_dict(self) -> dict:
        return {
            "base": self.base_frame.to_dict(),
            "tool": self.tool_offset.to_dict(),
            "reach_radius_m": self.reach_radius,
            "joints": [
                {
                    "axis": list(j.axis),
                    "origin_t": list(j.origin_translation),
                    "origin_q": list(j.origin_rotation),
                    "limits": [j.limit_lo, j.limit_hi],
                    "max_vel": j.max_velocity,
                }
                for j in self.joints
            ],
        }


def _require(obj: dict, key: str, context: str):
    if not isinstance(obj, dict) or key not in obj:
        raise ChainParseError(f"{context}: missing key {key!r}")
    return obj[key]


def _parse_pose(obj, context: str) -> Pose:
    t = _require(obj, "t", context)
    q = _require(obj, "q", context)
    try:
        return Pose(t, q)
    except (ValueError, TypeError) as e:
        raise ChainParseError(f"{context}: bad pose ({e})") from e


def load_chain(document: str) -> KinematicChain:
    """Parse a chain-spec JSON document into a validated KinematicChain."""
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as e:
        raise ChainParseError(f"chain document is not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise ChainParseError("chain document must be a JSON object")

    base = _parse_pose(_require(doc, "base", "base"), "base")
    tool = _parse_pose(_require(doc, "tool", "tool"), "tool")
    reach = _require(doc, "reach_radius_m", "chain")
    joints_doc = _require(doc, "joints", "chain")
    if not isinstance(joints_doc, list):
        raise ChainParseError("'joints' must be a list")

    joints = []
    for i, jd in enumerate(joints_doc):
        ctx = f"joints[{i}]"
        limits = _require(jd, "limits", ctx)
        if not (isinstance(limits, (list, tuple)) and len(limits) == 2):
            raise ChainParseError(f"{ctx}: limits must be [lo, hi]")
        try:
            joints.append(
                JointSpec(
                    axis=_require(jd, "axis", ctx),
                    origin_translation=_require(jd, "origin_t", ctx),
                    origin_rotation=_require(jd, "origin_q", ctx),
                    limit_lo=float(limits[0]),
                    limit_hi=float(limits[1]),
                    max_velocity=float(_require(jd, "max_vel", ctx)),
                )
            )
        except ChainValidationError:
            raise
        except (ValueError, TypeError) as e:
            raise ChainParseError(f"{ctx}: {e}") from e

    try:
        return KinematicChain(
            joints=tuple(joints),
            base_frame=base,
            tool_offset=tool,
            reach_radius=float(reach),
        )
    except (TypeError,) as e:
        raise ChainParseError(str(e)) from e


def load_chain_file(path) -> KinematicChain:
    with open(path, "r", encoding="utf-8") as f:
        return load_chain(f.read())


def bundled_chain(name: str) -> KinematicChain:
    """Load one of the chain documents shipped with the package."""
    doc = resources.files("armpilot").joinpath(f"data/{name}.json").read_text("utf-8")
    return load_chain(doc)


def default_chain() -> KinematicChain:
    """The 6-DOF runtime chain (0.8865 m reach)."""
    return bundled_chain("default_chain_6dof")


def planar_test_chain() -> KinematicChain:
    """The 2-joint planar chain used for hand-checkable geometry."""
    return bundled_chain("planar_2link")


def as_config(chain: KinematicChain, q) -> np.ndarray:
    """Validate a joint configuration against a chain; returns a float copy."""
    q = np.asarray(q, dtype=float)
    if q.shape != (len(chain),):
        raise ValueError(f"expected {len(chain)} joint angles, got shape {q.shape}")
    if not np.all(np.isfinite(q)):
        raise ValueError(f"joint angles must be finite, got {q!r}")
    return q.copy()


def forward_kinematics(chain: KinematicChain, q) -> Pose:
    """Tool-frame pose for one configuration."""
    q = as_config(chain, q)
    pose = chain.base_frame
    for spec, angle in zip(chain.joints, q):
        origin = Pose(spec.origin_translation, spec.origin_rotation)
        spin = Pose((0.0, 0.0, 0.0), quat_from_axis_angle(spec.axis, angle))
        pose = pose.compose(origin).compose(spin)
    return pose.compose(chain.tool_offset)


def batch_tcp(chain: KinematicChain, Q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized FK for an (N, J) batch of configurations.

    Returns (N, 3) tool positions and (N, 3, 3) tool rotation matrices.
    Matches forward_kinematics to floating-point roundoff; used on the
    solver/simulator hot paths where per-config quaternion FK is too slow.
    """
    Q = np.asarray(Q, dtype=float)
    if Q.ndim != 2 or Q.shape[1] != len(chain):
        raise ValueError(f"expected (N, {len(chain)}) batch, got {Q.shape}")
    n = Q.shape[0]
    from .transforms import quat_to_matrix

    R = np.broadcast_to(quat_to_matrix(chain.base_frame.orientation), (n, 3, 3)).copy()
    t = np.broadcast_to(chain.base_frame.position, (n, 3)).copy()
    for i, spec in enumerate(chain.joints):
        t += np.einsum("nij,j->ni", R, spec.origin_translation)
        R = R @ quat_to_matrix(spec.origin_rotation)
        R = R @ axis_angle_matrices(spec.axis, Q[:, i])
    t += np.einsum("nij,j->ni", R, chain.tool_offset.position)
    R = R @ quat_to_matrix(chain.tool_offset.orientation)
    return t, R


def clamp_to_limits(chain: KinematicChain, q) -> np.ndarray:
    """Clamp each angle into its joint's [lo, hi] interval (idempotent)."""
    q = as_config(chain, q)
    return np.clip(q, chain.limits_lo, chain.limits_hi)


def within_limits(chain: KinematicChain, q, tol: float = 1e-12) -> bool:
    q = as_config(chain, q)
    return bool(
        np.all(q >= chain.limits_lo - tol) and np.all(q <= chain.limits_hi + tol)
    )


def reach_check(chain: KinematicChain, p) -> bool:
    """Coarse necessary condition: point inside the chain's reach sphere.

    Boundary is inclusive; the IK solver gives the final verdict.
    """
    p = np.asarray(p, dtype=float)
    if not np.all(np.isfinite(p)):
        raise ValueError("reach_check needs a finite point")
    return bool(np.linalg.norm(p - chain.base_frame.position) <= chain.reach_radius)


def pose_error(a: Pose, b: Pose) -> tuple[float, float]:
    """(Euclidean position distance, relative rotation angle in [0, pi])."""
    pos = float(np.linalg.norm(a.position - b.position))
    rot = quat_angle_between(a.orientation, b.orientation)
    return pos, rot
