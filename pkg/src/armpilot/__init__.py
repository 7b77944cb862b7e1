"""Embodied robot-arm teleoperation engine.

Hand-pose retargeting through an adjustable spatial mapping into an
evolutionary IK solver, driving a zero-delay virtual twin and a
latency/velocity-limited physical-robot simulator, with a WebSocket gateway
for live operation and deterministic trace replay.
"""

__version__ = "0.1.0"

from .ik import IkConfig, IkSolution, Solver, fitness, smooth, solve
from .kinematics import (
    KinematicChain,
    JointSpec,
    Pose,
    clamp_to_limits,
    default_chain,
    forward_kinematics,
    load_chain,
    load_chain_file,
    planar_test_chain,
    pose_error,
    reach_check,
)
from .mapping import (
    GripperTarget,
    HandSample,
    MappingState,
    flip_axis,
    freeze,
    map_hand,
    map_openness,
    new_mapping,
    set_scale,
    unfreeze,
)
from .session import FrameOutput, Session, SessionConfig, SessionEvent, SessionLog, replay
from .sim import RobotLimits, RobotSim, RobotState

__all__ = [
    "IkConfig", "IkSolution", "Solver", "fitness", "smooth", "solve",
    "KinematicChain", "JointSpec", "Pose", "clamp_to_limits", "default_chain",
    "forward_kinematics", "load_chain", "load_chain_file", "planar_test_chain",
    "pose_error", "reach_check",
    "GripperTarget", "HandSample", "MappingState", "flip_axis", "freeze",
    "map_hand", "map_openness", "new_mapping", "set_scale", "unfreeze",
    "FrameOutput", "Session", "SessionConfig", "SessionEvent", "SessionLog", "replay",
    "RobotLimits", "RobotSim", "RobotState",
]
