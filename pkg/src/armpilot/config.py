"""Engine configuration file: JSON mirroring the session, IK and sim limits.

Schema (all keys optional; missing keys take the built-in defaults):

    {
      "frame_rate": 35.0,
      "overlap_epsilon": 0.01,
      "ik": { ... IkConfig fields ... },
      "limits": { ... RobotLimits fields ... },
      "chain": "default" | "planar" | "/path/to/chain.json"
    }
"""

from __future__ import annotations

import json
import os

from .ik import IkConfig
from .kinematics import KinematicChain, default_chain, load_chain_file, planar_test_chain
from .session import SessionConfig
from .sim import RobotLimits


def resolve_chain(spec: str | None) -> KinematicChain:
    if spec is None or spec == "default":
        return default_chain()
    if spec == "planar":
        return planar_test_chain()
    if not os.path.exists(spec):
        raise FileNotFoundError(f"chain file not found: {spec}")
    return load_chain_file(spec)


def config_from_dict(doc: dict) -> SessionConfig:
    if not isinstance(doc, dict):
        raise ValueError("config must be a JSON object")
    ik = IkConfig(**doc.get("ik", {}))
    limits = RobotLimits(**doc.get("limits", {}))
    return SessionConfig(
        chain=resolve_chain(doc.get("chain")),
        frame_rate=float(doc.get("frame_rate", 35.0)),
        overlap_epsilon=float(doc.get("overlap_epsilon", 0.01)),
        ik=ik,
        limits=limits,
    )


def load_config(path: str | None) -> SessionConfig:
    """Load a config file; None gives the all-defaults configuration."""
    if path is None:
        return SessionConfig()
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))


def config_to_dict(cfg: SessionConfig, chain_spec: str = "default") -> dict:
    return {
        "frame_rate": cfg.frame_rate,
        "overlap_epsilon": cfg.overlap_epsilon,
        "ik": cfg.ik.to_dict(),
        "limits": cfg.limits.to_dict(),
        "chain": chain_spec,
    }
