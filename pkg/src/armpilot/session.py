"""The fixed-step perception -> mapping -> IK -> command loop.

Each tick maps the newest hand sample to a gripper target, solves IK seeded
from the zero-delay twin's previous configuration, blends accepted solutions,
streams the blended command into the latency-limited physical simulator, and
reports the discrepancy signals (anomaly, overlap, lag) the operator UI
renders. Reconfiguration events apply between ticks, re-anchored on the
current hand sample and the zero-delay twin's TCP; a frozen mapping holds
the twin and sends no commands.

Sessions are fixed-step even when fed live: one tick per consumed sample,
session time advances by 1/frame_rate per tick, which makes replaying a
recorded trace bit-identical to having streamed it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import mapping as mp
from .ik import IkConfig, Solver, smooth
from .kinematics import KinematicChain, Pose, default_chain, forward_kinematics
from .mapping import GripperTarget, HandSample, MappingState
from .sim import RobotLimits, RobotSim, RobotState


@dataclass(frozen=True)
class SessionConfig:
    chain: KinematicChain = field(default_factory=default_chain)
    frame_rate: float = 35.0
    overlap_epsilon: float = 0.01
    ik: IkConfig = field(default_factory=IkConfig)
    limits: RobotLimits = field(default_factory=RobotLimits)

    def __post_init__(self):
        if self.frame_rate <= 0:
            raise ValueError("frame_rate must be positive")
        if self.overlap_epsilon <= 0:
            raise ValueError("overlap_epsilon must be positive")

    @property
    def dt(self) -> float:
        return 1.0 / self.frame_rate

    def with_seed(self, rng_seed: int) -> "SessionConfig":
        from dataclasses import replace

        return replace(self, ik=replace(self.ik, rng_seed=rng_seed))


@dataclass(frozen=True)
class SessionEvent:
    """A mapping reconfiguration: freeze | unfreeze | scale | flip | rotation_offset."""

    kind: str
    value: object = None

    def payload(self):
        if self.kind in ("freeze", "unfreeze"):
            return self.kind
        if self.kind == "scale":
            return {"scale": float(self.value)}
        if self.kind == "flip":
            return {"flip": self.value}
        if self.kind == "rotation_offset":
            return {"rotation_offset": [float(x) for x in self.value]}
        raise ValueError(f"unknown event kind {self.kind!r}")

    @staticmethod
    def from_payload(payload) -> "SessionEvent":
        if payload == "freeze" or payload == "unfreeze":
            return SessionEvent(payload)
        if isinstance(payload, dict):
            if "scale" in payload:
                return SessionEvent("scale", float(payload["scale"]))
            if "flip" in payload:
                if payload["flip"] not in ("x", "y"):
                    raise ValueError(f"flip axis must be x or y, got {payload['flip']!r}")
                return SessionEvent("flip", payload["flip"])
            if "rotation_offset" in payload:
                return SessionEvent("rotation_offset", list(payload["rotation_offset"]))
        raise ValueError(f"unknown event payload {payload!r}")


@dataclass(frozen=True)
class FrameOutput:
    frame_index: int
    time: float
    hand: HandSample
    target: GripperTarget
    virtual_q: np.ndarray
    physical: RobotState
    anomaly: bool
    overlap: bool
    lag_distance: float
    embodiment_active: bool
    events: tuple = ()
    mapping_frozen: bool = False
    mapping_scale: float = 1.0
    mapping_mirror: tuple[int, int] = (1, 1)


class SessionLog:
    """Append-only frame record sequence with NDJSON serialization."""

    def __init__(self):
        self.frames: list[FrameOutput] = []

    def append(self, frame: FrameOutput) -> None:
        if self.frames and frame.frame_index != self.frames[-1].frame_index + 1:
            raise ValueError("frame indices must increase by one")
        self.frames.append(frame)

    def __len__(self) -> int:
        return len(self.frames)

    def __iter__(self):
        return iter(self.frames)

    def to_ndjson(self) -> str:
        return "".join(json.dumps(frame_record(f), separators=(",", ":")) + "\n"
                       for f in self.frames)

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_ndjson())


def frame_record(f: FrameOutput) -> dict:
    """One session-log line in the fixed schema."""
    hand = f.hand
    return {
        "frame": f.frame_index,
        "t": f.time,
        "hand": {
            "t": hand.timestamp,
            "pos": [float(x) for x in hand.pose.position],
            "q": [float(x) for x in hand.pose.orientation],
            "aperture": hand.aperture,
        },
        "target": {
            "pos": [float(x) for x in f.target.pose.position],
            "q": [float(x) for x in f.target.pose.orientation],
            "openness_mm": f.target.openness_mm,
        },
        "virtual_q": [float(x) for x in f.virtual_q],
        "physical_q": [float(x) for x in f.physical.q],
        "gripper_mm": f.physical.gripper_openness,
        "anomaly": f.anomaly,
        "overlap": f.overlap,
        "lag_m": f.lag_distance,
        "events": [e.payload() for e in f.events],
    }


class Session:
    """One operator's control loop; advance with tick(), reconfigure with apply_event()."""

    def __init__(self, config: SessionConfig | None = None):
        self.config = config if config is not None else SessionConfig()
        self.chain = self.config.chain
        self.solver = Solver(self.chain, self.config.ik)
        self.sim = RobotSim(self.chain, self.config.limits)
        self.virtual_q = self.chain.home_config()
        self._seed_q = self.virtual_q.copy()
        self.mapping: MappingState | None = None
        self.log = SessionLog()
        self.frame_index = 0
        self._last_hand: HandSample | None = None
        self._pending_events: list[SessionEvent] = []
        self._deferred_events: list[SessionEvent] = []

    @property
    def dt(self) -> float:
        return self.config.dt

    def virtual_tcp(self) -> Pose:
        return forward_kinematics(self.chain, self.virtual_q)

    def apply_event(self, event: SessionEvent) -> None:
        """Apply a reconfiguration now, re-anchored on the current hand/twin.

        Events that arrive before the first hand sample are deferred until
        the mapping exists. Invalid transitions raise MappingStateError and
        leave the state unchanged.
        """
        if self.mapping is None:
            self._deferred_events.append(event)
            return
        self._apply_now(event)

    def _apply_now(self, event: SessionEvent) -> None:
        hand = self._last_hand
        gripper = self.virtual_tcp()
        ms = self.mapping
        if event.kind == "freeze":
            self.mapping = mp.freeze(ms)
        elif event.kind == "unfreeze":
            self.mapping = mp.unfreeze(ms, hand, gripper)
        elif event.kind == "scale":
            self.mapping = mp.set_scale(ms, float(event.value), hand, gripper)
        elif event.kind == "flip":
            self.mapping = mp.flip_axis(ms, event.value, hand, gripper)
        elif event.kind == "rotation_offset":
            self.mapping = mp.set_rotation_offset(ms, event.value, hand, gripper)
        else:
            raise ValueError(f"unknown event kind {event.kind!r}")
        self._pending_events.append(event)

    def tick(self, hand: HandSample) -> FrameOutput:
        if self._last_hand is not None and hand.timestamp < self._last_hand.timestamp:
            raise ValueError(
                f"hand timestamps must be non-decreasing "
                f"({hand.timestamp} < {self._last_hand.timestamp})"
            )
        if self.mapping is None:
            self.mapping = mp.new_mapping(hand, self.virtual_tcp())
            self._last_hand = hand
            for ev in self._deferred_events:
                self._apply_now(ev)
            self._deferred_events.clear()
        self._last_hand = hand

        target = mp.map_hand(self.mapping, hand)
        anomaly = False
        if self.mapping.frozen:
            active = False
        else:
            active = True
            solution = self.solver.solve(target.pose, self._seed_q)
            # warm-start the next solve from the raw solution (best effort
            # included): seeding from the smoothed twin would add half a
            # frame of lag, and a held seed could never re-acquire after a
            # target jump
            self._seed_q = solution.q
            if solution.reachable:
                self.virtual_q = smooth(
                    self.virtual_q, solution.q, self.config.ik.smoothing_alpha
                )
                self.sim.enqueue_command(
                    self.virtual_q, target.openness_mm, now=self.frame_index * self.dt
                )
            else:
                anomaly = True  # hold the twin and the last valid command

        physical = self.sim.step(self.dt)

        overlap = bool(
            np.max(np.abs(self.virtual_q - physical.q)) <= self.config.overlap_epsilon
        )
        lag = float(
            np.linalg.norm(self.virtual_tcp().position - physical.tcp_pose.position)
        )
        frame = FrameOutput(
            frame_index=self.frame_index,
            time=self.frame_index * self.dt,
            hand=hand,
            target=target,
            virtual_q=self.virtual_q.copy(),
            physical=physical,
            anomaly=anomaly,
            overlap=overlap,
            lag_distance=lag,
            embodiment_active=active,
            events=tuple(self._pending_events),
            mapping_frozen=self.mapping.frozen,
            mapping_scale=self.mapping.scale,
            mapping_mirror=(self.mapping.mirror_x, self.mapping.mirror_y),
        )
        self._pending_events = []
        self.log.append(frame)
        self.frame_index += 1
        return frame


def replay(config: SessionConfig, trace) -> SessionLog:
    """Feed a recorded trace through a fresh session at fixed dt.

    `trace` is an iterable of trace items (see armpilot.traces): samples
    tick the session, events apply between ticks. Deterministic for a fixed
    ik.rng_seed.
    """
    from .traces import TraceEvent, TraceSample

    session = Session(config)
    for item in trace:
        if isinstance(item, TraceSample):
            session.tick(item.to_hand_sample())
        elif isinstance(item, TraceEvent):
            session.apply_event(item.event)
        else:
            raise TypeError(f"not a trace item: {item!r}")
    return session.log
