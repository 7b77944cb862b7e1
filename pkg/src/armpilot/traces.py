"""Hand-trace files: newline-delimited JSON, one sample or event per line.

Sample lines:  {"t": s, "pos": [x,y,z], "q": [w,x,y,z], "aperture": a}
Event lines:   {"t": s, "event": "freeze" | "unfreeze" | {"scale": s}
                                | {"flip": "x"|"y"} | {"rotation_offset": [w,x,y,z]}}

Timestamps must be non-decreasing across the whole file. Validation errors
cite 1-based line numbers. An empty file is an empty trace.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .kinematics import Pose
from .mapping import HandSample
from .session import SessionEvent


class TraceError(ValueError):
    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


@dataclass(frozen=True)
class TraceSample:
    t: float
    pos: tuple
    quat: tuple
    aperture: float

    def to_hand_sample(self) -> HandSample:
        return HandSample(
            pose=Pose(self.pos, self.quat), aperture=self.aperture, timestamp=self.t
        )

    def to_line(self) -> dict:
        return {
            "t": self.t,
            "pos": [float(x) for x in self.pos],
            "q": [float(x) for x in self.quat],
            "aperture": float(self.aperture),
        }


@dataclass(frozen=True)
class TraceEvent:
    t: float
    event: SessionEvent

    def to_line(self) -> dict:
        return {"t": self.t, "event": self.event.payload()}


def parse_trace(text: str, source: str = "<trace>") -> list:
    items = []
    last_t = None
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as e:
            raise TraceError(n, f"not valid JSON: {e}") from e
        if not isinstance(obj, dict) or "t" not in obj:
            raise TraceError(n, "each line needs a 't' timestamp")
        try:
            t = float(obj["t"])
        except (TypeError, ValueError) as e:
            raise TraceError(n, f"bad timestamp: {obj['t']!r}") from e
        if last_t is not None and t < last_t:
            raise TraceError(n, f"timestamp regression: {t} after {last_t}")
        last_t = t
        try:
            if "event" in obj:
                items.append(TraceEvent(t, SessionEvent.from_payload(obj["event"])))
            elif {"pos", "q", "aperture"} <= obj.keys():
                items.append(
                    TraceSample(
                        t=t,
                        pos=tuple(float(x) for x in obj["pos"]),
                        quat=tuple(float(x) for x in obj["q"]),
                        aperture=float(obj["aperture"]),
                    )
                )
            else:
                raise ValueError("line is neither a sample nor an event")
        except TraceError:
            raise
        except (TypeError, ValueError) as e:
            raise TraceError(n, str(e)) from e
    return items


def ingest_trace(path) -> list:
    """Load and validate a trace file."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_trace(fh.read(), source=str(path))


def write_trace(path, items) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for item in items:
            fh.write(json.dumps(item.to_line(), separators=(",", ":")) + "\n")


def bundled_trace_path(name: str):
    from importlib import resources

    return resources.files("armpilot").joinpath(f"data/traces/{name}.jsonl")


def bundled_trace(name: str) -> list:
    return parse_trace(bundled_trace_path(name).read_text("utf-8"))
