#!/usr/bin/env python3
"""Regenerate the bundled hand traces.

Traces are authored in hand space against the default chain's ready pose:
the session anchors the first sample onto the home TCP, so a hand
displacement of d moves the gripper target by d (scale 1). Waypoint glides
use smoothstep easing; dwells give the latency/acceleration-limited physical
twin time to catch up before gripper transitions.

Usage: python scripts/make_traces.py [outdir]
"""

import sys
from pathlib import Path

import numpy as np

from armpilot.kinematics import default_chain, forward_kinematics
from armpilot.session import SessionEvent
from armpilot.tasks import MARKERS, TaskSpec
from armpilot.traces import TraceEvent, TraceSample, write_trace

FPS = 35.0
HAND_ANCHOR = np.array([0.0, -0.6, 0.35])
IDENTITY = (1.0, 0.0, 0.0, 0.0)


def z_quat(theta: float) -> tuple:
    return (float(np.cos(theta / 2)), 0.0, 0.0, float(np.sin(theta / 2)))


def smoothstep(x: np.ndarray) -> np.ndarray:
    return x * x * (3.0 - 2.0 * x)


class HandScript:
    def __init__(self):
        self.items = []
        self.k = 0
        self.pos = HAND_ANCHOR.copy()
        self.yaw = 0.0
        self.aperture = 1.0

    def _emit(self, pos, yaw, aperture):
        t = self.k / FPS
        self.items.append(
            TraceSample(t=t, pos=tuple(float(x) for x in pos), quat=z_quat(yaw),
                        aperture=float(aperture))
        )
        self.k += 1

    def dwell(self, seconds: float):
        for _ in range(int(round(seconds * FPS))):
            self._emit(self.pos, self.yaw, self.aperture)

    def glide(self, to_pos=None, to_yaw=None, to_aperture=None, seconds=1.0):
        n = max(1, int(round(seconds * FPS)))
        p0, p1 = self.pos.copy(), self.pos.copy() if to_pos is None else np.asarray(to_pos, float)
        y0, y1 = self.yaw, self.yaw if to_yaw is None else float(to_yaw)
        a0, a1 = self.aperture, self.aperture if to_aperture is None else float(to_aperture)
        for i in range(1, n + 1):
            s = smoothstep(np.array(i / n))
            self._emit(p0 + s * (p1 - p0), y0 + s * (y1 - y0), a0 + s * (a1 - a0))
        self.pos, self.yaw, self.aperture = p1, y1, a1

    def event(self, ev: SessionEvent):
        self.items.append(TraceEvent(t=self.k / FPS, event=ev))


def hand_for_gripper(target: np.ndarray, home_tcp: np.ndarray) -> np.ndarray:
    return HAND_ANCHOR + (np.asarray(target) - home_tcp)


def make_translate(home_tcp, start="B", end="C"):
    cube = MARKERS[start] + np.array([0.0, 0.0, 0.03])
    above_start = cube + np.array([0.0, 0.0, 0.12])
    above_end = MARKERS[end] + np.array([0.0, 0.0, 0.15])
    at_end = MARKERS[end] + np.array([0.0, 0.0, 0.03])

    s = HandScript()
    s.dwell(0.3)
    s.glide(to_pos=hand_for_gripper(above_start, home_tcp), seconds=1.2)
    s.glide(to_pos=hand_for_gripper(cube, home_tcp), seconds=0.8)
    s.dwell(2.2)
    s.glide(to_aperture=0.2, seconds=0.5)
    s.dwell(1.6)
    s.glide(to_pos=hand_for_gripper(above_start, home_tcp), seconds=0.8)
    s.dwell(0.8)
    s.glide(to_pos=hand_for_gripper(above_end, home_tcp), seconds=1.4)
    s.dwell(1.6)
    s.glide(to_pos=hand_for_gripper(at_end, home_tcp), seconds=0.8)
    s.dwell(2.0)
    s.glide(to_aperture=1.0, seconds=0.5)
    s.dwell(1.4)
    s.glide(to_pos=hand_for_gripper(above_end, home_tcp), seconds=0.8)
    s.dwell(0.8)
    return s.items


def make_rotate(home_tcp, start="B", end="C"):
    cube = 0.5 * (MARKERS[start] + MARKERS[end]) + np.array([0.0, 0.0, 0.03])
    above = cube + np.array([0.0, 0.0, 0.12])
    lifted = cube + np.array([0.0, 0.0, 0.06])

    s = HandScript()
    s.dwell(0.3)
    s.glide(to_pos=hand_for_gripper(above, home_tcp), seconds=1.2)
    s.glide(to_pos=hand_for_gripper(cube, home_tcp), seconds=0.8)
    s.dwell(2.2)
    s.glide(to_aperture=0.2, seconds=0.5)
    s.dwell(1.6)
    s.glide(to_pos=hand_for_gripper(lifted, home_tcp), seconds=0.6)
    s.dwell(0.8)
    s.glide(to_yaw=np.pi / 2, seconds=1.5)
    s.dwell(1.8)
    s.glide(to_pos=hand_for_gripper(cube, home_tcp), seconds=0.6)
    s.dwell(1.6)
    s.glide(to_aperture=1.0, seconds=0.5)
    s.dwell(1.4)
    s.glide(to_pos=hand_for_gripper(above, home_tcp), seconds=0.8)
    s.dwell(0.8)
    return s.items


def make_mapping_demo(home_tcp):
    """Short trace exercising freeze/unfreeze, scale and mirror events."""
    s = HandScript()
    s.dwell(0.5)
    s.glide(to_pos=HAND_ANCHOR + np.array([0.05, 0.0, 0.0]), seconds=0.7)
    s.dwell(0.5)
    s.event(SessionEvent("freeze"))
    s.glide(to_pos=HAND_ANCHOR + np.array([-0.2, 0.3, 0.1]), seconds=0.7)
    s.dwell(0.3)
    s.event(SessionEvent("unfreeze"))
    s.glide(to_pos=HAND_ANCHOR + np.array([-0.15, 0.3, 0.1]), seconds=0.7)
    s.dwell(0.5)
    s.event(SessionEvent("scale", 2.0))
    s.glide(to_pos=HAND_ANCHOR + np.array([-0.15, 0.25, 0.1]), seconds=0.7)
    s.dwell(0.5)
    s.event(SessionEvent("flip", "x"))
    s.glide(to_pos=HAND_ANCHOR + np.array([-0.1, 0.25, 0.1]), seconds=0.7)
    s.dwell(0.5)
    s.event(SessionEvent("scale", 1.0))
    s.event(SessionEvent("flip", "x"))
    s.glide(to_pos=HAND_ANCHOR, to_aperture=0.5, seconds=0.9)
    s.dwell(0.5)
    return s.items


def main():
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("src/armpilot/data/traces")
    outdir.mkdir(parents=True, exist_ok=True)
    chain = default_chain()
    home_tcp = forward_kinematics(chain, chain.home_config()).position

    write_trace(outdir / "translate_b_to_c.jsonl", make_translate(home_tcp))
    write_trace(outdir / "rotate_quarter_turn.jsonl", make_rotate(home_tcp))
    write_trace(outdir / "mapping_demo.jsonl", make_mapping_demo(home_tcp))
    print(f"traces written to {outdir}")


if __name__ == "__main__":
    main()
