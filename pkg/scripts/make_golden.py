#!/usr/bin/env python3
"""Regenerate the golden protocol message files (canonical encoding)."""

from pathlib import Path

from armpilot import protocol
from armpilot.config import load_config
from armpilot.mapping import HandSample
from armpilot.kinematics import Pose
from armpilot.session import Session, SessionEvent, frame_record

OUT = Path("src/armpilot/data/protocol")


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    config = load_config(None)

    session = Session(config)
    dt = session.dt
    for i in range(3):
        session.tick(HandSample(Pose((0.0, -0.6, 0.35)), aperture=0.8, timestamp=i * dt))
    session.apply_event(SessionEvent("scale", 1.5))
    frame = session.tick(HandSample(Pose((0.02, -0.6, 0.35)), aperture=0.8, timestamp=3 * dt))

    messages = {
        "hello": protocol.hello_message(),
        "hello_ack": protocol.hello_ack(
            role="operator",
            chain_dict=config.chain.to_dict(),
            limits_dict=config.limits.to_dict(),
            frame_rate=config.frame_rate,
        ),
        "hand": protocol.hand_message(
            t=0.08571428571428572,
            pos=(0.02, -0.6, 0.35),
            quat=(1.0, 0.0, 0.0, 0.0),
            aperture=0.8,
        ),
        "event_freeze": protocol.event_message("freeze"),
        "event_unfreeze": protocol.event_message("unfreeze"),
        "event_scale": protocol.event_message({"scale": 1.5}),
        "event_flip": protocol.event_message({"flip": "x"}),
        "event_rotation_offset": protocol.event_message(
            {"rotation_offset": [0.984807753012208, 0.0, 0.17364817766693041, 0.0]}
        ),
        "frame": protocol.frame_message(
            frame_record(frame),
            mapping_summary={
                "frozen": frame.mapping_frozen,
                "scale": frame.mapping_scale,
                "mirror": list(frame.mapping_mirror),
            },
        ),
        "error": protocol.error_message("unknown message kind 'ping'"),
        "task_result": {
            "kind": "task_result",
            "success": True,
            "report": {
                "task": "translate",
                "start_marker": "B",
                "end_marker": "C",
                "success": True,
                "reason": "ok",
                "anomaly_count": 83,
                "motion_time_s": 12.17142857,
            },
        },
    }
    for name, msg in messages.items():
        protocol.decode(protocol.encode(msg))  # must validate
        (OUT / f"{name}.json").write_text(protocol.encode(msg) + "\n", encoding="utf-8")
        print(f"wrote {name}.json")


if __name__ == "__main__":
    main()
