"""Wire protocol: framed UTF-8 JSON messages over a WebSocket.

Message kinds: hello, hand, event, frame, error, task_result. Every message
is a JSON object with a "kind" field; hello additionally carries the
protocol version. encode() is canonical (sorted keys, compact separators),
and the golden files under data/protocol/ are stored in exactly that form,
so encode(decode(text)) reproduces the bytes.
"""

from __future__ import annotations

import json

PROTOCOL_VERSION = 1

KINDS = ("hello", "hand", "event", "frame", "error", "task_result")


class ProtocolError(ValueError):
    pass


def encode(message: dict) -> str:
    """Canonical JSON encoding of a validated message."""
    return json.dumps(message, sort_keys=True, separators=(",", ":"))


def decode(text: str | bytes) -> dict:
    """Parse and validate one message; raises ProtocolError on anything off."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ProtocolError(f"message is not UTF-8: {e}") from e
    try:
        msg = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProtocolError(f"message is not valid JSON: {e}") from e
    if not isinstance(msg, dict):
        raise ProtocolError("message must be a JSON object")
    kind = msg.get("kind")
    if kind not in KINDS:
        raise ProtocolError(f"unknown message kind {kind!r}")
    _VALIDATORS[kind](msg)
    return msg


def _need(msg: dict, key: str, types, kind: str):
    if key not in msg:
        raise ProtocolError(f"{kind} message missing {key!r}")
    if not isinstance(msg[key], types):
        raise ProtocolError(f"{kind} message field {key!r} has wrong type")
    return msg[key]


def _need_vector(msg: dict, key: str, length: int, kind: str):
    v = _need(msg, key, list, kind)
    if len(v) != length or not all(isinstance(x, (int, float)) for x in v):
        raise ProtocolError(f"{kind} message field {key!r} must be {length} numbers")
    return v


def _validate_hello(msg: dict) -> None:
    version = _need(msg, "version", int, "hello")
    if version < 1:
        raise ProtocolError(f"bad protocol version {version}")
    # server ack additionally carries role/chain/limits; both shapes are valid


def _validate_hand(msg: dict) -> None:
    _need(msg, "t", (int, float), "hand")
    _need_vector(msg, "pos", 3, "hand")
    _need_vector(msg, "q", 4, "hand")
    a = _need(msg, "aperture", (int, float), "hand")
    if not 0.0 <= a <= 1.0:
        raise ProtocolError(f"aperture {a} outside [0, 1]")


def _validate_event(msg: dict) -> None:
    ev = msg.get("event")
    if ev in ("freeze", "unfreeze"):
        return
    if isinstance(ev, dict):
        if set(ev) == {"scale"} and isinstance(ev["scale"], (int, float)):
            return
        if set(ev) == {"flip"} and ev["flip"] in ("x", "y"):
            return
        if set(ev) == {"rotation_offset"}:
            q = ev["rotation_offset"]
            if isinstance(q, list) and len(q) == 4:
                return
    raise ProtocolError(f"bad event payload {ev!r}")


def _validate_frame(msg: dict) -> None:
    for key in ("frame", "t", "hand", "target", "virtual_q", "physical_q",
                "gripper_mm", "anomaly", "overlap", "lag_m", "events", "mapping"):
        if key not in msg:
            raise ProtocolError(f"frame message missing {key!r}")


def _validate_error(msg: dict) -> None:
    _need(msg, "message", str, "error")


def _validate_task_result(msg: dict) -> None:
    _need(msg, "success", bool, "task_result")
    _need(msg, "report", dict, "task_result")


_VALIDATORS = {
    "hello": _validate_hello,
    "hand": _validate_hand,
    "event": _validate_event,
    "frame": _validate_frame,
    "error": _validate_error,
    "task_result": _validate_task_result,
}


def hello_message() -> dict:
    return {"kind": "hello", "version": PROTOCOL_VERSION}


def hello_ack(role: str, chain_dict: dict, limits_dict: dict, frame_rate: float) -> dict:
    return {
        "kind": "hello",
        "version": PROTOCOL_VERSION,
        "role": role,
        "chain": chain_dict,
        "limits": limits_dict,
        "frame_rate": frame_rate,
    }


def hand_message(t: float, pos, quat, aperture: float) -> dict:
    return {
        "kind": "hand",
        "t": float(t),
        "pos": [float(x) for x in pos],
        "q": [float(x) for x in quat],
        "aperture": float(aperture),
    }


def event_message(payload) -> dict:
    return {"kind": "event", "event": payload}


def frame_message(record: dict, mapping_summary: dict) -> dict:
    msg = {"kind": "frame", "mapping": mapping_summary}
    msg.update(record)
    return msg


def error_message(message: str, code: str = "bad_message") -> dict:
    return {"kind": "error", "code": code, "message": message}


def golden_messages() -> dict[str, dict]:
    """The bundled golden message per file name (schema fixtures)."""
    from importlib import resources

    out = {}
    root = resources.files("armpilot").joinpath("data/protocol")
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".json"):
            out[entry.name[:-5]] = decode(entry.read_text("utf-8").strip())
    return out
