import pytest

from armpilot.session import SessionEvent
from armpilot.traces import (
    TraceError,
    TraceEvent,
    TraceSample,
    bundled_trace,
    ingest_trace,
    parse_trace,
    write_trace,
)


def test_parse_samples_and_events():
    text = (
        '{"t":0.0,"pos":[0,-0.6,0.35],"q":[1,0,0,0],"aperture":1.0}\n'
        '{"t":0.1,"event":"freeze"}\n'
        '{"t":0.2,"event":{"scale":1.5}}\n'
        '{"t":0.3,"event":{"flip":"y"}}\n'
        '{"t":0.4,"pos":[0.1,-0.6,0.35],"q":[1,0,0,0],"aperture":0.5}\n'
    )
    items = parse_trace(text)
    assert len(items) == 5
    assert isinstance(items[0], TraceSample)
    assert isinstance(items[1], TraceEvent)
    assert items[1].event.kind == "freeze"
    assert items[2].event.value == 1.5
    assert items[3].event.value == "y"
    assert items[4].aperture == 0.5


def test_timestamp_regression_cites_line():
    text = (
        '{"t":0.0,"pos":[0,0,0],"q":[1,0,0,0],"aperture":1}\n'
        '{"t":0.5,"pos":[0,0,0],"q":[1,0,0,0],"aperture":1}\n'
        '{"t":0.2,"pos":[0,0,0],"q":[1,0,0,0],"aperture":1}\n'
    )
    with pytest.raises(TraceError) as exc:
        parse_trace(text)
    assert exc.value.line_number == 3
    assert "line 3" in str(exc.value)


def test_bad_json_cites_line():
    with pytest.raises(TraceError) as exc:
        parse_trace('{"t":0.0,"pos":[0,0,0],"q":[1,0,0,0],"aperture":1}\nnot json\n')
    assert exc.value.line_number == 2


def test_unknown_line_shape_rejected():
    with pytest.raises(TraceError):
        parse_trace('{"t":0.0,"what":1}\n')
    with pytest.raises(TraceError):
        parse_trace('{"t":0.0,"event":{"zoom":2}}\n')
    with pytest.raises(TraceError):
        parse_trace('{"t":0.0,"event":{"flip":"z"}}\n')


def test_empty_file_is_empty_trace(tmp_path):
    p = tmp_path / "empty.jsonl"
    p.write_text("", encoding="utf-8")
    assert ingest_trace(p) == []


def test_well_formed_file_n_lines(tmp_path):
    p = tmp_path / "t.jsonl"
    lines = [
        f'{{"t":{i * 0.1},"pos":[0,0,0],"q":[1,0,0,0],"aperture":1.0}}' for i in range(7)
    ]
    p.write_text("\n".join(lines) + "\n", encoding="utf-8")
    assert len(ingest_trace(p)) == 7


def test_write_read_roundtrip(tmp_path):
    items = [
        TraceSample(0.0, (0.0, -0.6, 0.35), (1.0, 0.0, 0.0, 0.0), 1.0),
        TraceEvent(0.1, SessionEvent("scale", 1.25)),
        TraceSample(0.2, (0.1, -0.6, 0.35), (1.0, 0.0, 0.0, 0.0), 0.25),
    ]
    p = tmp_path / "rt.jsonl"
    write_trace(p, items)
    back = ingest_trace(p)
    assert back == items


def test_bundled_traces_parse():
    for name in ("translate_b_to_c", "rotate_quarter_turn", "mapping_demo"):
        items = bundled_trace(name)
        assert len(items) > 50
