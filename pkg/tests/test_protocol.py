import json
import random

import pytest

from streamtap import protocol
from streamtap.protocol import (
    AppUpdate,
    ContextPayload,
    Envelope,
    ErrorInfo,
    Hello,
    InvariantViolation,
    MalformedMessage,
    NormPoint,
    ViewerEvent,
    classify_raw_input,
    decode,
    encode,
)


def click(user="alice", x=0.5, y=0.5, latency=1500, seq=1, client_ts=1_000_000):
    return Envelope(
        seq=seq,
        body=ViewerEvent(user, "click", [NormPoint(x, y)], [0], latency, client_ts),
    )


def test_click_wire_shape():
    raw = encode(click())
    obj = json.loads(raw)
    assert obj == {
        "type": "mouse_event",
        "seq": 1,
        "user": "alice",
        "kind": "click",
        "points": [[0.5, 0.5]],
        "offsets_ms": [0],
        "latency_ms": 1500,
        "client_ts_ms": 1_000_000,
    }
    assert b"\n" not in raw


def test_context_wire_shape():
    env = Envelope(seq=2, body=ContextPayload("bob", {"item": "zombie"}))
    assert json.loads(encode(env)) == {
        "type": "context",
        "seq": 2,
        "user": "bob",
        "data": {"item": "zombie"},
    }


def test_app_update_audience_forms():
    to_all = Envelope(seq=1, body=AppUpdate({"level": "2"}))
    assert json.loads(encode(to_all))["audience"] == "all"
    to_alice = Envelope(seq=2, body=AppUpdate({"round": "open"}, audience="alice"))
    assert json.loads(encode(to_alice))["audience"] == {"user": "alice"}
    for env in (to_all, to_alice):
        assert decode(encode(env)) == env


def test_empty_username_rejected():
    with pytest.raises(InvariantViolation):
        click(user="")
    with pytest.raises(InvariantViolation):
        click(user="x" * 65)


def test_point_out_of_range_rejected():
    with pytest.raises(InvariantViolation):
        NormPoint(1.5, 0.2)
    raw = b'{"type":"mouse_event","seq":1,"user":"a","kind":"click","points":[[1.5,0.2]],"offsets_ms":[0],"latency_ms":0,"client_ts_ms":0}'
    with pytest.raises(InvariantViolation):
        decode(raw)


def test_not_json_rejected():
    with pytest.raises(MalformedMessage):
        decode(b"not json")


def test_nan_and_wrong_types_are_malformed():
    base = {
        "type": "mouse_event",
        "seq": 1,
        "user": "a",
        "kind": "click",
        "points": [[0.5, 0.5]],
        "offsets_ms": [0],
        "latency_ms": 0,
        "client_ts_ms": 0,
    }
    bad = dict(base, points=[[float("nan"), 0.5]])
    with pytest.raises(MalformedMessage):
        decode(json.dumps(bad))
    bad = dict(base, latency_ms=1.5)
    with pytest.raises(MalformedMessage):
        decode(json.dumps(bad))
    bad = dict(base, seq=True)
    with pytest.raises(MalformedMessage):
        decode(json.dumps(bad))


def test_unknown_type_and_fields_rejected():
    with pytest.raises(MalformedMessage):
        decode(b'{"type":"teleport","seq":1}')
    with pytest.raises(MalformedMessage):
        decode(b'{"type":"hello","seq":1,"role":"viewer","user":"a","extra":1}')
    with pytest.raises(MalformedMessage):
        decode(b'{"type":"context","seq":1,"user":"a"}')


def test_context_bounds():
    ContextPayload("a", {f"k{i}": "v" for i in range(16)})
    with pytest.raises(InvariantViolation):
        ContextPayload("a", {f"k{i}": "v" for i in range(17)})
    with pytest.raises(InvariantViolation):
        ContextPayload("a", {"k" * 33: "v"})
    with pytest.raises(InvariantViolation):
        ContextPayload("a", {"k": "v" * 257})


def test_click_point_count_invariants():
    with pytest.raises(InvariantViolation):
        ViewerEvent("a", "click", [NormPoint(0, 0), NormPoint(1, 1)], [0, 10], 0, 0)
    with pytest.raises(InvariantViolation):
        ViewerEvent("a", "gesture", [NormPoint(0, 0)], [0], 0, 0)
    with pytest.raises(InvariantViolation):
        ViewerEvent("a", "gesture", [NormPoint(0, 0), NormPoint(1, 1)], [0, 10, 20], 0, 0)
    with pytest.raises(InvariantViolation):
        ViewerEvent("a", "gesture", [NormPoint(0, 0), NormPoint(1, 1)], [5, 10], 0, 0)
    with pytest.raises(InvariantViolation):
        ViewerEvent("a", "gesture", [NormPoint(0, 0), NormPoint(1, 1)], [0, -1], 0, 0)
    with pytest.raises(InvariantViolation):
        ViewerEvent("a", "click", [NormPoint(0, 0)], [0], -1, 0)


def random_envelope(rng):
    """One random valid envelope of any message type."""
    user = "".join(rng.choice("abcdefgh_0123") for _ in range(rng.randint(1, 64)))
    seq = rng.randint(1, 10**9)
    roll = rng.random()
    if roll < 0.4:
        n = 1 if rng.random() < 0.5 else rng.randint(2, 12)
        kind = "click" if n == 1 else "gesture"
        points = [NormPoint(rng.random(), rng.random()) for _ in range(n)]
        offsets = [0]
        for _ in range(n - 1):
            offsets.append(offsets[-1] + rng.randint(0, 40))
        body = ViewerEvent(user, kind, points, offsets, rng.randint(0, 10_000), rng.randint(0, 2**45))
    elif roll < 0.6:
        data = {
            f"k{i}_{rng.randint(0, 999)}": "".join(rng.choice("xyz!x") for _ in range(rng.randint(0, 256)))
            for i in range(rng.randint(0, 16))
        }
        body = ContextPayload(user, data)
    elif roll < 0.75:
        payload = {f"p{i}": str(rng.randint(0, 99)) for i in range(rng.randint(0, 16))}
        body = AppUpdate(payload, audience=None if rng.random() < 0.5 else user)
    elif roll < 0.9:
        role = "viewer" if rng.random() < 0.7 else "app"
        body = Hello(role, user=user if role == "viewer" else None)
    else:
        body = ErrorInfo("no_app", "no app connected")
    return Envelope(seq=seq, body=body)


def test_round_trip_property():
    rng = random.Random(20_240_901)
    for _ in range(2000):
        env = random_envelope(rng)
        assert decode(encode(env)) == env


def test_classify_examples():
    p = NormPoint(0.5, 0.5)
    assert classify_raw_input(p, p, [p], 50) == "click"
    a, b = NormPoint(0.2, 0.2), NormPoint(0.6, 0.2)
    assert classify_raw_input(a, b, [a, b], 300) == "gesture"
    assert classify_raw_input(p, p, [p, p], 400) == "gesture"


def test_classify_monotone_in_displacement():
    rng = random.Random(7)
    press = NormPoint(0.5, 0.5)
    for _ in range(200):
        d1 = rng.uniform(0.0, 0.4)
        d2 = rng.uniform(d1, 0.45)
        hold = rng.randint(0, 249)
        mid1 = NormPoint(0.5 + d1, 0.5)
        mid2 = NormPoint(0.5 + d2, 0.5)
        c1 = classify_raw_input(press, press, [press, mid1, press], hold)
        c2 = classify_raw_input(press, press, [press, mid2, press], hold)
        if c1 == "gesture":
            assert c2 == "gesture"


def test_classify_threshold_boundary():
    press = NormPoint(0.5, 0.5)
    at = NormPoint(0.5 + protocol.MOTION_THRESHOLD, 0.5)
    below = NormPoint(0.5 + protocol.MOTION_THRESHOLD * 0.9, 0.5)
    assert classify_raw_input(press, at, [press, at], 0) == "gesture"
    assert classify_raw_input(press, below, [press, below], 0) == "click"
    assert classify_raw_input(press, press, [press], protocol.HOLD_TIMEOUT_MS) == "gesture"
    assert classify_raw_input(press, press, [press], protocol.HOLD_TIMEOUT_MS - 1) == "click"
