"""Wire protocol: typed messages exchanged by viewer clients, relay, and app.

Every websocket text frame carries exactly one single-line JSON object with a
"type" field naming the message and a per-connection strictly increasing
"seq". Coordinates are fractions of the video frame (x right, y down, both in
[0, 1]). Decoding is strict: unknown types, unknown or missing fields, and
wrong field types raise MalformedMessage; well-shaped JSON whose values break
a bound (x = 1.5, username too long, ...) raises InvariantViolation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

MSG_MOUSE_EVENT = "mouse_event"
MSG_CONTEXT = "context"
MSG_APP_UPDATE = "app_update"
MSG_HELLO = "hello"
MSG_ERROR = "error"

KIND_CLICK = "click"
KIND_GESTURE = "gesture"

ROLE_VIEWER = "viewer"
ROLE_APP = "app"

MAX_USERNAME_CHARS = 64
MAX_CONTEXT_ENTRIES = 16
MAX_CONTEXT_KEY_CHARS = 32
MAX_CONTEXT_VALUE_CHARS = 256

# Click/gesture discrimination defaults: 0.01 of the frame is ~10-19 px at
# 1080p, a common drag threshold; 250 ms separates taps from holds.
MOTION_THRESHOLD = 0.01
HOLD_TIMEOUT_MS = 250


class ProtocolError(Exception):
    """Base for wire-level failures."""


class InvariantViolation(ProtocolError):
    """Well-formed message whose values break a documented bound."""


class MalformedMessage(ProtocolError):
    """Not valid JSON, unknown message type, or wrong field shape/type."""


def _check_username(user):
    if not isinstance(user, str) or not user or len(user) > MAX_USERNAME_CHARS:
        raise InvariantViolation(f"username must be 1..{MAX_USERNAME_CHARS} chars")


def _check_data_map(data):
    if len(data) > MAX_CONTEXT_ENTRIES:
        raise InvariantViolation(f"data map exceeds {MAX_CONTEXT_ENTRIES} entries")
    for k, v in data.items():
        if len(k) > MAX_CONTEXT_KEY_CHARS:
            raise InvariantViolation(f"data key exceeds {MAX_CONTEXT_KEY_CHARS} chars")
        if len(v) > MAX_CONTEXT_VALUE_CHARS:
            raise InvariantViolation(f"data value exceeds {MAX_CONTEXT_VALUE_CHARS} chars")


@dataclass(frozen=True)
class NormPoint:
    """A point in normalized video coordinates, y increasing downward."""

    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        if not (0.0 <= self.x <= 1.0 and 0.0 <= self.y <= 1.0):
            raise InvariantViolation(f"point ({self.x}, {self.y}) outside [0,1]x[0,1]")


@dataclass(frozen=True)
class ViewerEvent:
    """A click or gesture stroke, tagged with username and broadcast latency.

    point_offsets_ms holds per-point milliseconds since stroke start (first
    entry 0, non-decreasing); latency_ms is the broadcast latency the client
    reported when the interaction began.
    """

    user: str
    kind: str
    points: tuple
    point_offsets_ms: tuple
    latency_ms: int
    client_ts_ms: int

    def __post_init__(self):
        _check_username(self.user)
        object.__setattr__(
            self,
            "points",
            tuple(p if isinstance(p, NormPoint) else NormPoint(p[0], p[1]) for p in self.points),
        )
        object.__setattr__(self, "point_offsets_ms", tuple(int(o) for o in self.point_offsets_ms))
        if self.kind == KIND_CLICK:
            if len(self.points) != 1:
                raise InvariantViolation("click carries exactly one point")
        elif self.kind == KIND_GESTURE:
            if len(self.points) < 2:
                raise InvariantViolation("gesture carries at least two points")
        else:
            raise InvariantViolation(f"unknown event kind {self.kind!r}")
        if len(self.point_offsets_ms) != len(self.points):
            raise InvariantViolation("one time offset per point required")
        if self.point_offsets_ms[0] != 0:
            raise InvariantViolation("first point offset must be 0")
        if any(b < a for a, b in zip(self.point_offsets_ms, self.point_offsets_ms[1:])):
            raise InvariantViolation("point offsets must be non-decreasing")
        if self.latency_ms < 0:
            raise InvariantViolation("latency_ms must be >= 0")


@dataclass(frozen=True)
class ContextPayload:
    """Per-username key-value augmentation set from the viewer's panel."""

    user: str
    data: dict

    def __post_init__(self):
        _check_username(self.user)
        object.__setattr__(self, "data", dict(self.data))
        _check_data_map(self.data)


@dataclass(frozen=True)
class AppUpdate:
    """Back-channel payload from the app; audience None means every viewer."""

    payload: dict
    audience: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "payload", dict(self.payload))
        _check_data_map(self.payload)
        if self.audience is not None:
            _check_username(self.audience)


@dataclass(frozen=True)
class Hello:
    """Connection handshake asserting a role and, for viewers, a username."""

    role: str
    user: str | None = None

    def __post_init__(self):
        if self.role not in (ROLE_VIEWER, ROLE_APP):
            raise InvariantViolation(f"unknown role {self.role!r}")
        if self.user is not None:
            _check_username(self.user)


@dataclass(frozen=True)
class ErrorInfo:
    code: str
    detail: str = ""


_BODY_TYPES = {
    ViewerEvent: MSG_MOUSE_EVENT,
    ContextPayload: MSG_CONTEXT,
    AppUpdate: MSG_APP_UPDATE,
    Hello: MSG_HELLO,
    ErrorInfo: MSG_ERROR,
}


@dataclass(frozen=True)
class Envelope:
    """One wire message: a typed body plus the per-connection sequence number."""

    seq: int
    body: object

    def __post_init__(self):
        if type(self.body) not in _BODY_TYPES:
            raise InvariantViolation(f"unsupported body {type(self.body).__name__}")
        if type(self.seq) is not int:
            raise InvariantViolation("seq must be an integer")

    @property
    def msg_type(self):
        return _BODY_TYPES[type(self.body)]


def to_wire(envelope: Envelope) -> dict:
    """Envelope as a plain JSON-ready dict in schema field order."""
    body = envelope.body
    obj = {"type": envelope.msg_type, "seq": envelope.seq}
    if isinstance(body, ViewerEvent):
        obj["user"] = body.user
        obj["kind"] = body.kind
        obj["points"] = [[p.x, p.y] for p in body.points]
        obj["offsets_ms"] = list(body.point_offsets_ms)
        obj["latency_ms"] = body.latency_ms
        obj["client_ts_ms"] = body.client_ts_ms
    elif isinstance(body, ContextPayload):
        obj["user"] = body.user
        obj["data"] = body.data
    elif isinstance(body, AppUpdate):
        obj["audience"] = "all" if body.audience is None else {"user": body.audience}
        obj["payload"] = body.payload
    elif isinstance(body, Hello):
        obj["role"] = body.role
        if body.user is not None:
            obj["user"] = body.user
    else:
        obj["code"] = body.code
        obj["detail"] = body.detail
    return obj


def encode(envelope: Envelope) -> bytes:
    """Serialize an envelope to a single-line UTF-8 JSON frame."""
    return json.dumps(to_wire(envelope), separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def _require(obj, required, optional=()):
    missing = [k for k in required if k not in obj]
    if missing:
        raise MalformedMessage(f"missing field(s) {missing}")
    unknown = [k for k in obj if k not in required and k not in optional]
    if unknown:
        raise MalformedMessage(f"unknown field(s) {unknown}")


def _as_int(obj, key):
    v = obj[key]
    if type(v) is not int:
        raise MalformedMessage(f"{key} must be an integer")
    return v


def _as_str(obj, key):
    v = obj[key]
    if not isinstance(v, str):
        raise MalformedMessage(f"{key} must be a string")
    return v


def _as_point(raw):
    if (
        not isinstance(raw, list)
        or len(raw) != 2
        or not all(type(c) in (int, float) for c in raw)
        or not all(math.isfinite(c) for c in raw)
    ):
        raise MalformedMessage("each point must be a finite [x, y] number pair")
    return NormPoint(raw[0], raw[1])


def _as_str_map(raw, key):
    if not isinstance(raw, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in raw.items()
    ):
        raise MalformedMessage(f"{key} must be a flat string-to-string map")
    return raw


def decode(data) -> Envelope:
    """Parse one frame back into an Envelope. Round-trips with encode."""
    if isinstance(data, (bytes, bytearray)):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedMessage(f"not UTF-8: {exc}") from exc
    try:
        obj = json.loads(data)
    except (json.JSONDecodeError, TypeError) as exc:
        raise MalformedMessage(f"not JSON: {exc}") from exc
    return from_wire(obj)


def from_wire(obj) -> Envelope:
    """Build an Envelope from an already-parsed JSON object."""
    if not isinstance(obj, dict):
        raise MalformedMessage("frame must be a JSON object")
    if "type" not in obj:
        raise MalformedMessage("missing field(s) ['type']")
    msg_type = obj["type"]

    if msg_type == MSG_MOUSE_EVENT:
        _require(obj, ("type", "seq", "user", "kind", "points", "offsets_ms", "latency_ms", "client_ts_ms"))
        kind = _as_str(obj, "kind")
        if kind not in (KIND_CLICK, KIND_GESTURE):
            raise MalformedMessage(f"unknown kind {kind!r}")
        raw_points = obj["points"]
        if not isinstance(raw_points, list) or not raw_points:
            raise MalformedMessage("points must be a non-empty list")
        raw_offsets = obj["offsets_ms"]
        if not isinstance(raw_offsets, list) or not all(type(o) is int for o in raw_offsets):
            raise MalformedMessage("offsets_ms must be a list of integers")
        body = ViewerEvent(
            user=_as_str(obj, "user"),
            kind=kind,
            points=tuple(_as_point(p) for p in raw_points),
            point_offsets_ms=tuple(raw_offsets),
            latency_ms=_as_int(obj, "latency_ms"),
            client_ts_ms=_as_int(obj, "client_ts_ms"),
        )
    elif msg_type == MSG_CONTEXT:
        _require(obj, ("type", "seq", "user", "data"))
        body = ContextPayload(user=_as_str(obj, "user"), data=_as_str_map(obj["data"], "data"))
    elif msg_type == MSG_APP_UPDATE:
        _require(obj, ("type", "seq", "audience", "payload"))
        raw_audience = obj["audience"]
        if raw_audience == "all":
            audience = None
        elif isinstance(raw_audience, dict) and set(raw_audience) == {"user"} and isinstance(raw_audience["user"], str):
            audience = raw_audience["user"]
        else:
            raise MalformedMessage('audience must be "all" or {"user": name}')
        body = AppUpdate(payload=_as_str_map(obj["payload"], "payload"), audience=audience)
    elif msg_type == MSG_HELLO:
        _require(obj, ("type", "seq", "role"), optional=("user",))
        role = _as_str(obj, "role")
        if role not in (ROLE_VIEWER, ROLE_APP):
            raise MalformedMessage(f"unknown role {role!r}")
        body = Hello(role=role, user=_as_str(obj, "user") if "user" in obj else None)
    elif msg_type == MSG_ERROR:
        _require(obj, ("type", "seq", "code", "detail"))
        body = ErrorInfo(code=_as_str(obj, "code"), detail=_as_str(obj, "detail"))
    else:
        raise MalformedMessage(f"unknown message type {msg_type!r}")

    return Envelope(seq=_as_int(obj, "seq"), body=body)


def classify_raw_input(
    press_point: NormPoint,
    release_point: NormPoint,
    trajectory,
    hold_ms,
    motion_threshold=MOTION_THRESHOLD,
    hold_timeout_ms=HOLD_TIMEOUT_MS,
) -> str:
    """Discriminate a raw press/release interaction into click or gesture.

    Gesture iff the pointer ever strayed at least motion_threshold from the
    press point (Euclidean, normalized units) or the button was held at least
    hold_timeout_ms; otherwise click.
    """
    max_disp = 0.0
    for p in tuple(trajectory) + (release_point,):
        d = math.hypot(p.x - press_point.x, p.y - press_point.y)
        if d > max_disp:
            max_disp = d
    if max_disp >= motion_threshold or hold_ms >= hold_timeout_ms:
        return KIND_GESTURE
    return KIND_CLICK
