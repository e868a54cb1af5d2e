"""Session hub: validates, stamps, stores, and routes messages for one stream.

The hub is transport-free and single-writer: every mutation happens through
one logical owner (the server's event loop, or the harness), which gives the
receive log a total order. Viewer events get a server timestamp and the
sender's current context snapshot on admission, then go to the app side;
app updates fan out to viewers. Everything the hub accepts is appended to an
append-only receive log that can be exported as JSONL and replayed
deterministically into a fresh session.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import protocol
from .protocol import (
    AppUpdate,
    ContextPayload,
    Envelope,
    ErrorInfo,
    Hello,
    ViewerEvent,
)

APP_INTERNAL = "__app_internal__"  # conn id representing an in-process app sink


class RelayError(Exception):
    """Routing failure reported to the offending sender as an error frame."""

    code = "relay_error"


class DuplicateApp(RelayError):
    code = "duplicate_app"


class MissingUsername(RelayError):
    code = "missing_username"


class AlreadyRegistered(RelayError):
    code = "already_registered"


class NotRegistered(RelayError):
    code = "not_registered"


class UserMismatch(RelayError):
    code = "user_mismatch"


class NoApp(RelayError):
    code = "no_app"


class NotApp(RelayError):
    code = "not_app"


class BadSequence(RelayError):
    code = "bad_seq"


class CorruptLog(Exception):
    def __init__(self, line_no, reason):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no


@dataclass
class AdmittedEvent:
    """A viewer event paired with its context snapshot and server stamp.

    The snapshot is a copy taken at admission; later context changes never
    alter it. server_ts_ms comes from the relay clock, never the client.
    """

    event: ViewerEvent
    context_snapshot: dict
    server_ts_ms: int


@dataclass
class _Conn:
    role: str
    user: str | None
    last_seq: int | None = None
    out_seq: int = 0


@dataclass
class Registration:
    """Outcome of a hello: the connection to close when a username moved."""

    role: str
    user: str | None
    replaced_conn: object = None


@dataclass
class Delivery:
    """Outbound instruction: send this envelope on that connection."""

    conn_id: object
    envelope: Envelope


class SessionHub:
    """State and routing rules for one streamer session (one app, N viewers)."""

    def __init__(self, clock):
        self.clock = clock
        self._conns = {}
        self._viewer_conn = {}
        self._app_conn = None
        self._app_sink = None
        self._outbox = []
        self._orphan_out_seq = {}
        self.context_store = {}
        self.receive_log = []
        self.counters = {
            "received": 0,
            "events_delivered": 0,
            "contexts_stored": 0,
            "updates_fanned_out": 0,
            "errors": {},
        }

    # -- membership ---------------------------------------------------------

    def attach_app_sink(self, sink):
        """Register an in-process app consumer (on_event / on_context)."""
        if self.app_connected:
            raise DuplicateApp("an app is already attached")
        self._app_sink = sink

    @property
    def app_connected(self) -> bool:
        return self._app_sink is not None or self._app_conn is not None

    def viewers(self) -> dict:
        return dict(self._viewer_conn)

    def viewer_count(self) -> int:
        return len(self._viewer_conn)

    def connection_user(self, conn_id):
        conn = self._conns.get(conn_id)
        return conn.user if conn else None

    def register(self, conn_id, envelope: Envelope) -> Registration:
        hello = envelope.body
        if not isinstance(hello, Hello):
            raise NotRegistered("connection must hello first")
        if conn_id in self._conns:
            raise AlreadyRegistered(f"connection {conn_id!r} already registered")
        replaced = None
        if hello.role == protocol.ROLE_APP:
            if self.app_connected:
                raise DuplicateApp("session already has an app connection")
            self._app_conn = conn_id
            self._conns[conn_id] = _Conn(role=protocol.ROLE_APP, user=None, last_seq=envelope.seq)
        else:
            if not hello.user:
                raise MissingUsername("viewer hello must carry a username")
            replaced = self._viewer_conn.get(hello.user)
            if replaced is not None:
                del self._conns[replaced]
            self._viewer_conn[hello.user] = conn_id
            self._conns[conn_id] = _Conn(
                role=protocol.ROLE_VIEWER, user=hello.user, last_seq=envelope.seq
            )
        self._log(envelope)
        return Registration(role=hello.role, user=hello.user, replaced_conn=replaced)

    def unregister(self, conn_id):
        self._orphan_out_seq.pop(conn_id, None)
        conn = self._conns.pop(conn_id, None)
        if conn is None:
            return
        if conn.role == protocol.ROLE_APP:
            self._app_conn = None
        elif self._viewer_conn.get(conn.user) == conn_id:
            del self._viewer_conn[conn.user]

    # -- inbound ------------------------------------------------------------

    def ingest_context(self, conn_id, envelope: Envelope):
        """Store a viewer's panel state wholesale and forward it to the app."""
        payload = envelope.body
        sender = self._require_viewer(conn_id)
        if payload.user != sender.user:
            raise UserMismatch(f"sender {sender.user!r} cannot set context for {payload.user!r}")
        self._check_seq(conn_id, envelope)
        self.context_store[payload.user] = dict(payload.data)
        self._log(envelope)
        self.counters["contexts_stored"] += 1
        if self._app_sink is not None:
            self._app_sink.on_context(payload.user, dict(payload.data))
        if self._app_conn is not None:
            self._outbox.append(Delivery(self._app_conn, self._reseq(self._app_conn, payload)))

    def ingest_event(self, conn_id, envelope: Envelope) -> AdmittedEvent:
        """Stamp, snapshot, log, and deliver one viewer event to the app."""
        event = envelope.body
        sender = self._require_viewer(conn_id)
        if event.user != sender.user:
            raise UserMismatch(f"sender {sender.user!r} cannot act as {event.user!r}")
        if not self.app_connected:
            raise NoApp("no app connected; event dropped")
        self._check_seq(conn_id, envelope)
        admitted = AdmittedEvent(
            event=event,
            context_snapshot=dict(self.context_store.get(event.user, {})),
            server_ts_ms=self.clock(),
        )
        self._log(envelope)
        self.counters["events_delivered"] += 1
        if self._app_sink is not None:
            self._app_sink.on_event(admitted)
        if self._app_conn is not None:
            self._outbox.append(Delivery(self._app_conn, self._reseq(self._app_conn, event)))
        return admitted

    def push_app_update(self, conn_id, update: AppUpdate) -> int:
        """Fan an app update out to its audience; absent users are skipped."""
        if conn_id != APP_INTERNAL:
            conn = self._conns.get(conn_id)
            if conn is None or conn.role != protocol.ROLE_APP:
                raise NotApp("only the app connection may push updates")
        if update.audience is None:
            targets = list(self._viewer_conn.values())
        else:
            target = self._viewer_conn.get(update.audience)
            targets = [target] if target is not None else []
        for t in targets:
            self._outbox.append(Delivery(t, self._reseq(t, update)))
        self.counters["updates_fanned_out"] += len(targets)
        return len(targets)

    def make_error(self, conn_id, code, detail="") -> Envelope:
        self.counters["errors"][code] = self.counters["errors"].get(code, 0) + 1
        return self._reseq(conn_id, ErrorInfo(code=code, detail=detail))

    def take_outbox(self) -> list:
        """Drain pending outbound deliveries accumulated by ingest/push calls."""
        out, self._outbox = self._outbox, []
        return out

    # -- replay -------------------------------------------------------------

    def export_replay(self) -> bytes:
        """Receive log as JSONL: one {"ts", "envelope"} object per line."""
        lines = [
            json.dumps(
                {"ts": ts, "envelope": protocol.to_wire(env)},
                separators=(",", ":"),
                ensure_ascii=False,
            )
            for ts, env in self.receive_log
        ]
        return ("\n".join(lines) + ("\n" if lines else "")).encode("utf-8")

    # -- internals ----------------------------------------------------------

    def _require_viewer(self, conn_id) -> _Conn:
        conn = self._conns.get(conn_id)
        if conn is None or conn.role != protocol.ROLE_VIEWER:
            raise UserMismatch("sender is not a registered viewer")
        return conn

    def _check_seq(self, conn_id, envelope):
        conn = self._conns[conn_id]
        if conn.last_seq is not None and envelope.seq <= conn.last_seq:
            raise BadSequence(f"seq {envelope.seq} after {conn.last_seq}")
        conn.last_seq = envelope.seq

    def _reseq(self, conn_id, body) -> Envelope:
        conn = self._conns.get(conn_id)
        if conn is not None:
            conn.out_seq += 1
            return Envelope(seq=conn.out_seq, body=body)
        nxt = self._orphan_out_seq.get(conn_id, 0) + 1
        self._orphan_out_seq[conn_id] = nxt
        return Envelope(seq=nxt, body=body)

    def _log(self, envelope):
        self.counters["received"] += 1
        self.receive_log.append((self.clock(), envelope))


def read_replay(data) -> list:
    """Parse exported JSONL back into [(ts, Envelope)]; raises CorruptLog."""
    if isinstance(data, (bytes, bytearray)):
        data = data.decode("utf-8")
    entries = []
    for line_no, line in enumerate(data.splitlines(), start=1):
        if not line.strip():
            raise CorruptLog(line_no, "blank line")
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorruptLog(line_no, f"not JSON: {exc}") from exc
        if not isinstance(obj, dict) or set(obj) != {"ts", "envelope"}:
            raise CorruptLog(line_no, 'expected {"ts", "envelope"}')
        if type(obj["ts"]) is not int:
            raise CorruptLog(line_no, "ts must be an integer")
        try:
            env = protocol.from_wire(obj["envelope"])
        except protocol.ProtocolError as exc:
            raise CorruptLog(line_no, str(exc)) from exc
        if entries and obj["ts"] < entries[-1][0]:
            raise CorruptLog(line_no, "timestamps must be non-decreasing")
        entries.append((obj["ts"], env))
    return entries


class ManualClock:
    """Settable millisecond clock for replay and simulation."""

    def __init__(self, now_ms=0):
        self.now_ms = now_ms

    def __call__(self) -> int:
        return self.now_ms

    def set(self, now_ms):
        self.now_ms = now_ms

    def advance(self, delta_ms):
        self.now_ms += delta_ms


def replay_into(sink, entries) -> SessionHub:
    """Re-drive logged traffic into a fresh hub attached to the given sink.

    Hellos re-create viewer connections (a reconnect in the log starts a new
    synthetic connection, so sequence tracking restarts with it); contexts
    and events are re-ingested at their logged timestamps. Delivery order to
    the sink reproduces the original session exactly.
    """
    clock = ManualClock()
    hub = SessionHub(clock)
    hub.attach_app_sink(sink)
    conn_serial = 0
    current_conn = {}
    for ts, env in entries:
        clock.set(ts)
        body = env.body
        if isinstance(body, Hello):
            conn_serial += 1
            conn_id = ("replay", body.user, conn_serial)
            hub.register(conn_id, env)
            current_conn[body.user] = conn_id
        elif isinstance(body, (ContextPayload, ViewerEvent)):
            conn_id = current_conn.get(body.user)
            if conn_id is None:
                raise CorruptLog(0, f"traffic from {body.user!r} before any hello")
            if isinstance(body, ContextPayload):
                hub.ingest_context(conn_id, env)
            else:
                hub.ingest_event(conn_id, env)
        else:
            raise CorruptLog(0, f"unexpected logged type {env.msg_type}")
    return hub
