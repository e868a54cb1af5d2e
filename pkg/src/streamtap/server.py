"""Websocket front of the relay: one server socket, one hub, one app.

Every connection must hello first (viewer or app). All hub mutations happen
on the server's event loop, which serializes them; per-connection receive
loops keep each sender's messages in order, so delivery order follows the
hub's receive log. The bundled app runs in-process as the hub's sink and is
ticked either by an internal real-time task or externally (tests drive a
virtual clock).
"""

from __future__ import annotations

import asyncio
import time

import websockets

from . import protocol
from .protocol import AppUpdate, Envelope, Hello
from .relay import APP_INTERNAL, RelayError, SessionHub


def monotonic_ms() -> int:
    return time.monotonic_ns() // 1_000_000


class RelayServer:
    """Serves viewers (and optionally a remote app) over websockets."""

    def __init__(self, host, port, app=None, clock=monotonic_ms, auto_tick=True):
        self.host = host
        self.port = port
        self.clock = clock
        self.hub = SessionHub(clock)
        self.app = app
        self.auto_tick = auto_tick
        if app is not None:
            self.hub.attach_app_sink(app)
            if hasattr(app, "viewer_count"):
                app.viewer_count = self.hub.viewer_count
        self._server = None
        self._tick_task = None

    # -- lifecycle -----------------------------------------------------------

    async def start(self):
        self._server = await websockets.serve(self._handler, self.host, self.port)
        if self.app is not None and self.auto_tick:
            self._tick_task = asyncio.create_task(self._tick_loop())
        return self

    @property
    def bound_port(self) -> int:
        return self._server.sockets[0].getsockname()[1]

    async def stop(self):
        if self._tick_task:
            self._tick_task.cancel()
            try:
                await self._tick_task
            except asyncio.CancelledError:
                pass
        self._server.close()
        await self._server.wait_closed()

    async def _tick_loop(self):
        period = self.app.tick_period_ms
        start = self.clock()
        next_tick = start
        while True:
            self.tick_app(next_tick - start)
            await asyncio.sleep(period / 1000.0)
            next_tick += period

    def tick_app(self, now_ms):
        """Advance the app one tick and fan out whatever it emitted."""
        self.app.tick(now_ms)
        self.flush_app_updates()

    def flush_app_updates(self):
        for update in self.app.drain_updates():
            self.hub.push_app_update(APP_INTERNAL, update)
        self._send_outbox()

    # -- connection handling ----------------------------------------------------

    async def _handler(self, ws):
        registered = False
        try:
            async for raw in ws:
                try:
                    envelope = protocol.decode(raw)
                except protocol.MalformedMessage as exc:
                    await self._send_error(ws, "malformed", str(exc))
                    continue
                except protocol.InvariantViolation as exc:
                    await self._send_error(ws, "invariant", str(exc))
                    continue
                if not registered:
                    registered = await self._register(ws, envelope)
                    continue
                await self._dispatch(ws, envelope)
        except websockets.ConnectionClosed:
            pass
        finally:
            self.hub.unregister(ws)

    async def _register(self, ws, envelope) -> bool:
        if not isinstance(envelope.body, Hello):
            await self._send_error(ws, "not_registered", "hello must be the first frame")
            return False
        try:
            registration = self.hub.register(ws, envelope)
        except RelayError as exc:
            await self._send_error(ws, exc.code, str(exc))
            return False
        if registration.replaced_conn is not None:
            await registration.replaced_conn.close(code=1000, reason="username reconnected")
        return True

    async def _dispatch(self, ws, envelope):
        body = envelope.body
        try:
            if isinstance(body, protocol.ViewerEvent):
                self.hub.ingest_event(ws, envelope)
            elif isinstance(body, protocol.ContextPayload):
                self.hub.ingest_context(ws, envelope)
            elif isinstance(body, AppUpdate):
                self.hub.push_app_update(ws, body)
            else:
                await self._send_error(ws, "unexpected_type", f"cannot ingest {envelope.msg_type}")
                return
        except RelayError as exc:
            await self._send_error(ws, exc.code, str(exc))
            return
        await self._flush_outbox()

    # -- outbound ------------------------------------------------------------------

    async def _send_error(self, ws, code, detail):
        envelope = self.hub.make_error(ws, code, detail)
        try:
            await ws.send(protocol.encode(envelope).decode("utf-8"))
        except websockets.ConnectionClosed:
            pass

    async def _flush_outbox(self):
        for delivery in self.hub.take_outbox():
            try:
                await delivery.conn_id.send(protocol.encode(delivery.envelope).decode("utf-8"))
            except websockets.ConnectionClosed:
                pass

    def _send_outbox(self):
        # callable from sync context (tick); sends are scheduled, not awaited
        for delivery in self.hub.take_outbox():
            coro = delivery.conn_id.send(protocol.encode(delivery.envelope).decode("utf-8"))
            task = asyncio.ensure_future(coro)
            task.add_done_callback(_swallow_closed)


def _swallow_closed(task):
    exc = task.exception()
    if exc is not None and not isinstance(exc, websockets.ConnectionClosed):
        raise exc


async def serve_forever(host, port, app):
    server = RelayServer(host, port, app=app)
    await server.start()
    print(f"relay listening on ws://{host}:{server.bound_port} (app: {app.kind})")
    await asyncio.Future()
