"""Broadcast-latency compensation against a time-shifted camera record.

A viewer reacts to the frame they currently see, which shows the app as it
was one broadcast delay ago. The app keeps a ring of timestamped viewport
snapshots (10 s at 100 ms cadence by default); each incoming event is resolved
against the snapshot nearest to server receive time minus the viewer's
reported latency, mapping its normalized video coordinates into world units.
World axes follow screen convention (x right, y down).
"""

from __future__ import annotations

import threading
from bisect import bisect_left
from dataclasses import dataclass

DEFAULT_CAPACITY = 100
DEFAULT_PERIOD_MS = 100


class CameraBufferError(Exception):
    """Base for camera-buffer failures."""


class NonMonotonicTimestamp(CameraBufferError):
    """Pushed snapshot does not advance the buffer clock."""


class StaleIntent(CameraBufferError):
    """Intent timestamp predates the oldest retained snapshot."""


@dataclass(frozen=True)
class CameraState:
    """One viewport snapshot: world-space center, visible extent, timestamp."""

    center: tuple
    extent: tuple
    snapshot_ts_ms: int

    def __post_init__(self):
        if not (self.extent[0] > 0 and self.extent[1] > 0):
            raise ValueError("camera extent must be positive")


class CameraBuffer:
    """Ring of CameraStates covering capacity*period_ms of history.

    Single writer (the app tick) pushes; concurrent readers may look up.
    """

    def __init__(self, capacity=DEFAULT_CAPACITY, period_ms=DEFAULT_PERIOD_MS):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = capacity
        self.period_ms = period_ms
        self._slots = []
        self._ts = []
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._slots)

    @property
    def latest_ts_ms(self):
        return self._ts[-1] if self._ts else None

    @property
    def oldest_ts_ms(self):
        return self._ts[0] if self._ts else None

    def push_snapshot(self, state: CameraState):
        with self._lock:
            if self._ts and state.snapshot_ts_ms <= self._ts[-1]:
                raise NonMonotonicTimestamp(
                    f"snapshot ts {state.snapshot_ts_ms} <= latest {self._ts[-1]}"
                )
            self._slots.append(state)
            self._ts.append(state.snapshot_ts_ms)
            if len(self._slots) > self.capacity:
                del self._slots[0]
                del self._ts[0]

    def lookup(self, intent_ts_ms) -> CameraState:
        """Return the snapshot nearest intent_ts_ms (ties toward the older slot).

        Intents newer than the buffer clamp to the latest slot; intents older
        than the retained horizon raise StaleIntent.
        """
        with self._lock:
            if not self._slots:
                raise ValueError("lookup on empty buffer")
            if intent_ts_ms < self._ts[0]:
                raise StaleIntent(
                    f"intent {intent_ts_ms} older than retained horizon (oldest {self._ts[0]})"
                )
            if intent_ts_ms >= self._ts[-1]:
                return self._slots[-1]
            i = bisect_left(self._ts, intent_ts_ms)
            if self._ts[i] == intent_ts_ms:
                return self._slots[i]
            # intent falls strictly between slots i-1 and i
            if intent_ts_ms - self._ts[i - 1] <= self._ts[i] - intent_ts_ms:
                return self._slots[i - 1]
            return self._slots[i]

    def latest(self) -> CameraState:
        with self._lock:
            if not self._slots:
                raise ValueError("latest on empty buffer")
            return self._slots[-1]


def project(cam: CameraState, point) -> tuple:
    """Map one normalized frame point onto world space under a camera state."""
    return (
        cam.center[0] + (point.x - 0.5) * cam.extent[0],
        cam.center[1] + (point.y - 0.5) * cam.extent[1],
    )


def resolve(buffer: CameraBuffer, event) -> list:
    """Resolve an admitted event's points against the camera the viewer saw.

    The intent timestamp is server receive time minus reported latency; all
    points of a gesture resolve against the single camera state at stroke
    start. Returns one world point per event point.
    """
    intent_ts = event.server_ts_ms - event.event.latency_ms
    cam = buffer.lookup(intent_ts)
    return [project(cam, p) for p in event.event.points]


def resolve_live(buffer: CameraBuffer, event) -> list:
    """Naive baseline: map against the live camera, ignoring latency."""
    cam = buffer.latest()
    return [project(cam, p) for p in event.event.points]


def spinner_duration(latency_ms) -> int:
    """Countdown shown at the interaction point; equals the broadcast latency."""
    if latency_ms < 0:
        raise ValueError("latency_ms must be >= 0")
    return latency_ms
