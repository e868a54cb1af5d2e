"""Walkthrough: resolving viewer clicks against the camera they actually saw.

A camera pans right at 5 world-units per 100 ms tick. A viewer watches the
stream 1 second behind and clicks a landmark as they see it. Resolving that
click against the live camera lands 50 units off target; resolving against
the buffered historical camera recovers the intent.
"""

from streamtap.compensation import CameraBuffer, CameraState, resolve, resolve_live
from streamtap.protocol import NormPoint, ViewerEvent
from streamtap.relay import AdmittedEvent

LATENCY_MS = 1000
EXTENT = (16.0, 8.0)

buffer = CameraBuffer()
filled_to = -1


def advance_to(now_ms):
    """Push camera snapshots up to the present, like the app tick loop."""
    global filled_to
    for tick in range(filled_to + 1, now_ms // 100 + 1):
        buffer.push_snapshot(
            CameraState(center=(5.0 * tick, 0.0), extent=EXTENT, snapshot_ts_ms=tick * 100)
        )
        filled_to = tick


print(f"camera: +5 units per tick, viewer latency {LATENCY_MS} ms\n")
print(f"{'click at':>9} {'viewer saw':>11} {'aimed at':>9} {'compensated':>12} {'naive':>8} {'naive err':>9}")

for t in (1500, 2000, 2500, 3000):
    advance_to(t)
    seen = buffer.lookup(t - LATENCY_MS)
    landmark_x = seen.center[0] + 4.0  # a fixed point visible on the viewer's frame
    norm_x = 0.5 + (landmark_x - seen.center[0]) / seen.extent[0]
    event = ViewerEvent("viewer1", "click", [NormPoint(norm_x, 0.5)], [0], LATENCY_MS, t)
    admitted = AdmittedEvent(event=event, context_snapshot={}, server_ts_ms=t)
    comp = resolve(buffer, admitted)[0]
    naive = resolve_live(buffer, admitted)[0]
    print(
        f"{t:>7}ms {seen.center[0]:>9.0f}x {landmark_x:>8.0f}x {comp[0]:>11.1f}x "
        f"{naive[0]:>7.1f}x {abs(naive[0] - landmark_x):>8.1f}"
    )

print("\nthe spinner a viewer sees while waiting equals their broadcast latency:")
from streamtap.compensation import spinner_duration

for latency in (200, 1500, 2000):
    print(f"  latency {latency} ms -> spinner {spinner_duration(latency)} ms")
