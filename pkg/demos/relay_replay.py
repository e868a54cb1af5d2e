"""Walkthrough: the relay hub pairing events with context, and log replay.

Two viewers connect, set panel context, and click; the hub stamps each event,
attaches the sender's context snapshot, and logs everything. The exported
JSONL replays into a fresh session with identical delivery.
"""

from streamtap.protocol import ContextPayload, Envelope, Hello, NormPoint, ViewerEvent
from streamtap.relay import ManualClock, SessionHub, read_replay, replay_into


class PrintingApp:
    def on_event(self, admitted):
        e = admitted.event
        print(
            f"  app got {e.kind} by {e.user} at t={admitted.server_ts_ms} "
            f"with context {admitted.context_snapshot}"
        )

    def on_context(self, user, data):
        print(f"  app got context update: {user} -> {data}")


clock = ManualClock()
hub = SessionHub(clock)
hub.attach_app_sink(PrintingApp())

hub.register("conn-alice", Envelope(seq=1, body=Hello("viewer", "alice")))
hub.register("conn-bob", Envelope(seq=1, body=Hello("viewer", "bob")))

clock.set(120)
hub.ingest_context("conn-alice", Envelope(seq=2, body=ContextPayload("alice", {"item": "zombie"})))

clock.set(500)
click = ViewerEvent("alice", "click", [NormPoint(0.7, 0.4)], [0], 800, 500)
hub.ingest_event("conn-alice", Envelope(seq=3, body=click))

clock.set(650)
click2 = ViewerEvent("bob", "click", [NormPoint(0.3, 0.3)], [0], 300, 650)
hub.ingest_event("conn-bob", Envelope(seq=2, body=click2))

log = hub.export_replay()
print("\nexported replay log:")
for line in log.decode().splitlines():
    print(f"  {line}")

print("\nreplaying into a fresh session:")
replay_into(PrintingApp(), read_replay(log))
