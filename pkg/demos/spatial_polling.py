"""Walkthrough: countdown polls over screen regions, and averaged ball flicks.

A 3x3 click poll collects votes (re-votes move, ties break low), then a
force round averages drag vectors per ball and applies the clamped impulse.
"""

from streamtap.aggregation import (
    ForceRound,
    PollRound,
    cast_vote,
    close_force,
    close_poll,
    grid_regions,
    prime_force,
)

grid = grid_regions(3, 3, 0.0, 0.0, 9.0, 9.0)
poll = PollRound(grid, deadline_ms=10_000)

votes = [
    ("alice", (4.5, 4.5)),   # center square
    ("bob", (4.2, 4.8)),     # center square
    ("carol", (7.5, 1.5)),   # top-right square
    ("alice", (1.5, 1.5)),   # alice reconsiders: vote moves
]
for user, point in votes:
    region = cast_vote(poll, user, point, now_ms=0)
    print(f"{user:>6} clicks {point} -> region {region}, counts now {poll.counts()}")

print(f"winner at deadline: region {close_poll(poll)}\n")

force = ForceRound(anchors=[(0.0, 0.0), (6.0, 0.0)], snap_radius=1.5, deadline_ms=10_000)
drags = [
    ("alice", [(0.2, 0.0), (2.2, 0.0)]),    # ball 0: pull right
    ("bob", [(0.1, 0.1), (0.1, 3.1)]),      # ball 0: pull down
    ("carol", [(6.0, 0.0), (6.0, -2.0)]),   # ball 1: pull up
]
for user, stroke in drags:
    anchor, vector = prime_force(force, user, stroke, now_ms=0)
    print(f"{user:>6} drags {stroke[0]} -> {stroke[-1]}: primes ball {anchor} with {vector}")

print(f"mean impulse per ball at close: {close_force(force)}")
