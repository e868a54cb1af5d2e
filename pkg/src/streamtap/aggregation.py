"""Countdown-scoped aggregation of spatial inputs.

Two reducers: region vote tallying (click polls over a set of world-space
rectangles, one vote per username, last intent wins unless the round locks
first votes) and drag-vector force averaging (strokes prime a per-anchor
impulse; at close each anchor gets the arithmetic mean of its primed
vectors). Rounds are owned by a single event loop; operations mutate the
round in place and leave it untouched when they reject.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


class RoundClosed(Exception):
    """Cast or prime attempted at/after the round deadline."""


class NoVotes(Exception):
    """Poll closed with no votes cast."""


class NoAnchor(Exception):
    """Stroke started farther than snap_radius from every anchor."""


@dataclass(frozen=True)
class Rect:
    """Axis-aligned world-space rectangle, half-open: [x0, x1) x [y0, y1).

    Half-open edges keep adjacent grid cells disjoint, so a click on a shared
    border belongs to exactly one region.
    """

    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self):
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise ValueError("rectangle must have positive width and height")

    def contains(self, point) -> bool:
        return self.x0 <= point[0] < self.x1 and self.y0 <= point[1] < self.y1

    def center(self) -> tuple:
        return ((self.x0 + self.x1) / 2.0, (self.y0 + self.y1) / 2.0)

    def overlaps(self, other) -> bool:
        return (
            self.x0 < other.x1
            and other.x0 < self.x1
            and self.y0 < other.y1
            and other.y0 < self.y1
        )


class RegionMap:
    """Ordered, non-overlapping rectangles indexed 0..n-1."""

    def __init__(self, regions):
        regions = tuple(regions)
        if not regions:
            raise ValueError("a region map needs at least one region")
        for i, a in enumerate(regions):
            for b in regions[i + 1 :]:
                if a.overlaps(b):
                    raise ValueError("regions may not overlap")
        self.regions = regions

    def __len__(self):
        return len(self.regions)

    def locate(self, point):
        """Index of the region containing the point, or None."""
        for i, r in enumerate(self.regions):
            if r.contains(point):
                return i
        return None


def grid_regions(rows, cols, x0, y0, x1, y1) -> RegionMap:
    """Split a world rectangle into a rows x cols grid, row-major indexing."""
    w = (x1 - x0) / cols
    h = (y1 - y0) / rows
    cells = []
    for r in range(rows):
        for c in range(cols):
            cells.append(Rect(x0 + c * w, y0 + r * h, x0 + (c + 1) * w, y0 + (r + 1) * h))
    return RegionMap(cells)


@dataclass
class PollRound:
    region_map: RegionMap
    deadline_ms: int
    lock_first: bool = False
    votes: dict = field(default_factory=dict)

    def counts(self) -> list:
        tally = [0] * len(self.region_map)
        for region in self.votes.values():
            tally[region] += 1
        return tally


def cast_vote(round_: PollRound, user, point, now_ms):
    """Register (or move) a user's vote to the region containing the point.

    Returns the region index, or None when the point missed every region
    (the round is left unchanged).
    """
    if now_ms >= round_.deadline_ms:
        raise RoundClosed(f"poll closed at {round_.deadline_ms}")
    region = round_.region_map.locate(point)
    if region is None:
        return None
    if round_.lock_first and user in round_.votes:
        return round_.votes[user]
    round_.votes[user] = region
    return region


def close_poll(round_: PollRound) -> int:
    """Winning region index; ties break toward the lowest index."""
    counts = round_.counts()
    best = max(counts)
    if best == 0:
        raise NoVotes("no votes were cast")
    return counts.index(best)


@dataclass
class ForceRound:
    anchors: tuple
    snap_radius: float
    deadline_ms: int
    primes: dict = field(default_factory=dict)

    def __post_init__(self):
        self.anchors = tuple(tuple(a) for a in self.anchors)
        if self.snap_radius <= 0:
            raise ValueError("snap_radius must be positive")


def prime_force(round_: ForceRound, user, stroke_world, now_ms):
    """Prime a force from a world-space drag stroke, replacing any prior prime.

    The anchor is the nearest one to the stroke start within snap_radius; the
    vector is stroke end minus stroke start. Returns (anchor index, vector).
    """
    if now_ms >= round_.deadline_ms:
        raise RoundClosed(f"force round closed at {round_.deadline_ms}")
    stroke_world = list(stroke_world)
    if len(stroke_world) < 2:
        raise ValueError("a force stroke needs at least two points")
    sx, sy = stroke_world[0]
    best_i = None
    best_d = math.inf
    for i, (ax, ay) in enumerate(round_.anchors):
        d = math.hypot(sx - ax, sy - ay)
        if d < best_d:
            best_d = d
            best_i = i
    if best_d > round_.snap_radius:
        raise NoAnchor(f"stroke start ({sx}, {sy}) beyond snap radius of every anchor")
    ex, ey = stroke_world[-1]
    prime = (best_i, (ex - sx, ey - sy))
    round_.primes[user] = prime
    return prime


def close_force(round_: ForceRound) -> list:
    """Per-anchor arithmetic mean of primed vectors; zero where none primed."""
    sums = [(0.0, 0.0) for _ in round_.anchors]
    counts = [0] * len(round_.anchors)
    for anchor, (vx, vy) in round_.primes.values():
        sx, sy = sums[anchor]
        sums[anchor] = (sx + vx, sy + vy)
        counts[anchor] += 1
    return [
        (sx / n, sy / n) if n else (0.0, 0.0)
        for (sx, sy), n in zip(sums, counts)
    ]
