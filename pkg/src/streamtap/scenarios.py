"""Built-in scenarios: intent-matching oracles and per-app demos.

The oracle scenarios are constructed so their expected outcomes have closed
forms: a static camera makes compensated and naive resolution identical; a
camera panning 5 world-units per tick with a fixed, exactly-reported 1000 ms
latency puts every naive resolution exactly 50 units off while tick-aligned
clicks resolve exactly. Viewers always click the center of the frame they
see, so intent is the seen camera center.
"""

from __future__ import annotations


def _clicker(user, latency, start_ms, every_ms, count, item="crate", report_error=None):
    return {
        "user": user,
        "latency_ms": latency,
        "report_error_ms": report_error or {"fixed": 0},
        "script": [
            {"at_ms": 200, "do": "context", "data": {"item": item}},
            {"at_ms": start_ms, "do": "click", "target": "center", "every_ms": every_ms, "count": count},
        ],
    }


STATIC_CAMERA = {
    "name": "static_camera",
    "seed": 101,
    "duration_ms": 20_000,
    "app": {
        "kind": "arena",
        "streamer_velocity": [0.0, 0.0],
        "extent": [16.0, 8.0],
        "starting_balance": 1000.0,
        "accrual": {"kind": "constant", "rate_per_s": 5.0},
    },
    "viewers": [
        _clicker("alice", {"fixed": 700}, 1000, 500, 34),
        _clicker("bob", {"uniform": [200, 2000]}, 2100, 500, 34),
        _clicker("carol", {"normal": [900, 150]}, 2200, 500, 34),
    ],
}

MOVING_CAMERA = {
    "name": "moving_camera",
    "seed": 202,
    "duration_ms": 15_000,
    "app": {
        "kind": "arena",
        "streamer_velocity": [5.0, 0.0],
        "extent": [16.0, 8.0],
        "starting_balance": 5000.0,
        "accrual": {"kind": "constant", "rate_per_s": 5.0},
    },
    "viewers": [
        _clicker("alice", {"fixed": 1000}, 2000, 100, 65),
        _clicker("bob", {"fixed": 1000}, 2050, 100, 65),
    ],
}

OFF_PHASE = {
    "name": "off_phase",
    "seed": 303,
    "duration_ms": 30_000,
    "app": {
        "kind": "arena",
        "streamer_velocity": [3.0, 1.0],
        "extent": [24.0, 12.0],
        "starting_balance": 5000.0,
        "accrual": {"kind": "constant", "rate_per_s": 5.0},
    },
    "viewers": [
        _clicker("alice", {"uniform": [200, 2000]}, 3000, 137, 100, report_error={"normal": [233, 66]}),
        _clicker("bob", {"uniform": [200, 2000]}, 3007, 211, 80, report_error={"normal": [233, 66]}),
    ],
}

BEYOND_HORIZON = {
    "name": "beyond_horizon",
    "seed": 404,
    "duration_ms": 14_000,
    "app": {
        "kind": "arena",
        "streamer_velocity": [5.0, 0.0],
        "extent": [16.0, 8.0],
        "starting_balance": 1000.0,
    },
    "viewers": [
        _clicker("alice", {"fixed": 12_000}, 500, 500, 27),
        _clicker("bob", {"fixed": 12_000}, 700, 500, 27),
    ],
}

POLL_DEMO = {
    "name": "poll_demo",
    "seed": 505,
    "duration_ms": 30_000,
    "app": {
        "kind": "poll",
        "rows": 3,
        "cols": 3,
        "board": [-4.5, -4.5, 4.5, 4.5],
        "extent": [12.0, 12.0],
        "round_duration_ms": 8_000,
        "gap_ms": 2_000,
    },
    "viewers": [
        {
            "user": "alice",
            "latency_ms": {"fixed": 600},
            "script": [
                {"at_ms": 2_000, "do": "click", "target": "region:4"},
                {"at_ms": 12_000, "do": "click", "target": "region:0"},
                {"at_ms": 22_000, "do": "click", "target": "region:8"},
            ],
        },
        {
            "user": "bob",
            "latency_ms": {"uniform": [200, 1500]},
            "script": [
                {"at_ms": 3_000, "do": "click", "target": "region:4"},
                {"at_ms": 13_000, "do": "click", "target": "region:2"},
                {"at_ms": 23_000, "do": "click", "target": "region:8"},
            ],
        },
        {
            "user": "carol",
            "latency_ms": {"fixed": 1200},
            "script": [
                {"at_ms": 4_000, "do": "click", "target": "region:4"},
                {"at_ms": 14_000, "do": "click", "target": "region:0"},
                {"at_ms": 24_000, "do": "click", "target": [99.0, 99.0]},
            ],
        },
    ],
}

FORCE_DEMO = {
    "name": "force_demo",
    "seed": 606,
    "duration_ms": 20_000,
    "app": {
        "kind": "force",
        "balls": [[-3.0, 0.0], [3.0, 0.0]],
        "snap_radius": 1.5,
        "round_duration_ms": 5_000,
        "gap_ms": 1_000,
        "max_impulse": 10.0,
        "extent": [16.0, 8.0],
    },
    "viewers": [
        {
            "user": "alice",
            "latency_ms": {"fixed": 800},
            "script": [
                {"at_ms": 2_000, "do": "drag", "target": "ball:0", "vector": [2.0, 0.0]},
                {"at_ms": 8_000, "do": "drag", "target": "ball:1", "vector": [0.0, 1.5]},
                {"at_ms": 14_000, "do": "drag", "target": "ball:0", "vector": [-1.0, 1.0]},
            ],
        },
        {
            "user": "bob",
            "latency_ms": {"fixed": 400},
            "script": [
                {"at_ms": 2_500, "do": "drag", "target": "ball:0", "vector": [0.0, 2.0]},
                {"at_ms": 8_500, "do": "drag", "target": "ball:1", "vector": [3.0, 0.0]},
            ],
        },
    ],
}

CANVAS_DEMO = {
    "name": "canvas_demo",
    "seed": 707,
    "duration_ms": 10_000,
    "app": {"kind": "canvas", "extent": [16.0, 9.0], "gesture_commands": True},
    "landmarks": {"sketch": [-2.0, -1.0]},
    "viewers": [
        {
            "user": "alice",
            "latency_ms": {"fixed": 500},
            "script": [
                {"at_ms": 500, "do": "context", "data": {"color": "blue"}},
                {"at_ms": 1_000, "do": "drag", "target": "landmark:sketch", "vector": [1.5, 0.5], "points": 6},
                {"at_ms": 2_000, "do": "drag", "target": [0.0, 0.0], "vector": [0.5, 2.0], "points": 6},
                {"at_ms": 3_000, "do": "context", "data": {"command": "undo"}},
                # a ">" chevron: recognized and broadcast when decoding is on
                {"at_ms": 4_000, "do": "draw", "path": [[2.0, -1.0], [3.0, 0.0], [2.0, 1.0]]},
            ],
        },
        {
            "user": "bob",
            "latency_ms": {"fixed": 900},
            "script": [
                {"at_ms": 1_500, "do": "context", "data": {"color": "red"}},
                {"at_ms": 2_500, "do": "drag", "target": [1.0, 1.0], "vector": [-2.0, 0.5], "points": 5},
                {"at_ms": 5_000, "do": "context", "data": {"command": "clear"}},
            ],
        },
    ],
}

BUILTIN_SCENARIOS = {
    s["name"]: s
    for s in (
        STATIC_CAMERA,
        MOVING_CAMERA,
        OFF_PHASE,
        BEYOND_HORIZON,
        POLL_DEMO,
        FORCE_DEMO,
        CANVAS_DEMO,
    )
}
