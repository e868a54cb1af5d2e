"""Deterministic multi-viewer simulation on a virtual clock.

A scenario declares an app, a set of synthetic viewers (role, latency and
latency-report-error distributions, and a timed action script), and a
duration. Each viewer acts on the camera state it actually saw — the app's
frame one true-latency ago — and reports latency as truth plus sampled error,
so the run measures how well historical resolution recovers viewer intent
versus naively mapping against the live camera. Identical (scenario, seed)
pairs produce byte-identical reports.
"""

from __future__ import annotations

import json
import math
import random

from . import compensation
from .apps import make_app
from .compensation import StaleIntent
from .protocol import (
    ContextPayload,
    Envelope,
    Hello,
    KIND_CLICK,
    KIND_GESTURE,
    NormPoint,
    ViewerEvent,
)
from .relay import ManualClock, SessionHub, read_replay

DROP_OFF_SCREEN = "off_screen"

_DIST_KINDS = ("fixed", "uniform", "normal")


class ScenarioInvalid(Exception):
    """The scenario file violates its schema."""


def _validate_dist(d, where):
    if not isinstance(d, dict) or len(d) != 1:
        raise ScenarioInvalid(f"{where}: distribution must be one of {_DIST_KINDS}")
    kind, params = next(iter(d.items()))
    if kind == "fixed":
        if not isinstance(params, (int, float)):
            raise ScenarioInvalid(f"{where}: fixed takes one number")
    elif kind == "uniform":
        if not (isinstance(params, list) and len(params) == 2 and params[0] <= params[1]):
            raise ScenarioInvalid(f"{where}: uniform takes [lo, hi]")
    elif kind == "normal":
        if not (isinstance(params, list) and len(params) == 2 and params[1] >= 0):
            raise ScenarioInvalid(f"{where}: normal takes [mu, sigma]")
    else:
        raise ScenarioInvalid(f"{where}: unknown distribution {kind!r}")
    return d


def _sample(dist, rng) -> float:
    kind, params = next(iter(dist.items()))
    if kind == "fixed":
        return float(params)
    if kind == "uniform":
        return rng.uniform(params[0], params[1])
    return rng.gauss(params[0], params[1])


def _expand_script(script, where) -> list:
    actions = []
    for i, act in enumerate(script):
        if not isinstance(act, dict) or "at_ms" not in act or "do" not in act:
            raise ScenarioInvalid(f"{where}[{i}]: actions need at_ms and do")
        count = act.get("count", 1)
        every = act.get("every_ms", 0)
        if count > 1 and every <= 0:
            raise ScenarioInvalid(f"{where}[{i}]: count > 1 requires every_ms > 0")
        base = {k: v for k, v in act.items() if k not in ("count", "every_ms")}
        for k in range(count):
            expanded = dict(base)
            expanded["at_ms"] = act["at_ms"] + k * every
            actions.append(expanded)
    if any(b["at_ms"] < a["at_ms"] for a, b in zip(actions, actions[1:])):
        raise ScenarioInvalid(f"{where}: script must be sorted by at_ms")
    return actions


def validate_scenario(obj) -> dict:
    """Normalize and check a scenario object; returns the validated copy."""
    if not isinstance(obj, dict):
        raise ScenarioInvalid("scenario must be an object")
    out = {
        "name": obj.get("name", "unnamed"),
        "seed": obj.get("seed", 0),
        "duration_ms": obj.get("duration_ms"),
        "app": dict(obj.get("app") or {}),
        "landmarks": {k: tuple(v) for k, v in (obj.get("landmarks") or {}).items()},
        "viewers": [],
    }
    if not isinstance(out["duration_ms"], int) or out["duration_ms"] <= 0:
        raise ScenarioInvalid("duration_ms must be a positive integer")
    if "kind" not in out["app"]:
        raise ScenarioInvalid("app.kind is required")
    viewers = obj.get("viewers")
    if not isinstance(viewers, list) or not viewers:
        raise ScenarioInvalid("at least one viewer is required")
    seen_users = set()
    for i, v in enumerate(viewers):
        where = f"viewers[{i}]"
        user = v.get("user")
        if not user or not isinstance(user, str):
            raise ScenarioInvalid(f"{where}: user is required")
        if user in seen_users:
            raise ScenarioInvalid(f"{where}: duplicate user {user!r}")
        seen_users.add(user)
        out["viewers"].append(
            {
                "user": user,
                "role": v.get("role", "everyone"),
                "latency_ms": _validate_dist(v.get("latency_ms", {"fixed": 0}), f"{where}.latency_ms"),
                "report_error_ms": _validate_dist(
                    v.get("report_error_ms", {"fixed": 0}), f"{where}.report_error_ms"
                ),
                "script": _expand_script(v.get("script", []), f"{where}.script"),
            }
        )
    return out


def load_scenario(path) -> dict:
    with open(path, encoding="utf-8") as f:
        try:
            obj = json.load(f)
        except json.JSONDecodeError as exc:
            raise ScenarioInvalid(f"scenario is not valid JSON: {exc}") from exc
    return validate_scenario(obj)


class _SyntheticViewer:
    """Wire-level actor: samples latencies, aims from its delayed view."""

    def __init__(self, index, cfg, rng_seed):
        self.index = index
        self.user = cfg["user"]
        self.role = cfg["role"]
        self.latency_dist = cfg["latency_ms"]
        self.error_dist = cfg["report_error_ms"]
        self.script = cfg["script"]
        self.rng = random.Random(rng_seed)
        self.seq = 0

    def next_seq(self) -> int:
        self.seq += 1
        return self.seq

    def sample_latency(self) -> int:
        return max(0, int(round(_sample(self.latency_dist, self.rng))))

    def sample_reported(self, true_latency) -> int:
        return max(0, int(round(true_latency + _sample(self.error_dist, self.rng))))


def scenario_app_settings(scenario) -> tuple:
    """(kind, make_app kwargs) with viewer roles folded into the app config.

    Replaying a scenario's log must build the same app, so this is the single
    place the app configuration is derived.
    """
    app_cfg = dict(scenario["app"])
    kind = app_cfg.pop("kind")
    roles_cfg = dict(app_cfg.get("roles", {}))
    for v in scenario.get("viewers", []):
        if v.get("role", "everyone") != "everyone":
            roles_cfg[v["user"]] = v["role"]
    if roles_cfg:
        app_cfg["roles"] = roles_cfg
    return kind, app_cfg


class SimulationRun:
    """One executed scenario: report, replay log, and final app state."""

    def __init__(self, report, replay_log, app):
        self.report = report
        self.replay_log = replay_log
        self.app = app

    def report_json(self) -> str:
        return json.dumps(self.report, sort_keys=True, separators=(",", ":"))


def _norm_from_world(world, cam):
    nx = 0.5 + (world[0] - cam.center[0]) / cam.extent[0]
    ny = 0.5 + (world[1] - cam.center[1]) / cam.extent[1]
    return nx, ny


def _percentile95(sorted_values):
    if not sorted_values:
        return 0.0
    rank = max(0, math.ceil(0.95 * len(sorted_values)) - 1)
    return sorted_values[rank]


def run_scenario(scenario, seed=None) -> SimulationRun:
    """Execute a validated scenario on the virtual clock."""
    scenario = validate_scenario(scenario)
    master_seed = scenario["seed"] if seed is None else seed
    duration = scenario["duration_ms"]
    period = scenario["app"].get("tick_period_ms", 100)

    clock = ManualClock()
    hub = SessionHub(clock)
    kind, app_cfg = scenario_app_settings(scenario)
    app = make_app(kind, app_cfg, viewer_count=hub.viewer_count)
    hub.attach_app_sink(app)

    seed_rng = random.Random(master_seed)
    viewers = [
        _SyntheticViewer(i, cfg, seed_rng.randrange(2**63))
        for i, cfg in enumerate(scenario["viewers"])
    ]

    conn_of = {}
    for v in viewers:
        conn_id = ("sim", v.user)
        hub.register(conn_id, Envelope(seq=v.next_seq(), body=Hello("viewer", v.user)))
        conn_of[v.user] = conn_id

    # merged timeline: ticks before actions at the same timestamp
    timeline = [(t, 0, None, None) for t in range(0, duration + 1, period)]
    for v in viewers:
        for j, act in enumerate(v.script):
            if act["at_ms"] > duration:
                raise ScenarioInvalid(f"action at {act['at_ms']} beyond duration {duration}")
            timeline.append((act["at_ms"], 1, v.index, j))
    timeline.sort(key=lambda item: (item[0], item[1], item[2] if item[2] is not None else -1, item[3] or 0))

    ball_history = []
    tallies = {"sent": 0, "admitted": 0, "rejected": {}, "dropped": {}}
    contexts_sent = 0
    per_event = []
    comp_errors = []
    naive_errors = []

    def drop(reason):
        tallies["dropped"][reason] = tallies["dropped"].get(reason, 0) + 1

    def reject(reason):
        tallies["rejected"][reason] = tallies["rejected"].get(reason, 0) + 1

    for ts, phase, vi, ai in timeline:
        clock.set(ts)
        if phase == 0:
            app.tick(ts)
            if hasattr(app, "positions"):
                ball_history.append((ts, [tuple(p) for p in app.positions]))
            continue

        v = viewers[vi]
        act = v.script[ai]
        if act["do"] == "context":
            hub.ingest_context(
                conn_of[v.user],
                Envelope(seq=v.next_seq(), body=ContextPayload(v.user, act.get("data", {}))),
            )
            contexts_sent += 1
            continue

        true_latency = v.sample_latency()
        reported = v.sample_reported(true_latency)
        seen_ts = max(0, ts - true_latency)
        cam_seen = app.seen_camera(seen_ts)

        if act["do"] == "draw":
            path = act.get("path")
            if not path or len(path) < 2:
                raise ScenarioInvalid("draw actions need a path of >= 2 world points")
            world_pts = [(float(x), float(y)) for x, y in path]
            intended = world_pts[0]
            kind_str = KIND_GESTURE
        else:
            intended = _resolve_target(act, scenario, app, cam_seen, ball_history, seen_ts)
            if intended is None:
                drop("bad_target")
                tallies["sent"] += 1
                continue
            if act["do"] == "click":
                world_pts = [intended]
                kind_str = KIND_CLICK
            elif act["do"] == "drag":
                vec = act.get("vector")
                if vec is None:
                    raise ScenarioInvalid("drag actions need a vector")
                steps = max(2, act.get("points", 2))
                world_pts = [
                    (
                        intended[0] + vec[0] * k / (steps - 1),
                        intended[1] + vec[1] * k / (steps - 1),
                    )
                    for k in range(steps)
                ]
                kind_str = KIND_GESTURE
            else:
                raise ScenarioInvalid(f"unknown action {act['do']!r}")

        norm_pts = [_norm_from_world(w, cam_seen) for w in world_pts]
        tallies["sent"] += 1
        if any(not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0) for x, y in norm_pts):
            drop(DROP_OFF_SCREEN)
            continue

        offsets = [k * 16 for k in range(len(norm_pts))]
        event = ViewerEvent(
            user=v.user,
            kind=kind_str,
            points=[NormPoint(x, y) for x, y in norm_pts],
            point_offsets_ms=offsets,
            latency_ms=reported,
            client_ts_ms=ts,
        )
        admitted = hub.ingest_event(conn_of[v.user], Envelope(seq=v.next_seq(), body=event))
        outcome = app.event_log[-1]["outcome"]
        if outcome == "ok":
            tallies["admitted"] += 1
        else:
            reject(outcome)

        record = {
            "ts": ts,
            "user": v.user,
            "do": act["do"],
            "outcome": outcome,
            "true_latency_ms": true_latency,
            "reported_latency_ms": reported,
            "intended": list(intended),
            "compensated": None,
            "naive": None,
        }
        try:
            comp_pt = compensation.resolve(app.camera, admitted)[0]
            naive_pt = compensation.resolve_live(app.camera, admitted)[0]
            record["compensated"] = list(comp_pt)
            record["naive"] = list(naive_pt)
            comp_errors.append(math.dist(comp_pt, intended))
            naive_errors.append(math.dist(naive_pt, intended))
        except StaleIntent:
            pass
        per_event.append(record)

    rejected_total = sum(tallies["rejected"].values())
    dropped_total = sum(tallies["dropped"].values())
    report = {
        "scenario": {
            "name": scenario["name"],
            "seed": master_seed,
            "duration_ms": duration,
            "app": scenario["app"],
            "viewers": len(viewers),
        },
        "events": {
            "sent": tallies["sent"],
            "admitted": tallies["admitted"],
            "rejected": dict(sorted(tallies["rejected"].items())),
            "rejected_total": rejected_total,
            "dropped": dict(sorted(tallies["dropped"].items())),
            "dropped_total": dropped_total,
            "reconciled": tallies["sent"] == tallies["admitted"] + rejected_total + dropped_total,
        },
        "contexts": {"sent": contexts_sent},
        "error_world_units": {
            "samples": len(comp_errors),
            "compensated": _error_stats(comp_errors),
            "naive": _error_stats(naive_errors),
        },
        "per_event": per_event,
        "final_state": app.state_snapshot(),
    }
    return SimulationRun(report, hub.export_replay(), app)


def _error_stats(errors):
    if not errors:
        return {"mean": 0.0, "p95": 0.0, "max": 0.0}
    ordered = sorted(errors)
    return {
        "mean": sum(errors) / len(errors),
        "p95": _percentile95(ordered),
        "max": ordered[-1],
    }


def _resolve_target(act, scenario, app, cam_seen, ball_history, seen_ts):
    """World point the viewer is aiming at, from its delayed perspective."""
    target = act.get("target", "center")
    if isinstance(target, (list, tuple)):
        return (float(target[0]), float(target[1]))
    if target == "center":
        return cam_seen.center
    if target.startswith("landmark:"):
        name = target.split(":", 1)[1]
        if name not in scenario["landmarks"]:
            raise ScenarioInvalid(f"unknown landmark {name!r}")
        return scenario["landmarks"][name]
    if target.startswith("region:"):
        idx = int(target.split(":", 1)[1])
        region_map = getattr(app, "region_map", None)
        if region_map is None or idx >= len(region_map):
            return None
        return region_map.regions[idx].center()
    if target.startswith("ball:"):
        idx = int(target.split(":", 1)[1])
        seen = None
        for ts, positions in ball_history:
            if ts <= seen_ts:
                seen = positions
            else:
                break
        if seen is None or idx >= len(seen):
            return None
        return seen[idx]
    raise ScenarioInvalid(f"unknown target {target!r}")


def check_invariants(report, scenario=None) -> list:
    """Cross-check a report against the harness laws; returns violations.

    Laws: event counts reconcile; with a static camera compensated and naive
    errors agree exactly; with a moving camera and mean latency beyond one
    tick period, compensated mean error stays strictly below naive mean
    error. When the scenario is supplied, the run is repeated to confirm the
    report is a pure function of (scenario, seed).
    """
    violations = []
    ev = report["events"]
    if not ev["reconciled"]:
        violations.append(
            f"sent {ev['sent']} != admitted {ev['admitted']} + rejected {ev['rejected_total']}"
            f" + dropped {ev['dropped_total']}"
        )
    err = report["error_world_units"]
    vel = report["scenario"]["app"].get("streamer_velocity", (0.0, 0.0))
    speed = math.hypot(vel[0], vel[1])
    period = report["scenario"]["app"].get("tick_period_ms", 100)
    resolved = [e for e in report["per_event"] if e["compensated"] is not None]
    if resolved and err["samples"]:
        mean_latency = sum(e["true_latency_ms"] for e in resolved) / len(resolved)
        if speed == 0.0:
            if err["compensated"]["mean"] != err["naive"]["mean"]:
                violations.append("static camera but compensated mean != naive mean")
        elif mean_latency > period:
            if not err["compensated"]["mean"] < err["naive"]["mean"]:
                violations.append(
                    f"moving camera: compensated mean {err['compensated']['mean']}"
                    f" not < naive mean {err['naive']['mean']}"
                )
    if scenario is not None:
        again = run_scenario(scenario, seed=report["scenario"]["seed"])
        if again.report_json() != json.dumps(report, sort_keys=True, separators=(",", ":")):
            violations.append("re-run with identical (scenario, seed) produced a different report")
    return violations


def replay_log(log_data, app_kind, app_config=None, duration_ms=None) -> dict:
    """Re-drive an exported log through a fresh hub + app; final state dict.

    Ticks run at the app period from 0 through duration_ms (defaulting to the
    last logged timestamp rounded up to a tick), interleaved with the logged
    traffic exactly as the live session interleaved them.
    """
    entries = read_replay(log_data) if isinstance(log_data, (bytes, bytearray, str)) else log_data
    clock = ManualClock()
    hub = SessionHub(clock)
    app_cfg = dict(app_config or {})
    app_cfg.pop("kind", None)
    app = make_app(app_kind, app_cfg, viewer_count=hub.viewer_count)
    hub.attach_app_sink(app)

    period = app.tick_period_ms
    last_ts = entries[-1][0] if entries else 0
    if duration_ms is None:
        duration_ms = ((last_ts + period - 1) // period) * period
    ticks = list(range(0, duration_ms + 1, period))

    conn_serial = 0
    current_conn = {}
    ti = 0
    for ts, env in entries:
        while ti < len(ticks) and ticks[ti] <= ts:
            clock.set(ticks[ti])
            app.tick(ticks[ti])
            ti += 1
        clock.set(ts)
        body = env.body
        if isinstance(body, Hello):
            conn_serial += 1
            conn_id = ("replay", body.user, conn_serial)
            hub.register(conn_id, env)
            current_conn[body.user] = conn_id
        elif isinstance(body, ContextPayload):
            hub.ingest_context(current_conn[body.user], env)
        else:
            hub.ingest_event(current_conn[body.user], env)
    while ti < len(ticks):
        clock.set(ticks[ti])
        app.tick(ticks[ti])
        ti += 1
    return app.state_snapshot()
