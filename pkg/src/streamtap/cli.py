"""simcli: run deterministic scenarios, replay logs, or serve the relay.

    simcli run --scenario moving_camera --seed 7 --out report.json --log replay.jsonl
    simcli run --scenario my_scenario.json --assert
    simcli replay --log replay.jsonl --scenario moving_camera
    simcli serve --config config.toml

Exit codes: 0 success, 2 invalid scenario/log, 3 assertion-mode failure.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import os
import sys

from . import config as config_mod
from .apps import make_app
from .harness import (
    ScenarioInvalid,
    check_invariants,
    load_scenario,
    replay_log,
    run_scenario,
    scenario_app_settings,
)
from .relay import CorruptLog
from .scenarios import BUILTIN_SCENARIOS

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_ASSERT = 3


def _resolve_scenario(ref):
    """A path to a scenario JSON file, or the name of a built-in."""
    if os.path.exists(ref):
        return load_scenario(ref)
    if ref in BUILTIN_SCENARIOS:
        return BUILTIN_SCENARIOS[ref]
    raise ScenarioInvalid(
        f"{ref!r} is neither a file nor a built-in scenario "
        f"(built-ins: {', '.join(sorted(BUILTIN_SCENARIOS))})"
    )


def _cmd_run(args) -> int:
    try:
        scenario = _resolve_scenario(args.scenario)
        run = run_scenario(scenario, seed=args.seed)
    except ScenarioInvalid as exc:
        print(f"scenario invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID
    report = run.report
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(run.report_json())
        print(f"report -> {args.out}")
    if args.log:
        with open(args.log, "wb") as f:
            f.write(run.replay_log)
        print(f"replay log -> {args.log}")
    ev = report["events"]
    err = report["error_world_units"]
    print(
        f"{report['scenario']['name']}: sent={ev['sent']} admitted={ev['admitted']} "
        f"rejected={ev['rejected_total']} dropped={ev['dropped_total']}"
    )
    print(
        f"error (world units): compensated mean={err['compensated']['mean']:.4f} "
        f"p95={err['compensated']['p95']:.4f} | naive mean={err['naive']['mean']:.4f} "
        f"p95={err['naive']['p95']:.4f} over {err['samples']} samples"
    )
    if args.assert_invariants:
        violations = check_invariants(report, scenario=scenario)
        for v in violations:
            print(f"ASSERT FAIL: {v}", file=sys.stderr)
        if violations:
            return EXIT_ASSERT
        print("assertions: all invariants hold")
    return EXIT_OK


def _cmd_replay(args) -> int:
    app_kind = args.app_kind
    app_config = {}
    duration = args.duration_ms
    if args.scenario:
        try:
            scenario = _resolve_scenario(args.scenario)
        except ScenarioInvalid as exc:
            print(f"scenario invalid: {exc}", file=sys.stderr)
            return EXIT_INVALID
        app_kind, app_config = scenario_app_settings(scenario)
        if duration is None:
            duration = scenario["duration_ms"]
    if app_kind is None:
        print("replay needs --scenario or --app-kind", file=sys.stderr)
        return EXIT_INVALID
    try:
        with open(args.log, "rb") as f:
            log_data = f.read()
        state = replay_log(log_data, app_kind, app_config, duration_ms=duration)
    except CorruptLog as exc:
        print(f"corrupt log: {exc}", file=sys.stderr)
        return EXIT_INVALID
    state_json = json.dumps(state, sort_keys=True, separators=(",", ":"))
    print(state_json)
    if args.expect:
        with open(args.expect, encoding="utf-8") as f:
            expected = json.load(f)["final_state"]
        if json.dumps(expected, sort_keys=True, separators=(",", ":")) != state_json:
            print("ASSERT FAIL: replayed state differs from recorded final state", file=sys.stderr)
            return EXIT_ASSERT
        print("replayed state matches recorded final state", file=sys.stderr)
    return EXIT_OK


def _cmd_serve(args) -> int:
    cfg = config_mod.load_config(args.config) if args.config else {}
    host, port = config_mod.relay_settings(cfg)
    if args.port is not None:
        port = args.port
    kind, app_cfg = config_mod.app_settings(cfg)
    app = make_app(kind, app_cfg)
    from .server import serve_forever

    try:
        asyncio.run(serve_forever(host, port, app))
    except KeyboardInterrupt:
        pass
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="simcli", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a scenario on the virtual clock")
    run_p.add_argument("--scenario", required=True, help="scenario JSON path or built-in name")
    run_p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    run_p.add_argument("--out", help="write the metrics report JSON here")
    run_p.add_argument("--log", help="write the replay JSONL here")
    run_p.add_argument(
        "--assert", dest="assert_invariants", action="store_true",
        help="check harness invariants (exit 3 on violation)",
    )
    run_p.set_defaults(func=_cmd_run)

    replay_p = sub.add_parser("replay", help="re-drive a replay log and print final app state")
    replay_p.add_argument("--log", required=True)
    replay_p.add_argument("--scenario", help="scenario (file or built-in) the log came from")
    replay_p.add_argument("--app-kind", help="app kind when no scenario is given")
    replay_p.add_argument("--duration-ms", type=int, default=None)
    replay_p.add_argument("--expect", help="report JSON to compare the final state against")
    replay_p.set_defaults(func=_cmd_replay)

    serve_p = sub.add_parser("serve", help="start the websocket relay with an in-process app")
    serve_p.add_argument("--config", help="TOML or JSON config file")
    serve_p.add_argument("--port", type=int, default=None, help="override the configured port")
    serve_p.set_defaults(func=_cmd_serve)

    scenarios_p = sub.add_parser("scenarios", help="list built-in scenarios")
    scenarios_p.set_defaults(func=lambda args: print("\n".join(sorted(BUILTIN_SCENARIOS))) or EXIT_OK)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
