"""Walkthrough: a full simulated deployment measuring compensation payoff.

Runs the built-in moving-camera scenario (relay + arena + synthetic viewers
on a virtual clock) and prints the intent-error comparison, then shows the
same scenario losing accuracy when resolution ignores latency.
"""

from streamtap.harness import run_scenario
from streamtap.scenarios import BUILTIN_SCENARIOS

for name in ("static_camera", "moving_camera", "off_phase", "beyond_horizon"):
    report = run_scenario(BUILTIN_SCENARIOS[name]).report
    ev = report["events"]
    err = report["error_world_units"]
    print(f"{name}")
    print(
        f"  events: sent {ev['sent']}, admitted {ev['admitted']}, "
        f"rejected {ev['rejected']}, dropped {ev['dropped']}"
    )
    print(
        f"  intent error (world units): compensated mean {err['compensated']['mean']:.3f} "
        f"p95 {err['compensated']['p95']:.3f} | naive mean {err['naive']['mean']:.3f} "
        f"p95 {err['naive']['p95']:.3f} ({err['samples']} samples)"
    )
print("\nsame runs, via CLI: simcli run --scenario moving_camera --assert")
