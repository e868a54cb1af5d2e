"""Headless reference applications and their factory."""

from __future__ import annotations

from ..policy import AccrualPolicy, GateConfig, RoleTable
from .arena import ArenaApp
from .base import BaseApp
from .canvas import CanvasApp
from .force import ForceApp
from .poll import PollApp

APP_KINDS = {
    "canvas": CanvasApp,
    "arena": ArenaApp,
    "poll": PollApp,
    "force": ForceApp,
}


def build_gate(cfg) -> GateConfig:
    return GateConfig(
        allowed_roles=frozenset(cfg.get("allowed_roles", ["everyone"])),
        cooldown_ms=cfg.get("cooldown_ms", 0),
        global_cooldown_ms=cfg.get("global_cooldown_ms", 0),
        banned=set(cfg.get("banned", [])),
    )


def build_accrual(cfg) -> AccrualPolicy:
    kind = cfg.get("kind", "inverse_viewers")
    rate = cfg.get("rate_per_s", 10.0)
    if kind == "constant":
        return AccrualPolicy.constant(rate)
    if kind == "inverse_viewers":
        return AccrualPolicy.inverse_viewers(rate)
    raise ValueError(f"unknown accrual kind {kind!r}")


def make_app(kind, config=None, viewer_count=None) -> BaseApp:
    """Build an app from a plain config table (the `app` section of a file)."""
    config = dict(config or {})
    config.pop("kind", None)
    cls = APP_KINDS.get(kind)
    if cls is None:
        raise ValueError(f"unknown app kind {kind!r}; expected one of {sorted(APP_KINDS)}")
    kw = dict(config)
    if "gate" in kw:
        kw["gate"] = build_gate(kw["gate"])
    if "roles" in kw:
        kw["roles"] = RoleTable(kw["roles"])
    if kind == "arena":
        if "accrual" in kw:
            kw["accrual"] = build_accrual(kw["accrual"])
        if viewer_count is not None:
            kw["viewer_count"] = viewer_count
    for tuple_key in ("extent", "center", "streamer_velocity", "board"):
        if tuple_key in kw:
            kw[tuple_key] = tuple(kw[tuple_key])
    if "balls" in kw:
        kw["balls"] = tuple(tuple(b) for b in kw["balls"])
    if "options" in kw:
        kw["options"] = [tuple(o) for o in kw["options"]]
    return cls(**kw)


__all__ = [
    "APP_KINDS",
    "ArenaApp",
    "BaseApp",
    "CanvasApp",
    "ForceApp",
    "PollApp",
    "build_accrual",
    "build_gate",
    "make_app",
]
