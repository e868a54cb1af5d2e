"""Config file loading for the relay server and apps (TOML or JSON).

Sections: [relay] host/port; [camera_buffer] capacity/period_ms; [policy]
gate settings plus optional roles_file/bans_file; [app] kind and kwargs.
Anything omitted falls back to defaults.
"""

from __future__ import annotations

import json

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover - version-dependent import
    import tomli as tomllib

from .policy import load_bans, load_roles

DEFAULT_PORT = 9870
DEFAULT_HOST = "127.0.0.1"


def load_config(path) -> dict:
    path = str(path)
    if path.endswith(".json"):
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    with open(path, "rb") as f:
        return tomllib.load(f)


def app_settings(config) -> tuple:
    """(kind, kwargs) for make_app from a loaded config dict."""
    app_cfg = dict(config.get("app", {}))
    kind = app_cfg.pop("kind", "canvas")
    camera = config.get("camera_buffer", {})
    if "capacity" in camera:
        app_cfg.setdefault("camera_capacity", camera["capacity"])
    if "period_ms" in camera:
        app_cfg.setdefault("tick_period_ms", camera["period_ms"])
    policy_cfg = dict(config.get("policy", {}))
    roles_file = policy_cfg.pop("roles_file", None)
    bans_file = policy_cfg.pop("bans_file", None)
    if roles_file:
        app_cfg["roles"] = {u: load_roles(roles_file).role_of(u) for u in _role_users(roles_file)}
    gate = {
        k: policy_cfg[k]
        for k in ("allowed_roles", "cooldown_ms", "global_cooldown_ms")
        if k in policy_cfg
    }
    if bans_file:
        gate["banned"] = sorted(load_bans(bans_file))
    if gate:
        app_cfg["gate"] = {**gate, **app_cfg.get("gate", {})}
    return kind, app_cfg


def _role_users(roles_file):
    with open(roles_file, encoding="utf-8") as f:
        return list(json.load(f))


def relay_settings(config) -> tuple:
    relay = config.get("relay", {})
    return relay.get("host", DEFAULT_HOST), relay.get("port", DEFAULT_PORT)
