"""Admission control and funds economy for viewer events.

A fixed-order pipeline (ban list, role gate, per-user cooldown, global
cooldown) decides whether an event reaches the app; rejection is a value,
not a fault. Funds accrue continuously, either at a constant per-user rate
or from a shared pool split inversely by viewer count, and spends never
drive a balance negative.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

ROLE_EVERYONE = "everyone"
ROLE_SUBSCRIBER = "subscriber"
ROLE_VIP = "vip"
ROLE_MOD = "mod"
ROLES = (ROLE_EVERYONE, ROLE_SUBSCRIBER, ROLE_VIP, ROLE_MOD)

REJECT_BANNED = "banned"
REJECT_ROLE_GATE = "role_gate"
REJECT_USER_COOLDOWN = "user_cooldown"
REJECT_GLOBAL_COOLDOWN = "global_cooldown"

ACCRUAL_CONSTANT = "constant"
ACCRUAL_INVERSE_VIEWERS = "inverse_viewers"


class ClockRegression(Exception):
    """Accrual timestamp moved backwards."""


class InsufficientFunds(Exception):
    """Spend larger than the current balance; balance is left unchanged."""


@dataclass
class FundsAccount:
    user: str
    balance: float = 0.0
    last_accrual_ts_ms: int = 0


@dataclass(frozen=True)
class AccrualPolicy:
    """Funds accrual mode: a per-user rate, or a shared pool split by viewers."""

    kind: str
    rate_per_s: float

    def __post_init__(self):
        if self.kind not in (ACCRUAL_CONSTANT, ACCRUAL_INVERSE_VIEWERS):
            raise ValueError(f"unknown accrual kind {self.kind!r}")
        if self.rate_per_s <= 0:
            raise ValueError("accrual rate must be positive")

    @classmethod
    def constant(cls, rate_per_s):
        return cls(ACCRUAL_CONSTANT, rate_per_s)

    @classmethod
    def inverse_viewers(cls, pool_rate_per_s):
        return cls(ACCRUAL_INVERSE_VIEWERS, pool_rate_per_s)


def accrue(account: FundsAccount, policy: AccrualPolicy, viewer_count, now_ms, balance_cap=None):
    """Credit funds for the elapsed interval and advance the accrual clock."""
    if now_ms < account.last_accrual_ts_ms:
        raise ClockRegression(f"{now_ms} < {account.last_accrual_ts_ms}")
    if viewer_count < 1:
        raise ValueError("viewer_count must be >= 1")
    dt_s = (now_ms - account.last_accrual_ts_ms) / 1000.0
    if policy.kind == ACCRUAL_CONSTANT:
        account.balance += policy.rate_per_s * dt_s
    else:
        account.balance += (policy.rate_per_s / viewer_count) * dt_s
    if balance_cap is not None and account.balance > balance_cap:
        account.balance = balance_cap
    account.last_accrual_ts_ms = now_ms
    return account


def spend(account: FundsAccount, cost):
    """Debit the account, or raise InsufficientFunds leaving it unchanged."""
    if cost < 0:
        raise ValueError("cost must be >= 0")
    if cost > account.balance:
        raise InsufficientFunds(f"cost {cost} > balance {account.balance}")
    account.balance -= cost
    return account


@dataclass
class GateConfig:
    allowed_roles: frozenset = frozenset({ROLE_EVERYONE})
    cooldown_ms: int = 0
    global_cooldown_ms: int = 0
    banned: set = field(default_factory=set)

    def __post_init__(self):
        self.allowed_roles = frozenset(self.allowed_roles)
        unknown = self.allowed_roles - set(ROLES)
        if unknown:
            raise ValueError(f"unknown role(s) {sorted(unknown)}")
        if self.cooldown_ms < 0 or self.global_cooldown_ms < 0:
            raise ValueError("cooldowns must be >= 0")
        self.banned = set(self.banned)


class RoleTable:
    """username -> role; absent users default to 'everyone'."""

    def __init__(self, roles=None):
        self._roles = {}
        for user, role in (roles or {}).items():
            if role not in ROLES:
                raise ValueError(f"unknown role {role!r} for {user!r}")
            self._roles[user] = role

    def role_of(self, user) -> str:
        return self._roles.get(user, ROLE_EVERYONE)

    def set_role(self, user, role):
        if role not in ROLES:
            raise ValueError(f"unknown role {role!r}")
        self._roles[user] = role


@dataclass
class CooldownState:
    """Bookkeeping for admit: last admission per user and globally."""

    last_user_ms: dict = field(default_factory=dict)
    last_global_ms: int | None = None


def admit(user, gate: GateConfig, roles: RoleTable, state: CooldownState, now_ms):
    """Run the admission pipeline; None admits, otherwise the rejection reason.

    Checks run in fixed order: ban list, role gate, per-user cooldown, global
    cooldown. On admission both cooldown clocks restart at now_ms.
    """
    if user in gate.banned:
        return REJECT_BANNED
    if ROLE_EVERYONE not in gate.allowed_roles and roles.role_of(user) not in gate.allowed_roles:
        return REJECT_ROLE_GATE
    last = state.last_user_ms.get(user)
    if last is not None and gate.cooldown_ms > 0 and now_ms - last < gate.cooldown_ms:
        return REJECT_USER_COOLDOWN
    if (
        state.last_global_ms is not None
        and gate.global_cooldown_ms > 0
        and now_ms - state.last_global_ms < gate.global_cooldown_ms
    ):
        return REJECT_GLOBAL_COOLDOWN
    state.last_user_ms[user] = now_ms
    state.last_global_ms = now_ms
    return None


def load_roles(path) -> RoleTable:
    """Hot-reloadable roles file: {"username": "role", ...}."""
    with open(path, encoding="utf-8") as f:
        return RoleTable(json.load(f))


def load_bans(path) -> set:
    """Hot-reloadable ban file: ["username", ...]."""
    with open(path, encoding="utf-8") as f:
        return set(json.load(f))
