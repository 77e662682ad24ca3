"""Resource budget resolution, overridable via the ISET_BUDGET environment variable."""

from __future__ import annotations

import os

from .errors import DomainError

BUDGET_ENV_VAR = "ISET_BUDGET"


def resolve_budget(explicit: int | None, fallback: int) -> int:
    """Explicit value if given, else the environment override, else the fallback."""
    if explicit is not None:
        return explicit
    raw = os.environ.get(BUDGET_ENV_VAR)
    if raw is None:
        return fallback
    try:
        value = int(raw)
    except ValueError as exc:
        raise DomainError(f"{BUDGET_ENV_VAR} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise DomainError(f"{BUDGET_ENV_VAR} must be positive, got {value}")
    return value
