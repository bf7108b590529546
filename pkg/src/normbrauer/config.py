"""Resource caps, overridable through the ``NORMBRAUER_CAPS`` environment variable.

Format: comma separated ``key=value`` pairs, e.g.
``NORMBRAUER_CAPS="max_group_order=32,max_cells=10000000"``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

ENV_VAR = "NORMBRAUER_CAPS"


class CapError(RuntimeError):
    """A computation would exceed a configured resource cap."""


@dataclass(frozen=True)
class Caps:
    max_group_order: int = 64
    max_omega: int = 20000
    max_cells: int = 400_000_000
    max_entry_bits: int = 4096
    max_rank: int = 200_000


_override: Caps | None = None


def _from_env() -> Caps:
    caps = Caps()
    raw = os.environ.get(ENV_VAR, "").strip()
    if not raw:
        return caps
    names = {f.name for f in fields(Caps)}
    kw = {}
    for part in raw.split(","):
        key, _, val = part.partition("=")
        key = key.strip()
        if key not in names:
            raise ValueError(f"unknown cap {key!r} in {ENV_VAR}")
        kw[key] = int(val)
    return replace(caps, **kw)


def get_caps() -> Caps:
    return _override if _override is not None else _from_env()


def set_caps(caps: Caps | None):
    """Install caps for this process (``None`` restores the environment default)."""
    global _override
    _override = caps
