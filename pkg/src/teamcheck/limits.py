"""Resource caps for the exhaustive procedures.

Defaults can be overridden through the ``TEAMCHECK_LIMITS`` environment
variable, a comma separated list of ``key=value`` pairs, e.g.
``TEAMCHECK_LIMITS="closure_size=4096,semantic_models=1000000"``.
"""

from __future__ import annotations

import os

DEFAULTS = {
    # largest number of functions a closure computation may hold per arity
    "closure_size": 1 << 16,
    # largest cartesian product of argument tuples tried in one closure step
    "closure_product": 1 << 27,
    "closure_max_arity": 5,
    # number of (relation, valuation) pairs the exhaustive semantic check may visit
    "semantic_models": 1 << 24,
    "semantic_max_worlds": 4,
    "reach_nodes": 12,
    "sat_vars": 16,
    "qbf_vars": 12,
    "bench_worlds": 100_000,
}


class ResourceLimitError(RuntimeError):
    """Raised when a computation would exceed a configured cap."""


def _parse(text: str) -> dict[str, int]:
    out = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in DEFAULTS:
            raise ValueError(f"bad TEAMCHECK_LIMITS entry {item!r}")
        out[key] = int(value)
    return out


def limit(name: str) -> int:
    """Current value of the cap called ``name``."""
    overrides = _parse(os.environ.get("TEAMCHECK_LIMITS", ""))
    return overrides.get(name, DEFAULTS[name])


def require(name: str, amount: int, what: str) -> None:
    cap = limit(name)
    if amount > cap:
        raise ResourceLimitError(f"{what}: {amount} exceeds limit {name}={cap}")
