"""Size caps for exhaustive routines.

Defaults keep every exhaustive routine desk-sized. ``NCSTFLIP_CAP_<NAME>``
environment variables override a default (e.g. ``NCSTFLIP_CAP_MATRIX=7``);
raising a cap above its default logs a warning because runtimes grow like
the Fuss-Catalan numbers.
"""

import logging
import os

from .errors import CapExceeded

log = logging.getLogger(__name__)

DEFAULT_CAPS = {
    "enumeration": 8,
    "matrix": 6,
    "eigen": 6,
    "tv": 5,
    "census": 6,
    "coupling": 32,
}


def cap(name: str) -> int:
    default = DEFAULT_CAPS[name]
    raw = os.environ.get(f"NCSTFLIP_CAP_{name.upper()}")
    if raw is None:
        return default
    value = int(raw)
    if value > default:
        log.warning("cap %r raised from %d to %d", name, default, value)
    return value


def check_cap(name: str, n: int, override: int | None = None) -> None:
    limit = cap(name) if override is None else override
    if override is not None and override > DEFAULT_CAPS[name]:
        log.warning("cap %r raised from %d to %d", name, DEFAULT_CAPS[name], override)
    if n > limit:
        raise CapExceeded(f"n={n} exceeds the {name} cap {limit}")
