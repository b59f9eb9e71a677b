"""Resource ceilings for grid size and step count.

Defaults can be overridden with the environment variables ``UASC_MAX_NX``
and ``UASC_MAX_NT``.
"""

from __future__ import annotations

import os

from .errors import ResourceLimitError

DEFAULT_MAX_NX = 2**12
DEFAULT_MAX_NT = 2**16


def max_nx() -> int:
    return int(os.environ.get("UASC_MAX_NX", DEFAULT_MAX_NX))


def max_nt() -> int:
    return int(os.environ.get("UASC_MAX_NT", DEFAULT_MAX_NT))


def check_resources(nx: int, nt: int, limit_nx: int | None = None, limit_nt: int | None = None) -> None:
    limit_nx = max_nx() if limit_nx is None else limit_nx
    limit_nt = max_nt() if limit_nt is None else limit_nt
    if nx > limit_nx:
        raise ResourceLimitError(f"Nx={nx} exceeds the ceiling {limit_nx} (UASC_MAX_NX)")
    if nt > limit_nt:
        raise ResourceLimitError(f"Nt={nt} exceeds the ceiling {limit_nt} (UASC_MAX_NT)")
