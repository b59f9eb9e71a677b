"""Sweep configuration and its flat ``key = value`` file format.

Recognized keys (CLI flags of the same name override file values)::

    scheme     = scheme2              # scheme1 | scheme2 | scheme4 | strang_gpe
    eps        = 1, 2^-2, 2^-4        # comma list; "2^-4" and "2**-4" accepted
    tf         = 0.1
    data       = paper
    eikonal    = semilag1             # semilag1 | semilag2 | lie | strang | yoshida;
                                      # default semilag1, semilag2 for scheme4
    delta_log  = 0.1
    nx         = 128                  # fixed grid when sweeping the time step
    nt_list    = 32, 64, 128          # time-step sweep as step counts (h = tf / nt)
    h_list     = 0.003125, 0.0015625  # ... or as explicit steps
    nt         = 8192                 # fixed step count when sweeping the grid
    nx_list    = 16, 32, 64, 128      # grid sweep
    reference  = scheme4:nx=256:nt=8192   # | self[:nt=N][:nx=N][:factor=F] | gpe4:nx=N:nt=N
                                          # | file:PATTERN | none; default self for strang_gpe
    reference_dir =                   # cache directory for generated references
    metrics    = rho, sa              # subset of rho, psi, sa
    fit_floor  = 0                    # errors at or below are ignored in order fits
    output     = sweep.csv
    workers    = 1
    max_nx     = 4096
    max_nt     = 65536

Exactly one of ``nt_list``/``h_list`` and ``nx_list`` must be given.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, fields, replace
from pathlib import Path

from ..errors import StructuralError

SCHEMES = ("scheme1", "scheme2", "scheme4", "strang_gpe")
WKB_SCHEMES = ("scheme1", "scheme2", "scheme4")

DEFAULT_EPS = tuple(2.0**-j for j in range(0, 13, 2))

_POW = re.compile(r"^\s*([+-]?[0-9.]+)\s*(?:\^|\*\*)\s*\(?\s*([+-]?[0-9.]+)\s*\)?\s*$")


def parse_number(text: str) -> float:
    """Parse ``0.25``, ``2^-2``, ``2**-2`` or ``1/4``."""
    t = str(text).strip()
    m = _POW.match(t)
    if m:
        return float(m.group(1)) ** float(m.group(2))
    if "/" in t:
        num, den = t.split("/", 1)
        return parse_number(num) / parse_number(den)
    try:
        return float(t)
    except ValueError:
        raise StructuralError(f"cannot parse number {text!r}") from None


def parse_list(text, conv=parse_number) -> tuple:
    if isinstance(text, (list, tuple)):
        return tuple(conv(t) for t in text)
    items = [t for t in re.split(r"[,\s]+", str(text).strip()) if t]
    return tuple(conv(t) for t in items)


def _int(text) -> int:
    v = parse_number(text)
    if v != int(v):
        raise StructuralError(f"expected an integer, got {text!r}")
    return int(v)


@dataclass(frozen=True)
class SweepConfig:
    scheme: str = "scheme2"
    eps_list: tuple = DEFAULT_EPS
    tf: float = 0.1
    data: str = "paper"
    eikonal: str | None = None
    delta_log: float = 0.1
    nx: int | None = 128
    nt: int | None = None
    nt_list: tuple | None = None
    h_list: tuple | None = None
    nx_list: tuple | None = None
    reference: str | None = None
    reference_dir: str | None = None
    metrics: tuple = ("rho", "sa")
    fit_floor: float = 0.0
    output: str | None = None
    workers: int = 1
    max_nx: int | None = None
    max_nt: int | None = None

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise StructuralError(f"unknown scheme {self.scheme!r}; choose from {SCHEMES}")
        if not self.tf > 0:
            raise StructuralError("tf must be positive")
        time_axis = self.nt_list is not None or self.h_list is not None
        if self.nt_list is not None and self.h_list is not None:
            raise StructuralError("give either nt_list or h_list, not both")
        if time_axis == (self.nx_list is not None):
            raise StructuralError("exactly one sweep axis (nt_list/h_list or nx_list) is required")
        if time_axis and self.nx is None:
            raise StructuralError("a time-step sweep needs a fixed nx")
        if self.nx_list is not None and self.nt is None:
            raise StructuralError("a grid sweep needs a fixed nt")
        for e in self.eps_list:
            if e < 0 or (e == 0 and self.scheme not in WKB_SCHEMES):
                raise StructuralError(f"eps={e} not admissible for {self.scheme}")
        if self.workers < 1:
            raise StructuralError("workers must be >= 1")

    @property
    def axis(self) -> str:
        return "nx" if self.nx_list is not None else "h"

    def steps(self) -> tuple:
        """Swept time steps (time axis only)."""
        if self.nt_list is not None:
            return tuple(self.tf / n for n in self.nt_list)
        return tuple(self.h_list)


_CONVERTERS = {
    "scheme": str,
    "eps_list": parse_list,
    "tf": parse_number,
    "data": str,
    "eikonal": str,
    "delta_log": parse_number,
    "nx": _int,
    "nt": _int,
    "nt_list": lambda t: parse_list(t, _int),
    "h_list": parse_list,
    "nx_list": lambda t: parse_list(t, _int),
    "reference": str,
    "reference_dir": str,
    "metrics": lambda t: parse_list(t, str),
    "fit_floor": parse_number,
    "output": str,
    "workers": _int,
    "max_nx": _int,
    "max_nt": _int,
}
_ALIASES = {"eps": "eps_list", "Tf": "tf", "T_f": "tf"}


def parse_config_text(text: str) -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise StructuralError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = _ALIASES.get(key, key)
        if key not in _CONVERTERS:
            raise StructuralError(f"config line {lineno}: unknown key {key!r}")
        values[key] = value
    return values


def build_config(values: dict, base: SweepConfig | None = None) -> SweepConfig:
    """Convert raw string values (file or CLI) and overlay them on ``base``."""
    converted = {}
    for key, value in values.items():
        key = _ALIASES.get(key, key)
        if value is None:
            if key == "nx":  # a grid sweep has no fixed grid
                converted[key] = None
            continue
        if value == "" and key in ("reference_dir", "output"):
            converted[key] = None
            continue
        converted[key] = _CONVERTERS[key](value) if isinstance(value, str) else value
    if base is None:
        return SweepConfig(**converted)
    return replace(base, **converted)


def load_config(path, overrides: dict | None = None) -> SweepConfig:
    values = parse_config_text(Path(path).read_text()) if path else {}
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    if "nx_list" in values and "nx" not in values:
        values["nx"] = None
    return build_config(values)


def config_keys() -> list[str]:
    return [f.name for f in fields(SweepConfig)]
