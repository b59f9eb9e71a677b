"""Single runs, references and convergence sweeps."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ..diagnostics import compute_errors, fit_order, observables_psi, observables_wkb
from ..eikonal import EikonalSolverKind
from ..errors import StructuralError, UASCError
from ..gpe import (
    ReferenceConfig,
    WaveFunction,
    generate_reference,
    initial_wavefunction,
    strang_gpe_step,
)
from ..high_order import VState, from_vstate, scheme4_step, to_vstate
from ..initial_data import get_initial_data
from ..limits import check_resources
from ..snapshot import Snapshot, read_snapshot, write_snapshot
from ..spectral import Grid
from ..wkb import SimParams, WKBState, scheme1_step, scheme2_step
from .config import SweepConfig

CSV_COLUMNS = ("scheme", "eps", "Tf", "Nx", "Nt", "h", "metric", "value", "status")
DEFAULT_SCHEME4_EIKONAL = "semilag2"


def fmt(value) -> str:
    """Deterministic text form of a CSV cell."""
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


@dataclass(frozen=True)
class Instance:
    """One fully resolved run: scheme, parameters, grid and step."""

    scheme: str
    eps: float
    tf: float
    nx: int
    h: float
    data: str = "paper"
    eikonal: str | None = None
    delta_log: float = 0.1
    max_nx: int | None = None
    max_nt: int | None = None

    @property
    def nt(self) -> int:
        """Number of steps; the last one is shortened when ``tf / h`` is not integral."""
        n = self.tf / self.h
        return max(1, math.ceil(n - 1e-9 * max(1.0, n)))

    def eikonal_kind(self) -> EikonalSolverKind:
        name = self.eikonal
        if name is None:
            name = DEFAULT_SCHEME4_EIKONAL if self.scheme == "scheme4" else "semilag1"
        return EikonalSolverKind.parse(name, self.delta_log)


@dataclass
class RunResult:
    instance: Instance
    final: object
    times: list = field(default_factory=list)
    observables: list = field(default_factory=list)

    def snapshot(self) -> Snapshot:
        return state_to_snapshot(self.final, self.instance)


def state_to_snapshot(state, inst: Instance, t: float | None = None) -> Snapshot:
    meta = {
        "scheme": inst.scheme,
        "h": inst.h,
        "n_steps": inst.nt,
        "nx": inst.nx,
        "data": inst.data,
        "eikonal": inst.eikonal_kind().variant if inst.scheme != "strang_gpe" else None,
    }
    t = inst.tf if t is None else t
    if isinstance(state, WaveFunction):
        return Snapshot(inst.scheme, inst.eps, t, np.zeros(state.grid.n_points), state.psi, meta)
    if isinstance(state, VState):
        state = from_vstate(state)
    return Snapshot(inst.scheme, inst.eps, t, state.S, state.A, meta)


def initial_state(inst: Instance):
    grid = Grid(inst.nx)
    data = get_initial_data(inst.data)
    if inst.scheme == "strang_gpe":
        return initial_wavefunction(grid, data.S0, data.A0, inst.eps)
    state = WKBState.from_functions(grid, data.S0, data.A0)
    return to_vstate(state) if inst.scheme == "scheme4" else state


def state_from_snapshot(snap: Snapshot, scheme: str):
    """Turn a snapshot into the state type ``scheme`` steps.

    Fourth-order runs resumed from a snapshot are exact only when the stored
    amplitude is real-valued componentwise; in general ``(A1, A2)`` cannot be
    recovered from ``A = A1 + i A2``.
    """
    grid = Grid(snap.nx)
    if scheme == "strang_gpe":
        if not snap.is_psi:
            raise StructuralError("strang_gpe needs a wave-function snapshot")
        return WaveFunction(grid, snap.psi, snap.eps)
    if snap.is_psi:
        raise StructuralError(f"{scheme} needs a phase-amplitude snapshot")
    state = WKBState(grid, snap.S, snap.A)
    if scheme == "scheme4":
        return to_vstate(state)
    return state.real_phase() if np.iscomplexobj(state.S) else state


def _stepper(inst: Instance):
    if inst.scheme == "strang_gpe":
        return strang_gpe_step
    eik = inst.eikonal_kind()
    step = {"scheme1": scheme1_step, "scheme2": scheme2_step, "scheme4": scheme4_step}[inst.scheme]
    return lambda s, h: step(s, SimParams(inst.eps, h, eik))


def _observe(state, eps):
    if isinstance(state, WaveFunction):
        return observables_psi(state)
    if isinstance(state, VState):
        state = from_vstate(state)
    S = np.real(state.S)
    return observables_wkb(WKBState(state.grid, S, state.A), eps)


def run_single(inst: Instance, initial=None, t0: float = 0.0, stride: int = 0) -> RunResult:
    """Step ``inst.scheme`` from ``t0`` to ``inst.tf`` with step ``inst.h``.

    ``initial`` may be a state or a :class:`Snapshot` (whose ``tf`` is then
    the start time). Observables are recorded every ``stride`` steps and at
    the end when ``stride > 0``.
    """
    if isinstance(initial, Snapshot):
        t0 = initial.tf
        initial = state_from_snapshot(initial, inst.scheme)
    state = initial_state(inst) if initial is None else initial
    span = inst.tf - t0
    if span < 0:
        raise StructuralError(f"start time {t0} is past the final time {inst.tf}")
    n = 0 if span == 0 else replace(inst, tf=span).nt
    check_resources(inst.nx, n, inst.max_nx, inst.max_nt)
    step = _stepper(inst)
    result = RunResult(inst, state)
    if stride > 0:
        result.times.append(t0)
        result.observables.append(_observe(state, inst.eps))
    for j in range(n):
        h = inst.h if j < n - 1 else span - (n - 1) * inst.h
        state = step(state, h)
        if stride > 0 and ((j + 1) % stride == 0 or j == n - 1):
            result.times.append(t0 + (j + 1) * inst.h if j < n - 1 else inst.tf)
            result.observables.append(_observe(state, inst.eps))
    result.final = state
    return result


# ---------------------------------------------------------------- references


@dataclass(frozen=True)
class ReferenceSpec:
    """Parsed ``reference`` config value.

    ``scheme4:nx=N:nt=M``  fourth-order WKB run (default Nx=256, Nt=8192)
    ``gpe4:nx=N:nt=M``     fourth-order wave-function run
    ``self[:nt=M][:nx=N][:factor=F]``  same scheme, refined by ``factor``
                           (default 4) beyond the finest swept value
    ``file:PATTERN``       snapshot files, ``{eps}`` replaced by ``eps.hex()``
    ``none``               no reference (runs only)
    """

    kind: str
    nx: int | None = None
    nt: int | None = None
    factor: int = 4
    pattern: str | None = None

    @classmethod
    def parse(cls, text: str) -> "ReferenceSpec":
        text = text.strip()
        if text.startswith("file:"):
            return cls("file", pattern=text[5:])
        head, *opts = text.split(":")
        if head not in ("scheme4", "gpe4", "self", "none"):
            raise StructuralError(f"unknown reference kind {head!r}")
        kw = {}
        for opt in opts:
            key, _, val = opt.partition("=")
            if key not in ("nx", "nt", "factor") or not val:
                raise StructuralError(f"bad reference option {opt!r}")
            kw[key] = int(float(val))
        spec = cls(head, **kw)
        if head == "scheme4":
            spec = replace(spec, nx=spec.nx or 2**8, nt=spec.nt or 2**13)
        elif head == "gpe4":
            spec = replace(spec, nx=spec.nx or 2**9, nt=spec.nt or 2**12)
        return spec


def default_reference(scheme: str) -> str:
    """WKB schemes compare against the fourth-order WKB run, the wave-function
    baseline against a refined run of itself."""
    return "self" if scheme == "strang_gpe" else "scheme4:nx=256:nt=8192"


def _cache_path(directory, tag: str, eps: float, tf: float, nx: int, nt: int, data: str) -> Path:
    name = f"{tag}_{data}_eps{float(eps).hex()}_tf{float(tf).hex()}_nx{nx}_nt{nt}.uasc"
    return Path(directory) / name.replace("+", "")


def _cached(path, build):
    if path is not None and Path(path).exists():
        return read_snapshot(path)
    snap = build()
    if path is not None:
        write_snapshot(path, snap)
    return snap


def reference_for(config: SweepConfig, eps: float):
    """Return the reference object for one ``eps`` (``None`` for ``none``)."""
    spec = ReferenceSpec.parse(config.reference or default_reference(config.scheme))
    cache = config.reference_dir
    if spec.kind == "none":
        return None
    if spec.kind == "file":
        return read_snapshot(spec.pattern.replace("{eps}", float(eps).hex()))
    if spec.kind in ("scheme4", "gpe4"):
        kind = "wkb4" if spec.kind == "scheme4" else "gpe"
        rc = ReferenceConfig(eps, config.tf, spec.nx, spec.nt, config.data, config.max_nx, config.max_nt)
        path = _cache_path(cache, kind, eps, config.tf, spec.nx, spec.nt, config.data) if cache else None
        return _cached(path, lambda: generate_reference(kind, rc))
    # self-reference
    if config.axis == "h":
        nx = spec.nx or config.nx
        nt = spec.nt or spec.factor * max(math.ceil(config.tf / h - 1e-9) for h in config.steps())
    else:
        nx = spec.nx or spec.factor * max(config.nx_list)
        nt = spec.nt or config.nt
    inst = Instance(config.scheme, eps, config.tf, nx, config.tf / nt, config.data,
                    config.eikonal, config.delta_log, config.max_nx, config.max_nt)
    path = _cache_path(cache, f"self-{config.scheme}", eps, config.tf, nx, nt, config.data) if cache else None
    return _cached(path, lambda: run_single(inst).snapshot())


# ---------------------------------------------------------------- sweeps


def instances(config: SweepConfig) -> list[Instance]:
    """All instances in output order: by eps (as listed), then swept value."""
    out = []
    for eps in config.eps_list:
        if config.axis == "h":
            pairs = [(config.nx, h) for h in config.steps()]
        else:
            pairs = [(nx, config.tf / config.nt) for nx in config.nx_list]
        for nx, h in pairs:
            out.append(
                Instance(config.scheme, eps, config.tf, nx, h, config.data, config.eikonal,
                         config.delta_log, config.max_nx, config.max_nt)
            )
    return out


def _metric_value(m, metric):
    return getattr(m, f"err_{metric}")


def evaluate(inst: Instance, reference, metrics) -> list[tuple]:
    """Run one instance and return its rows as tuples of cells."""
    base = (inst.scheme, fmt(inst.eps), fmt(inst.tf), str(inst.nx), str(inst.nt), fmt(inst.h))
    try:
        result = run_single(inst)
        if reference is None:
            return [base + ("-", "", "ok")]
        em = compute_errors(result.final, reference, metrics, eps=inst.eps if inst.eps > 0 else None)
    except UASCError as exc:
        return [base + ("-", "nan", exc.reason)]
    except FloatingPointError as exc:  # numpy overflow escalated by errstate
        return [base + ("-", "nan", f"floating_point:{exc}")]
    rows = []
    for metric in metrics:
        value = _metric_value(em, metric)
        if value is None:
            rows.append(base + (metric, "", "undefined"))
        elif not np.isfinite(value):
            rows.append(base + (metric, fmt(value), "nonfinite"))
        else:
            rows.append(base + (metric, fmt(value), "ok"))
    return rows


def _evaluate_packed(args):
    return evaluate(*args)


def summary_rows(config: SweepConfig, rows: list[tuple]) -> list[tuple]:
    """Per-eps order fits for every metric: ``order:<m>`` and ``const:<m>`` rows."""
    out = []
    axis = config.axis
    for eps in config.eps_list:
        e = fmt(eps)
        for metric in config.metrics:
            xs, ys = [], []
            for r in rows:
                if r[1] == e and r[6] == metric and r[8] == "ok":
                    xs.append(float(r[5]) if axis == "h" else 2 * math.pi / int(r[3]))
                    ys.append(float(r[7]))
            nx_cell = str(config.nx) if axis == "h" else "*"
            nt_cell = "*" if axis == "h" else str(config.nt)
            h_cell = "*" if axis == "h" else fmt(config.tf / config.nt)
            base = (config.scheme, e, fmt(config.tf), nx_cell, nt_cell, h_cell)
            p, c = fit_order(xs, ys, config.fit_floor)
            status = "fit" if np.isfinite(p) else "insufficient"
            out.append(base + (f"order:{metric}", fmt(p), status))
            out.append(base + (f"const:{metric}", fmt(c), status))
    return out


@dataclass
class SweepResult:
    rows: list
    summary: list

    @property
    def all_ok(self) -> bool:
        return all(r[8] == "ok" for r in self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        w.writerows(self.rows)
        w.writerows(self.summary)
        return buf.getvalue()

    def fits(self, metric: str) -> dict:
        """``{eps: (order, const)}`` read back from the summary rows."""
        out = {}
        for r in self.summary:
            if r[6] == f"order:{metric}":
                out.setdefault(float(r[1]), [None, None])[0] = float(r[7])
            elif r[6] == f"const:{metric}":
                out.setdefault(float(r[1]), [None, None])[1] = float(r[7])
        return {k: tuple(v) for k, v in out.items()}

    def values(self, metric: str, eps: float) -> list[tuple[float, float, int]]:
        """``(h, value, Nx)`` for ok rows of one metric and eps."""
        e = fmt(eps)
        return [
            (float(r[5]), float(r[7]), int(r[3]))
            for r in self.rows
            if r[1] == e and r[6] == metric and r[8] == "ok"
        ]


def run_sweep(config: SweepConfig, references: dict | None = None) -> SweepResult:
    """Run every instance of ``config`` and collect CSV rows.

    References are resolved once per eps in the calling process (or taken
    from ``references``). Instances run on ``config.workers`` processes;
    rows are gathered in instance order so the output does not depend on
    the width.
    """
    if config.reference is None:
        config = replace(config, reference=default_reference(config.scheme))
    refs = dict(references or {})
    insts = instances(config)
    # resource check before any expensive work
    for inst in insts:
        check_resources(inst.nx, inst.nt, inst.max_nx, inst.max_nt)
    for eps in config.eps_list:
        if eps not in refs:
            refs[eps] = reference_for(config, eps)
    jobs = [(inst, refs[inst.eps], tuple(config.metrics)) for inst in insts]
    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            chunks = list(pool.map(_evaluate_packed, jobs))
    else:
        chunks = [evaluate(*job) for job in jobs]
    rows = [row for chunk in chunks for row in chunk]
    has_ref = any(v is not None for v in refs.values())
    result = SweepResult(rows, summary_rows(config, rows) if has_ref else [])
    if config.output:
        Path(config.output).parent.mkdir(parents=True, exist_ok=True)
        Path(config.output).write_text(result.to_csv())
    return result
