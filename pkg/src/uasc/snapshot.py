"""Binary snapshot files.

Layout: one ASCII header line

    UASC1 <kind> <Nx> <eps-hex> <Tf-hex> <complexS:0|1>\\n

followed by ``4 * Nx`` little-endian float64 values, in blocks of ``Nx``:
Re S, Im S, Re A, Im A. Wave-function kinds (``gpe``, ``strang_gpe``) store
zeros in the two S blocks and Psi in the last two. ``eps`` and ``Tf`` are
written with ``float.hex`` so they round-trip exactly.

Run metadata that does not fit the header (time step, step count, scheme
settings) goes to an optional JSON sidecar ``<file>.json``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import StructuralError

MAGIC = "UASC1"
PSI_KINDS = frozenset({"gpe", "strang_gpe"})


@dataclass
class Snapshot:
    kind: str
    eps: float
    tf: float
    S: np.ndarray
    data: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def nx(self) -> int:
        return int(self.data.size)

    @property
    def is_psi(self) -> bool:
        return self.kind in PSI_KINDS

    @property
    def complex_s(self) -> bool:
        return bool(np.iscomplexobj(self.S))

    @property
    def A(self) -> np.ndarray:
        if self.is_psi:
            raise StructuralError(f"snapshot of kind {self.kind!r} holds a wave function, not an amplitude")
        return self.data

    @property
    def psi(self) -> np.ndarray:
        if not self.is_psi:
            raise StructuralError(f"snapshot of kind {self.kind!r} holds an amplitude, not a wave function")
        return self.data


def write_snapshot(path, snap: Snapshot, sidecar: bool = True) -> Path:
    path = Path(path)
    if " " in snap.kind or not snap.kind:
        raise StructuralError(f"invalid snapshot kind {snap.kind!r}")
    nx = snap.nx
    S = np.zeros(nx, dtype=complex) if snap.is_psi else np.asarray(snap.S, dtype=complex)
    if S.shape != (nx,):
        raise StructuralError("phase and amplitude lengths differ")
    header = f"{MAGIC} {snap.kind} {nx} {float(snap.eps).hex()} {float(snap.tf).hex()} {int(snap.complex_s)}\n"
    data = np.asarray(snap.data, dtype=complex)
    blocks = np.stack([S.real, S.imag, data.real, data.imag]).astype("<f8")
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(blocks.tobytes())
    if sidecar and snap.meta:
        Path(str(path) + ".json").write_text(json.dumps(snap.meta, sort_keys=True, indent=1))
    return path


def read_snapshot(path) -> Snapshot:
    path = Path(path)
    raw = path.read_bytes()
    nl = raw.find(b"\n")
    if nl < 0:
        raise StructuralError(f"{path}: missing snapshot header")
    parts = raw[:nl].decode("ascii").split()
    if len(parts) != 6 or parts[0] != MAGIC:
        raise StructuralError(f"{path}: not a {MAGIC} snapshot")
    _, kind, nx, eps_hex, tf_hex, cplx = parts
    nx = int(nx)
    body = np.frombuffer(raw[nl + 1 :], dtype="<f8")
    if body.size != 4 * nx:
        raise StructuralError(f"{path}: expected {4 * nx} values, found {body.size}")
    blocks = body.reshape(4, nx)
    S = blocks[0] + 1j * blocks[1] if cplx == "1" else blocks[0].copy()
    data = blocks[2] + 1j * blocks[3]
    meta = {}
    side = Path(str(path) + ".json")
    if side.exists():
        meta = json.loads(side.read_text())
    return Snapshot(kind, float.fromhex(eps_hex), float.fromhex(tf_hex), S, data, meta)
