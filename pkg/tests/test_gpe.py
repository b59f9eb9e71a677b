import json

import numpy as np
import pytest

from uasc.diagnostics import compute_errors, fit_order, observables_psi
from uasc.errors import RefusalError, ResourceLimitError, StructuralError
from uasc.gpe import (
    ReferenceConfig,
    WaveFunction,
    generate_reference,
    initial_wavefunction,
    march,
    strang_gpe_step,
    wkb_to_psi,
    yoshida_gpe_step,
)
from uasc.snapshot import read_snapshot
from uasc.spectral import Grid
from uasc.wkb import WKBState


def sine_psi(g, eps):
    return initial_wavefunction(g, lambda x: np.sin(x) / 2, np.sin, eps)


def test_refuses_eps_zero(grid64):
    with pytest.raises(RefusalError):
        WaveFunction(grid64, np.ones(64), 0.0)
    with pytest.raises(RefusalError):
        wkb_to_psi(WKBState(grid64, np.zeros(64), np.ones(64)), 0.0)


def test_constant_wave_function(grid64):
    c, eps, h = 0.8 - 0.3j, 0.25, 0.07
    out = strang_gpe_step(WaveFunction(grid64, np.full(64, c), eps), h)
    assert np.max(np.abs(out.psi - c * np.exp(-1j * h * abs(c) ** 2 / eps))) < 1e-14


def test_zero_step_identity(grid64):
    w = sine_psi(grid64, 0.5)
    assert np.max(np.abs(strang_gpe_step(w, 0.0).psi - w.psi)) < 1e-15
    assert march(strang_gpe_step, w, 0.1, 0) is w
    with pytest.raises(StructuralError):
        march(strang_gpe_step, w, 0.1, -1)


def test_mass_conservation(grid128):
    w = sine_psi(grid128, 2**-4)
    m0 = observables_psi(w).mass
    out = march(strang_gpe_step, w, 0.1, 2**10)
    assert abs(observables_psi(out).mass / m0 - 1) < 1e-12


def test_energy_drift_second_order(grid128):
    w = sine_psi(grid128, 0.5)
    e0 = observables_psi(w).energy
    drift = [abs(observables_psi(march(strang_gpe_step, w, 0.1, n)).energy - e0) for n in (8, 16, 32)]
    p, _ = fit_order([0.1 / 8, 0.1 / 16, 0.1 / 32], drift)
    assert abs(p - 2) < 0.25


def test_wkb_to_psi(grid64):
    g = grid64
    assert np.allclose(wkb_to_psi(WKBState(g, np.zeros(64), np.ones(64)), 0.3).psi, 1.0)
    eps = 2**-5
    w = sine_psi(g, eps)
    assert np.max(np.abs(w.psi - np.sin(g.x) * np.exp(1j * np.sin(g.x) / (2 * eps)))) < 1e-13
    assert abs(np.linalg.norm(w.psi) - np.linalg.norm(np.sin(g.x))) < 1e-13
    s = WKBState(g, np.sin(g.x) + 0.5j, np.ones(64))
    assert np.allclose(wkb_to_psi(s, 1.0).psi, np.exp(1j * np.sin(g.x)))


@pytest.mark.parametrize("step, order", [(strang_gpe_step, 2), (yoshida_gpe_step, 4)])
def test_gpe_orders(grid64, step, order):
    w = sine_psi(grid64, 0.5)
    ref = march(yoshida_gpe_step, w, 0.1, 512)
    steps = (8, 16, 32)
    errs = [compute_errors(march(step, w, 0.1, n), ref, ("psi",)).err_psi for n in steps]
    assert abs(fit_order([0.1 / n for n in steps], errs)[0] - order) < 0.3


def test_reference_unknown_kind():
    with pytest.raises(StructuralError):
        generate_reference("rk4", ReferenceConfig(0.5, nx=16, n_steps=2))


def test_reference_resource_guard(monkeypatch):
    with pytest.raises(ResourceLimitError):
        generate_reference("gpe", ReferenceConfig(0.5, nx=64, n_steps=8, max_nx=32))
    monkeypatch.setenv("UASC_MAX_NT", "4")
    with pytest.raises(ResourceLimitError):
        generate_reference("gpe", ReferenceConfig(0.5, nx=16, n_steps=8))


def test_reference_zero_data():
    snap = generate_reference("wkb4", ReferenceConfig(0.5, nx=16, n_steps=2, data="zero"))
    assert np.all(snap.S == 0) and np.all(snap.A == 0)


def test_reference_persisted_with_metadata(tmp_path):
    path = tmp_path / "ref.uasc"
    snap = generate_reference("gpe", ReferenceConfig(0.5, nx=32, n_steps=16), path)
    back = read_snapshot(path)
    assert back.kind == "gpe" and np.array_equal(back.psi, snap.psi)
    meta = json.loads((tmp_path / "ref.uasc.json").read_text())
    assert meta == {"method": "gpe", "h": 0.1 / 16, "n_steps": 16, "nx": 32, "data": "paper"}


def test_wkb4_reference_self_convergence():
    # steps coarser than 2^-10 Tf keep the test fast; the difference is
    # already at the roundoff floor of the fourth-order scheme
    a = generate_reference("wkb4", ReferenceConfig(2**-4, nx=128, n_steps=2**6))
    b = generate_reference("wkb4", ReferenceConfig(2**-4, nx=128, n_steps=2**7))
    assert compute_errors(a, b, ("sa",)).err_sa < 1e-9


def test_gpe_reference_agrees_with_wkb4_at_eps_one():
    wkb = generate_reference("wkb4", ReferenceConfig(1.0, nx=64, n_steps=32))
    gpe = generate_reference("gpe", ReferenceConfig(1.0, nx=64, n_steps=256))
    assert compute_errors(wkb, gpe, ("psi",), eps=1.0).err_psi < 1e-6
