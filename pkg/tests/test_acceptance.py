"""Acceptance suite.

Each test carries a ``criterion`` marker; the terminal summary prints one
PASS/FAIL line per criterion with the measured quantities. Run with
``pytest tests/test_acceptance.py``.
"""

from decimal import Decimal, getcontext

import numpy as np
import pytest

from uasc.composition import ALPHA, BETA, BETA_DIGITS
from uasc.diagnostics import compute_errors, fit_order
from uasc.eikonal import EikonalSolverKind, characteristics_oracle, eikonal_march
from uasc.gpe import ReferenceConfig, generate_reference, wkb_to_psi
from uasc.harness import SweepConfig, run_sweep
from uasc.high_order import P, SIGMA0, SIGMA2, SIGMA3, VState, scheme4_vstep, to_vstate
from uasc.spectral import Grid, apply_multiplier
from uasc.wkb import SimParams, WKBState, flow4, scheme1_step, scheme2_step

TF = 0.1
EPS_UA = (1.0, 2.0**-2, 2.0**-4, 2.0**-6, 2.0**-8, 2.0**-10)
NX = 2**7


def sine_state(nx):
    return WKBState.from_functions(Grid(nx), lambda x: np.sin(x) / 2, np.sin)


def l2(grid, u):
    return np.sqrt(grid.dx * np.sum(np.abs(u) ** 2))


def spread(values):
    v = [x for x in values if np.isfinite(x)]
    return max(v) / min(v)


@pytest.fixture(scope="module")
def wkb4_refs():
    """Fourth-order phase-amplitude references at h = 2^-8 T_f, shared by 1 and 2."""
    return {eps: generate_reference("wkb4", ReferenceConfig(eps, TF, NX, 2**8)) for eps in EPS_UA}


# ---------------------------------------------------------------- 1


@pytest.mark.criterion(1, "scheme2 uniformly second order in time")
def test_c1_scheme2_uniform_order_two(wkb4_refs, record_property):
    config = SweepConfig(scheme="scheme2", eps_list=EPS_UA, tf=TF, nx=NX,
                         nt_list=tuple(2**j for j in range(5, 11)), reference="scheme4", metrics=("rho", "sa"))
    res = run_sweep(config, references=wkb4_refs)
    assert res.all_ok
    for metric in ("rho", "sa"):
        fits = res.fits(metric)
        orders = {e: p for e, (p, _) in fits.items()}
        consts = [c for _, c in fits.values()]
        record_property("measured", f"err_{metric} orders {[round(p, 3) for p in orders.values()]}, "
                                    f"constant spread {spread(consts):.2f}")
        assert all(1.8 <= p <= 2.2 for p in orders.values()), orders
        assert spread(consts) < 20


# ---------------------------------------------------------------- 2


@pytest.mark.criterion(2, "scheme4 uniformly fourth order in time")
def test_c2_scheme4_uniform_order_four(wkb4_refs, record_property):
    config = SweepConfig(scheme="scheme4", eps_list=EPS_UA, tf=TF, nx=NX,
                         nt_list=tuple(2**j for j in range(3, 8)), reference="scheme4",
                         metrics=("sa",), fit_floor=1e-11)
    res = run_sweep(config, references=wkb4_refs)
    assert res.all_ok
    orders = {e: p for e, (p, _) in res.fits("sa").items() if np.isfinite(p)}
    record_property("measured", f"err_sa orders {[round(p, 3) for p in orders.values()]} "
                                f"({len(orders)} of {len(EPS_UA)} eps above the 1e-11 floor)")
    assert orders
    assert all(3.6 <= p <= 4.4 for p in orders.values()), orders


def _vstate_distance(a: VState, b: VState) -> float:
    return max(np.max(np.abs(a.S - b.S)), np.max(np.abs(a.v1 - b.v1)), np.max(np.abs(a.v2 - b.v2)))


@pytest.mark.criterion(2, "scheme4 uniformly fourth order in time")
@pytest.mark.parametrize("eps", [1.0, 2.0**-4, 2.0**-10])
def test_c2_scheme4_local_order_five(eps, record_property):
    v0 = to_vstate(sine_state(NX))
    steps = [0.1 * 2.0**-j for j in range(4)]
    errs = []
    for h in steps:
        one = scheme4_vstep(v0, SimParams(eps, h))
        fine = v0
        for _ in range(64):
            fine = scheme4_vstep(fine, SimParams(eps, h / 64))
        errs.append(_vstate_distance(one, fine))
    p, _ = fit_order(steps, errs)
    record_property("measured", f"local order {p:.3f}")
    assert 4.6 <= p <= 5.4


# ---------------------------------------------------------------- 3


@pytest.mark.criterion(3, "scheme2 uniformly spectral in space")
def test_c3_scheme2_uniform_spectral_space(record_property):
    config = SweepConfig(scheme="scheme2", eps_list=EPS_UA, tf=TF, nx=None, nt=2**13,
                         nx_list=(16, 32, 64, 128), reference="self:nx=256:nt=8192", metrics=("sa",))
    res = run_sweep(config)
    assert res.all_ok
    finest, thresholds = {}, {}
    for eps in EPS_UA:
        vals = {nx: v for _, v, nx in res.values("sa", eps)}
        finest[eps] = vals[128]
        below = [nx for nx in sorted(vals) if vals[nx] < 1e-6]
        thresholds[eps] = int(np.log2(below[0])) if below else None
    record_property("measured", f"err_sa at Nx=128 max {max(finest.values()):.2e}; "
                                f"log2 Nx thresholds for 1e-6 {list(thresholds.values())}")
    assert all(v < 1e-8 for v in finest.values())
    assert None not in thresholds.values()
    centre = int(np.median(list(thresholds.values())))
    assert all(abs(t - centre) <= 1 for t in thresholds.values())


# ---------------------------------------------------------------- 4

EPS_GPE = tuple(2.0**-j for j in range(2, 7))


@pytest.fixture(scope="module")
def gpe_sweep():
    config = SweepConfig(scheme="strang_gpe", eps_list=EPS_GPE, tf=TF, nx=2**9,
                         nt_list=tuple(2**j for j in range(5, 11)), reference="gpe4:nx=512:nt=4096",
                         metrics=("rho", "psi"))
    res = run_sweep(config)
    assert res.all_ok
    return res


@pytest.mark.criterion(4, "Strang baseline: err_psi grows like 1/eps, err_rho uniform")
def test_c4_psi_error_grows_like_inverse_eps(gpe_sweep, record_property):
    err = {eps: {h: v for h, v, _ in gpe_sweep.values("psi", eps)} for eps in EPS_GPE}
    # asymptotic regime: h <= 2^-7 T_f
    hs = sorted(h for h in err[EPS_GPE[0]] if h <= TF * 2**-7 * (1 + 1e-12))
    ratios = [err[e][h] / err[2 * e][h] for e in EPS_GPE[1:] for h in hs]
    record_property("measured", f"err(eps)/err(2 eps) in [{min(ratios):.3f}, {max(ratios):.3f}]")
    assert all(1.5 <= r <= 2.8 for r in ratios)


@pytest.mark.criterion(4, "Strang baseline: err_psi grows like 1/eps, err_rho uniform")
def test_c4_rho_order_two_eps_stable(gpe_sweep, record_property):
    fits = gpe_sweep.fits("rho")
    orders = [p for p, _ in fits.values()]
    consts = [c for _, c in fits.values()]
    record_property("measured", f"err_rho orders {[round(p, 3) for p in orders]}, "
                                f"constant spread {spread(consts):.2f}")
    assert all(1.8 <= p <= 2.2 for p in orders)
    assert spread(consts) < 20


# ---------------------------------------------------------------- 5


@pytest.mark.criterion(5, "schemes 1 and 2 conserve the L2 norm of A")
@pytest.mark.parametrize("step", [scheme1_step, scheme2_step], ids=["scheme1", "scheme2"])
@pytest.mark.parametrize("eps", [1.0, 2.0**-6, 0.0])
def test_c5_norm_conservation(step, eps, record_property):
    s = sine_state(NX)
    n0 = l2(s.grid, s.A)
    params = SimParams(eps, TF / 2**10)
    for _ in range(2**10):
        s = step(s, params)
    drift = abs(l2(s.grid, s.A) / n0 - 1)
    record_property("measured", f"relative drift {drift:.1e}")
    assert drift <= 1e-11


# ---------------------------------------------------------------- 6

EIK_STEPS = (1, 2, 4, 8, 16, 32)


@pytest.fixture(scope="module")
def eikonal_setup():
    g = Grid(NX)
    S0 = np.sin(g.x) / 2
    return g, S0, characteristics_oracle(g, S0, TF)


@pytest.mark.criterion(6, "eikonal sub-solver orders")
@pytest.mark.parametrize(
    "solver, band",
    [("semilag1", (1.8, 2.2)), ("semilag2", (3.6, 4.4)), ("lie", (0.8, 1.2)), ("strang", (1.8, 2.2))],
)
def test_c6_eikonal_orders(eikonal_setup, solver, band, record_property):
    g, S0, exact = eikonal_setup
    kind = EikonalSolverKind.parse(solver)
    errs = [np.max(np.abs(np.real(eikonal_march(g, S0, TF, n, kind)) - exact)) for n in EIK_STEPS]
    p, _ = fit_order([TF / n for n in EIK_STEPS], errs, floor=1e-13)
    record_property("measured", f"order {p:.3f}, band {list(band)}")
    assert band[0] <= p <= band[1]


# ---------------------------------------------------------------- 7

EPS_POST = (2.0**-2, 2.0**-4, 2.0**-6)


@pytest.mark.criterion(7, "scheme2 after the caustic: order 2 at fixed eps, constants grow")
def test_c7_post_caustic(record_property):
    config = SweepConfig(scheme="scheme2", eps_list=EPS_POST, tf=0.6, nx=2**8,
                         nt_list=tuple(2**j for j in range(5, 11)), reference="self", metrics=("rho",))
    res = run_sweep(config)
    assert res.all_ok
    fits = res.fits("rho")
    orders = [fits[e][0] for e in EPS_POST]
    consts = [fits[e][1] for e in EPS_POST]
    record_property("measured", f"err_rho orders {[round(p, 3) for p in orders]}, "
                                f"constants {[round(c, 4) for c in consts]}")
    assert all(1.6 <= p <= 2.4 for p in orders)
    assert all(b > a for a, b in zip(consts, consts[1:]))


# ---------------------------------------------------------------- 8


@pytest.mark.criterion(8, "algebraic invariants")
def test_c8_involution_and_diagonalization(record_property):
    d1 = np.max(np.abs(P @ P - SIGMA0))
    d2 = np.max(np.abs(P @ SIGMA2 @ P - SIGMA3))
    record_property("measured", f"|P^2 - I| {d1:.1e}, |P s2 P - s3| {d2:.1e}")
    assert d1 < 1e-15 and d2 < 1e-15


@pytest.mark.criterion(8, "algebraic invariants")
def test_c8_nonlinearity_identity(record_property):
    g = Grid(64)
    rng = np.random.default_rng(7)
    A = rng.normal(size=64) + 1j * rng.normal(size=64)
    v = to_vstate(WKBState(g, np.zeros(64), A))
    A1, A2 = A.real, A.imag
    d = np.max(np.abs(-2j * v.v1 * v.v2 - (A1**2 + A2**2)))
    record_property("measured", f"|-2i v1 v2 - (A1^2 + A2^2)| {d:.1e}")
    assert d < 1e-13


@pytest.mark.criterion(8, "algebraic invariants")
def test_c8_coefficient_identities():
    a = ALPHA
    assert a[0] == a[6] and a[1] == a[5] and a[2] == a[4]
    assert abs(sum(a[0::2]) - 1) < 1e-15 and abs(sum(a[1::2]) - 1) < 1e-15
    assert abs(a[0] - 1 / (2 * (2 - 2 ** (1 / 3)))) < 1e-16
    getcontext().prec = 40
    b = [(Decimal(re), Decimal(im)) for re, im in BETA_DIGITS]
    tol = Decimal("1e-18")
    assert abs(b[3][0] - (Decimal("0.5") - b[1][0])) < tol
    assert abs(b[4][0] - (1 - 2 * b[0][0] - 2 * b[2][0])) < tol
    assert abs(2 * b[0][1] + 2 * b[2][1] + b[4][1]) < tol
    assert all(BETA[j] == BETA[8 - j] for j in range(4))
    assert all(np.real(c) > 0 for c in BETA[0::2]) and all(np.imag(c) == 0 for c in BETA[1::2])


@pytest.mark.criterion(8, "algebraic invariants")
@pytest.mark.parametrize("t1, t2", [(0.05, 0.13), (0.06 - 0.06j, 0.27 + 0.15j)])
def test_c8_flow4_semigroup(t1, t2):
    s = sine_state(64)
    a = flow4(flow4(s, t1, 0.25), t2, 0.25)
    b = flow4(s, t1 + t2, 0.25)
    assert np.max(np.abs(a.S - b.S)) < 1e-12 and np.max(np.abs(a.A - b.A)) < 1e-12


@pytest.mark.criterion(8, "algebraic invariants")
def test_c8_unimodular_multiplier_preserves_norm():
    g = Grid(128)
    rng = np.random.default_rng(11)
    f = rng.normal(size=128) + 1j * rng.normal(size=128)
    for tau in (1e-3, 0.1, 3.7):
        out = apply_multiplier(g, f, np.exp(-0.5j * g.k**2 * tau))
        assert abs(l2(g, out) / l2(g, f) - 1) < 1e-13


# ---------------------------------------------------------------- 9


@pytest.mark.criterion(9, "scheme2 agrees with the wave-function reference at eps = 1")
def test_c9_cross_method(record_property):
    eps = 1.0
    s = sine_state(NX)
    params = SimParams(eps, TF / 2**10)
    for _ in range(2**10):
        s = scheme2_step(s, params)
    ref = generate_reference("gpe", ReferenceConfig(eps, TF, NX, 2**12))
    err = compute_errors(wkb_to_psi(s, eps), ref, ("psi",), eps=eps).err_psi
    record_property("measured", f"err_psi {err:.2e}")
    assert err <= 1e-5
