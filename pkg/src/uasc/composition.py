"""Composition coefficients: the real triple-jump and the complex 9-stage method.

``ALPHA`` are the seven substep fractions of the palindromic triple jump
``A(a1) B(a2) A(a3) B(a4) A(a5) B(a6) A(a7)`` that lifts a symmetric
second-order splitting to order four. ``a3, a4, a5`` are negative, so both
flows must be reversible.

``BETA`` are the nine substeps of a fourth-order splitting with complex
coefficients. Odd entries (for the parabolic flow) have positive real part
and even entries (for the flow carrying the Schrodinger terms) are real.
"""

from __future__ import annotations

from typing import Callable, Sequence

_GAMMA1 = 1.0 / (2.0 - 2.0 ** (1.0 / 3.0))

_A1 = 0.5 * _GAMMA1
_A2 = _GAMMA1
ALPHA: tuple[float, ...] = (
    _A1,
    _A2,
    0.5 - _A1,
    1.0 - 2.0 * _A2,
    0.5 - _A1,
    _A2,
    _A1,
)

# Published 20-digit literals as (real, imag) strings, kept for exact checks;
# beta4 = 0.5 - beta2, beta5 = 1 - 2 beta1 - 2 beta3.
BETA_DIGITS: tuple[tuple[str, str], ...] = (
    ("0.060078275263542357774", "-0.060314841253378523039"),
    ("0.18596881959910913140", "0"),
    ("0.27021183913361078161", "0.15290393229116195895"),
    ("0.31403118040089086860", "0"),
    ("0.33941977120569372122", "-0.18517818207556687181"),
)
_B1, _B2, _B3, _B4, _B5 = (complex(float(re), float(im)) for re, im in BETA_DIGITS)
_B2, _B4 = _B2.real, _B4.real
BETA: tuple[complex, ...] = (_B1, _B2, _B3, _B4, _B5, _B4, _B3, _B2, _B1)


def compose(flow_a: Callable, flow_b: Callable, coefficients: Sequence, h):
    """Return ``state -> ...`` applying the alternating composition.

    ``coefficients[0]`` goes to ``flow_a``, ``coefficients[1]`` to ``flow_b``
    and so on. The product is palindromic for both coefficient tables, so
    the order of application is immaterial; it runs left to right.
    """

    def step(state):
        for j, c in enumerate(coefficients):
            flow = flow_a if j % 2 == 0 else flow_b
            state = flow(state, c * h)
        return state

    return step


def yoshida_triple(flow_a: Callable, flow_b: Callable, h):
    """Seven-stage fourth-order composition of two reversible flows.

    Each flow is called as ``flow(state, tau)`` with real ``tau`` (some
    negative). Returns a one-argument step function.
    """
    return compose(flow_a, flow_b, ALPHA, h)
