"""Named initial data sets."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import StructuralError


@dataclass(frozen=True)
class InitialData:
    id: str
    S0: Callable[[np.ndarray], np.ndarray]
    A0: Callable[[np.ndarray], np.ndarray]


# A0 = sin is not normalized to unit L2 mass; kept as the benchmark uses it.
PAPER = InitialData("paper", lambda x: np.sin(x) / 2.0, np.sin)
ZERO = InitialData("zero", np.zeros_like, np.zeros_like)
PLANE = InitialData("plane", np.zeros_like, np.ones_like)

REGISTRY = {d.id: d for d in (PAPER, ZERO, PLANE)}


def get_initial_data(name: str) -> InitialData:
    try:
        return REGISTRY[name]
    except KeyError:
        raise StructuralError(f"unknown initial data {name!r}; known: {sorted(REGISTRY)}") from None
