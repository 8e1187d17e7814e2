"""Rescaled populations, atomic trace distance and the initial-information bound."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import NORM_TOL, CorrelatedInit, ModelParams, ProductInit
from .numerics import DEFAULT_TOL, as_times
from .single_excitation import excited_population
from .table import TIME_COLUMN, TimeSeriesTable
from .two_excitation import excited_population_product

BACKFLOW_SLACK = 1e-9


@dataclass(frozen=True)
class PopulationPair:
    """Excited populations for the correlated (``p_corr``) and product (``p_prod``) states.

    Fields may be scalars or equal-shape arrays.
    """

    p_corr: float | np.ndarray
    p_prod: float | np.ndarray


def rescaled_population(p_t, p_0):
    """Population relative to its initial value."""
    if np.any(np.asarray(p_0) <= 0):
        raise ValueError("rescaled population undefined for zero initial population")
    return np.asarray(p_t) / p_0 if np.ndim(p_t) else p_t / p_0


def atomic_trace_distance(pair: PopulationPair):
    """Trace distance between two atom states that are diagonal in (e, g)."""
    return np.abs(np.asarray(pair.p_corr) - np.asarray(pair.p_prod)) if np.ndim(pair.p_corr) \
        else abs(pair.p_corr - pair.p_prod)


def info_bound_from_amplitudes(C1: complex, C2: complex, B1: complex, B2: complex) -> float:
    """Relative information initially outside the atom, from complex amplitudes.

    ``C1, C2`` are the correlated-state amplitudes, ``B1, B2`` the atomic
    amplitudes of the product state whose mode marginal is ``|C1|^2, |C2|^2``.
    """
    x = abs(B2 * C1) ** 2
    y = abs(B1 * C2) ** 2
    total = 0.5 * (np.sqrt((x - y) ** 2 + 4 * abs(C1 * C2) ** 2) + x + y)
    return float(total - abs(abs(C2) ** 2 - abs(B2) ** 2))


def initial_info_bound(corr: CorrelatedInit, prod: ProductInit) -> float:
    C1, C2 = corr.amplitudes
    if abs(prod.mode_p0 - corr.c1 ** 2) > NORM_TOL or abs(prod.mode_p1 - corr.c2 ** 2) > NORM_TOL:
        raise ValueError("product state must share the mode marginal of the correlated state")
    return info_bound_from_amplitudes(C1, C2, prod.b1, prod.b2)


def population_pair(corr: CorrelatedInit, prod: ProductInit, params: ModelParams, t,
                    tol: float = DEFAULT_TOL) -> PopulationPair:
    return PopulationPair(excited_population(corr, params, t),
                          excited_population_product(prod, params, t, tol=tol))


def distance_series(corr: CorrelatedInit, prod: ProductInit, params: ModelParams, grid,
                    tol: float = DEFAULT_TOL) -> TimeSeriesTable:
    """Atomic trace distance along ``grid`` together with the bound columns.

    Columns: ``D``, ``D_minus_D0``, ``bound_I``, ``D0_plus_I`` and ``backflow``
    (1 where ``D`` exceeds ``D(0)`` by more than the slack).
    """
    t = as_times(grid)
    if t[0] != 0:
        raise ValueError("grid must start at t = 0")
    pair = population_pair(corr, prod, params, t, tol=tol)
    d = atomic_trace_distance(pair)
    bound = initial_info_bound(corr, prod)
    n = t.size
    return TimeSeriesTable(
        {
            TIME_COLUMN: params.Omega * t,
            "D": d,
            "D_minus_D0": d - d[0],
            "bound_I": np.full(n, bound),
            "D0_plus_I": np.full(n, d[0] + bound),
            "backflow": (d > d[0] + BACKFLOW_SLACK).astype(float),
        },
        {"params": vars(params).copy(), "bound_I": bound},
    )
