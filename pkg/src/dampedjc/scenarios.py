"""Catalog of figure experiments and the runner that turns them into tables.

A scenario is a set of *series*, each with its own parameters and initial
state, evaluated on a common time grid. Every requested observable yields one
column per series, named ``<observable>_<series label>``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .information import BACKFLOW_SLACK, initial_info_bound, rescaled_population
from .model import (CorrelatedInit, ModelParams, ProductInit, TwoAtomInit, product_from_marginals,
                    product_partner)
from .numerics import DEFAULT_TOL, TimeGrid
from .single_excitation import population_terms
from .table import TIME_COLUMN, TimeSeriesTable
from .two_atoms import evolve_two_atoms, steady_concurrence
from .two_excitation import excited_population_product

ONE_ATOM = "one-atom"
TWO_ATOM = "two-atom"

ONE_ATOM_OBSERVABLES = (
    "excited_corr", "excited_prod", "rescaled_corr", "rescaled_prod", "interference",
    "trace_distance", "distance_gain", "bound", "upper_line", "backflow",
)
TWO_ATOM_OBSERVABLES = (
    "concurrence", "steady_concurrence", "dark_population", "mode_population", "lambda",
)
OBSERVABLES = {ONE_ATOM: ONE_ATOM_OBSERVABLES, TWO_ATOM: TWO_ATOM_OBSERVABLES}
PHASES = {ONE_ATOM: ("theta",), TWO_ATOM: ("theta1", "theta2")}

# observables that need the product-state population
_NEEDS_PRODUCT = {"excited_prod", "rescaled_prod", "trace_distance", "distance_gain", "bound",
                  "upper_line", "backflow"}


def format_angle(theta: float) -> str:
    """Label an angle as a multiple of pi: ``0``, ``0.5pi``, ``pi``, ``1.5pi``."""
    m = round(theta / math.pi, 10)
    if m == 0:
        return "0"
    if m == 1:
        return "pi"
    return f"{m:g}pi"


@dataclass(frozen=True)
class Series:
    label: str
    params: ModelParams
    initial: CorrelatedInit | TwoAtomInit
    product: ProductInit | None = None

    def describe(self) -> dict:
        out = {"label": self.label, "params": vars(self.params).copy(),
               "initial": vars(self.initial).copy()}
        if self.product is not None:
            p = self.product
            out["product"] = {"b1": [p.b1.real, p.b1.imag], "b2": [p.b2.real, p.b2.imag],
                              "mode_p0": p.mode_p0, "mode_p1": p.mode_p1}
        return out


@dataclass(frozen=True)
class Scenario:
    name: str
    model: str
    series: tuple[Series, ...]
    grid: TimeGrid
    observables: tuple[str, ...]
    description: str = ""
    notes: dict = field(default_factory=dict)

    def validate(self):
        if self.model not in OBSERVABLES:
            raise ValueError(f"unknown model {self.model!r}")
        if not self.series:
            raise ValueError(f"scenario {self.name!r} has no series")
        labels = [s.label for s in self.series]
        if len(set(labels)) != len(labels):
            raise ValueError(f"scenario {self.name!r} has duplicate series labels")
        if self.grid.n_points < 2 or not self.grid.t_end > self.grid.t_start:
            raise ValueError(f"scenario {self.name!r} needs a grid of nonzero length")
        if self.grid.t_start != 0:
            raise ValueError(f"scenario {self.name!r} grid must start at t = 0")
        known = OBSERVABLES[self.model]
        for obs in self.observables:
            if obs not in known:
                raise ValueError(f"unknown observable {obs!r} for {self.model} model")
        if not self.observables:
            raise ValueError(f"scenario {self.name!r} requests no observables")
        omegas = {s.params.Omega for s in self.series}
        if len(omegas) != 1:
            raise ValueError(f"scenario {self.name!r} mixes coupling constants")
        for s in self.series:
            want = CorrelatedInit if self.model == ONE_ATOM else TwoAtomInit
            if not isinstance(s.initial, want):
                raise ValueError(f"series {s.label!r} initial state does not match {self.model}")
            s.params.require_resonance()
            if self.model == ONE_ATOM and s.product is None \
                    and _NEEDS_PRODUCT.intersection(self.observables):
                raise ValueError(f"series {s.label!r} lacks a product partner")

    def with_grid(self, t_end: float | None = None, n_points: int | None = None) -> "Scenario":
        """Override the grid; ``t_end`` is given in units of ``1/Omega``."""
        omega = self.series[0].params.Omega
        grid = TimeGrid(0.0,
                        self.grid.t_end if t_end is None else t_end / omega,
                        self.grid.n_points if n_points is None else n_points)
        return replace(self, grid=grid)

    def phase_sweep(self, phase: str, values) -> "Scenario":
        """New scenario whose series vary ``phase`` over ``values``, templated on the first series."""
        if phase not in PHASES[self.model]:
            raise ValueError(f"phase {phase!r} not available for the {self.model} model "
                             f"(choose from {', '.join(PHASES[self.model])})")
        template = self.series[0]
        series = tuple(
            replace(template, label=f"{phase}_{format_angle(v)}",
                    initial=replace(template.initial, **{phase: float(v)}))
            for v in values)
        if not series:
            raise ValueError("phase sweep needs at least one value")
        return replace(self, name=f"{self.name}-sweep-{phase}", series=series)


# ---------------------------------------------------------------------------
# Catalog

FIG1_COMBOS = ((0.1, 0.9), (0.5, 0.5), (0.9, 0.1))
FIG1_THETAS = (0.5 * math.pi, 0.0, 1.5 * math.pi)
FIG2_THETAS = {"fig2a": 0.5 * math.pi, "fig2b": 0.0, "fig2c": 1.5 * math.pi}
FIG2_GAMMAS = (0.0, 1.0, 6.0)
FIG3_AMPLITUDES = (math.sqrt(1 / 2), math.sqrt(1 / 10), math.sqrt(4 / 10))
FIG3A_THETA2 = (0.0, 0.25 * math.pi, 0.5 * math.pi, math.pi)
FIG3B_THETA1 = (0.0, 0.25 * math.pi, 0.5 * math.pi, 0.75 * math.pi, math.pi)

SHORT_GRID = TimeGrid(0.0, 15.0, 1501)
LONG_GRID = TimeGrid(0.0, 500.0, 50001)


def _combo_label(p1: float) -> str:
    return f"c1sq_{p1:g}"


def _fig1_population(name: str, gamma: float) -> Scenario:
    params = ModelParams.resonant(Gamma=gamma)
    series = []
    for p1, p2 in FIG1_COMBOS:
        init = CorrelatedInit(math.sqrt(p1), math.sqrt(p2), 0.0)
        series.append(Series(_combo_label(p1), params, init, product_from_marginals(init)))
    return Scenario(name, ONE_ATOM, tuple(series), SHORT_GRID, ("rescaled_corr", "rescaled_prod"),
                    f"rescaled excited population, theta = 0, correlated vs product, "
                    f"Gamma/Omega = {gamma:g}")


def _fig1_phases(name: str, gamma: float) -> Scenario:
    params = ModelParams.resonant(Gamma=gamma)
    series = []
    for p1, p2 in FIG1_COMBOS:
        for theta in FIG1_THETAS:
            init = CorrelatedInit(math.sqrt(p1), math.sqrt(p2), theta)
            series.append(Series(f"{_combo_label(p1)}_theta_{format_angle(theta)}", params, init,
                                 product_from_marginals(init)))
    return Scenario(name, ONE_ATOM, tuple(series), SHORT_GRID, ("rescaled_corr", "interference"),
                    f"rescaled excited population of the correlated state for three phases, "
                    f"Gamma/Omega = {gamma:g}")


def _fig2(name: str, theta: float) -> Scenario:
    init = CorrelatedInit(math.sqrt(4 / 7), math.sqrt(3 / 7), theta)
    C1, C2 = init.amplitudes
    # the product partner swaps the amplitudes: B1 = C2(0), B2 = C1(0)
    prod = product_partner(init, C2, C1)
    series = tuple(Series(f"gamma_{g:g}", ModelParams.resonant(Gamma=g), init, prod)
                   for g in FIG2_GAMMAS)
    return Scenario(name, ONE_ATOM, series, LONG_GRID,
                    ("trace_distance", "distance_gain", "bound", "upper_line", "backflow"),
                    f"atomic trace distance, theta = {format_angle(theta)}, Gamma/Omega in "
                    f"{{0, 1, 6}}")


def _fig3(name: str, phase: str, values) -> Scenario:
    params = ModelParams.resonant(Gamma=6.0, D=0.0)
    c1, c2, c3 = FIG3_AMPLITUDES
    series = []
    for v in values:
        init = TwoAtomInit(c1, c2, c3, **{phase: v})
        series.append(Series(f"{phase}_{format_angle(v)}", params, init))
    other = "theta1" if phase == "theta2" else "theta2"
    return Scenario(name, TWO_ATOM, tuple(series), SHORT_GRID, ("concurrence",),
                    f"two-atom concurrence over {phase}, {other} = 0, Gamma/Omega = 6, D = 0")


def catalog() -> list[Scenario]:
    scenarios = [
        _fig1_population("fig1a", 6.0),
        _fig1_population("fig1b", 1.0),
        _fig1_phases("fig1c", 6.0),
        _fig1_phases("fig1d", 1.0),
        *(_fig2(name, theta) for name, theta in FIG2_THETAS.items()),
        _fig3("fig3a", "theta2", FIG3A_THETA2),
        _fig3("fig3b", "theta1", FIG3B_THETA1),
    ]
    for s in scenarios:
        s.validate()
    return scenarios


def get_scenario(name: str) -> Scenario:
    for s in catalog():
        if s.name == name:
            return s
    raise KeyError(f"unknown scenario {name!r}")


# ---------------------------------------------------------------------------
# Runner

def _one_atom_columns(s: Series, t: np.ndarray, observables, tol) -> dict:
    terms = population_terms(s.initial, s.params, t)
    p_corr = terms.total
    p_prod = None
    if _NEEDS_PRODUCT.intersection(observables):
        p_prod = excited_population_product(s.product, s.params, t, tol=tol)
    d = np.abs(p_corr - p_prod) if p_prod is not None else None
    bound = initial_info_bound(s.initial, s.product) if s.product is not None else math.nan

    cols = {}
    for obs in observables:
        if obs == "excited_corr":
            cols[obs] = p_corr
        elif obs == "excited_prod":
            cols[obs] = p_prod
        elif obs == "rescaled_corr":
            cols[obs] = rescaled_population(p_corr, s.initial.c1 ** 2)
        elif obs == "rescaled_prod":
            cols[obs] = rescaled_population(p_prod, abs(s.product.b1) ** 2)
        elif obs == "interference":
            cols[obs] = terms.interference
        elif obs == "trace_distance":
            cols[obs] = d
        elif obs == "distance_gain":
            cols[obs] = d - d[0]
        elif obs == "bound":
            cols[obs] = np.full(t.size, bound)
        elif obs == "upper_line":
            cols[obs] = np.full(t.size, d[0] + bound)
        elif obs == "backflow":
            cols[obs] = (d > d[0] + BACKFLOW_SLACK).astype(float)
    return cols


def _two_atom_columns(s: Series, t: np.ndarray, observables, tol) -> dict:
    traj = evolve_two_atoms(s.initial, s.params, t, tol=tol)
    cols = {}
    for obs in observables:
        if obs == "concurrence":
            cols[obs] = traj.concurrence
        elif obs == "steady_concurrence":
            cols[obs] = np.full(t.size, steady_concurrence(s.initial))
        elif obs == "dark_population":
            cols[obs] = np.abs(traj.dark_amplitude) ** 2
        elif obs == "mode_population":
            cols[obs] = np.abs(traj.ct3) ** 2
        elif obs == "lambda":
            cols[obs] = traj.lam
    return cols


def run_scenario(scenario: Scenario, tol: float = DEFAULT_TOL) -> TimeSeriesTable:
    """Evaluate every observable for every series on the scenario grid."""
    scenario.validate()
    t = scenario.grid.times()
    omega = scenario.series[0].params.Omega
    columns = {TIME_COLUMN: omega * t}
    per_series = {}
    for s in scenario.series:
        if scenario.model == ONE_ATOM:
            per_series[s.label] = _one_atom_columns(s, t, scenario.observables, tol)
        else:
            per_series[s.label] = _two_atom_columns(s, t, scenario.observables, tol)
    for obs in scenario.observables:
        for s in scenario.series:
            columns[f"{obs}_{s.label}"] = per_series[s.label][obs]
    metadata = {
        "scenario": scenario.name,
        "model": scenario.model,
        "description": scenario.description,
        "grid": {"omega_t_start": omega * scenario.grid.t_start,
                 "omega_t_end": omega * scenario.grid.t_end,
                 "n_points": scenario.grid.n_points},
        "tol": tol,
        "series": [s.describe() for s in scenario.series],
    }
    return TimeSeriesTable(columns, metadata)
