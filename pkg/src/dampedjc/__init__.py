"""Damped Jaynes-Cummings dynamics with correlated atom-mode initial states.

The package covers one atom in the single- and two-excitation sectors, the
atomic trace distance with its initial-information bound, and two atoms
sharing a damped mode. A small CLI reproduces a catalog of experiments.
"""
from .model import (CorrelatedInit, ModelParams, ProductInit, TwoAtomInit, classify_regime,
                    marginals, product_from_marginals, product_partner)
from .numerics import (DEFAULT_TOL, IntegrationError, NotHermitianError, TimeGrid,
                       hermitian_eigenvalues, integrate_ode, trace_distance)
from .single_excitation import evolve, excited_population, population_terms, propagator
from .two_excitation import build_lindblad_oracle, evolve_e1, excited_population_product
from .information import distance_series, initial_info_bound, rescaled_population
from .two_atoms import evolve_two_atoms, steady_concurrence, wootters_concurrence
from .scenarios import catalog, get_scenario, run_scenario
from .table import TimeSeriesTable

__version__ = "0.1.0"

__all__ = [
    "CorrelatedInit", "ModelParams", "ProductInit", "TwoAtomInit", "classify_regime", "marginals",
    "product_from_marginals", "product_partner", "DEFAULT_TOL", "IntegrationError",
    "NotHermitianError", "TimeGrid", "hermitian_eigenvalues", "integrate_ode", "trace_distance",
    "evolve", "excited_population", "population_terms", "propagator", "build_lindblad_oracle",
    "evolve_e1", "excited_population_product", "distance_series", "initial_info_bound",
    "rescaled_population", "evolve_two_atoms", "steady_concurrence", "wootters_concurrence",
    "catalog", "get_scenario", "run_scenario", "TimeSeriesTable",
]
