import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dampedjc.information import (BACKFLOW_SLACK, PopulationPair, atomic_trace_distance,
                                  distance_series, info_bound_from_amplitudes, initial_info_bound,
                                  population_pair, rescaled_population)
from dampedjc.model import CorrelatedInit, ModelParams, ProductInit, product_partner
from dampedjc.numerics import TimeGrid, trace_distance

SQ = math.sqrt


def fig2_pair(theta=0.5 * math.pi):
    corr = CorrelatedInit(SQ(4 / 7), SQ(3 / 7), theta)
    C1, C2 = corr.amplitudes
    return corr, product_partner(corr, C2, C1)


def full_state_bound(C1, C2, B1, B2):
    """Trace distance of the joint states minus that of the atom marginals.

    Basis (e0, e1, g0, g1); the product state is diag(|B1|^2, |B2|^2) on the
    atom times diag(|C1|^2, |C2|^2) on the mode.
    """
    psi = np.array([C1, 0, 0, C2])
    corr = np.outer(psi, psi.conj())
    prod = np.kron(np.diag([abs(B1) ** 2, abs(B2) ** 2]), np.diag([abs(C1) ** 2, abs(C2) ** 2]))
    return trace_distance(corr, prod) - abs(abs(C1) ** 2 - abs(B1) ** 2)


class TestBound:
    def test_equal_amplitudes(self):
        h = 1 / SQ(2)
        assert info_bound_from_amplitudes(h, h, h, h) == pytest.approx(0.75, abs=1e-15)

    def test_caption_inputs(self):
        corr, prod = fig2_pair()
        assert initial_info_bound(corr, prod) == pytest.approx(30 / 49, abs=1e-12)

    def test_no_mode_excitation(self):
        assert info_bound_from_amplitudes(1.0, 0.0, 1.0, 0.0) == 0.0

    @pytest.mark.parametrize("theta", [0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi])
    def test_phase_independent(self, theta):
        corr, prod = fig2_pair(theta)
        assert initial_info_bound(corr, prod) == pytest.approx(30 / 49, abs=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.floats(0.0, 2 * math.pi))
    def test_matches_joint_trace_distance(self, pc, pb, phase):
        C1, C2 = SQ(pc), SQ(1 - pc) * complex(math.cos(phase), math.sin(phase))
        B1, B2 = SQ(pb), SQ(1 - pb)
        assert info_bound_from_amplitudes(C1, C2, B1, B2) == pytest.approx(
            full_state_bound(C1, C2, B1, B2), abs=1e-12)

    def test_requires_shared_mode_marginal(self):
        corr = CorrelatedInit(SQ(0.5), SQ(0.5))
        with pytest.raises(ValueError, match="marginal"):
            initial_info_bound(corr, ProductInit(1.0, 0.0, 0.9, 0.1))


class TestPopulations:
    def test_initial_distance(self):
        corr, prod = fig2_pair()
        pair = population_pair(corr, prod, ModelParams(), 0.0)
        assert atomic_trace_distance(pair) == pytest.approx(1 / 7, abs=1e-12)

    def test_rescaled(self):
        assert rescaled_population(0.2, 0.4) == 0.5
        assert np.allclose(rescaled_population(np.array([0.1, 0.4]), 0.4), [0.25, 1.0])

    def test_rescaled_undefined_for_empty_atom(self):
        with pytest.raises(ValueError):
            rescaled_population(0.3, 0.0)

    def test_distance_of_arrays(self):
        pair = PopulationPair(np.array([0.5, 0.2]), np.array([0.1, 0.4]))
        assert np.allclose(atomic_trace_distance(pair), [0.4, 0.2])

    def test_atom_distance_matches_reduced_states(self):
        # the reduced atom states are diagonal, so D is |Pe_corr - Pe_prod|
        corr, prod = fig2_pair()
        params = ModelParams(Gamma=1.0)
        t = 3.0
        pair = population_pair(corr, prod, params, t)
        rho_c = np.diag([pair.p_corr, 1 - pair.p_corr])
        rho_p = np.diag([pair.p_prod, 1 - pair.p_prod])
        assert atomic_trace_distance(pair) == pytest.approx(trace_distance(rho_c, rho_p), abs=1e-14)


class TestDistanceSeries:
    def test_columns(self):
        corr, prod = fig2_pair()
        tab = distance_series(corr, prod, ModelParams(Gamma=1.0), TimeGrid(0.0, 10.0, 101))
        assert tab.names == ["omega_t", "D", "D_minus_D0", "bound_I", "D0_plus_I", "backflow"]
        assert tab["D"][0] == pytest.approx(1 / 7, abs=1e-12)
        assert np.all(tab["D_minus_D0"] <= tab["bound_I"] + 1e-9)
        assert set(np.unique(tab["backflow"])) <= {0.0, 1.0}

    def test_undamped_shows_backflow(self):
        corr, prod = fig2_pair()
        tab = distance_series(corr, prod, ModelParams(), TimeGrid(0.0, 20.0, 201))
        assert tab["backflow"].max() == 1.0
        assert np.all(tab["D"][tab["backflow"] == 1] > tab["D"][0] + BACKFLOW_SLACK)

    def test_grid_must_start_at_zero(self):
        corr, prod = fig2_pair()
        with pytest.raises(ValueError):
            distance_series(corr, prod, ModelParams(), [1.0, 2.0])
