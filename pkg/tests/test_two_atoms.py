import math

import numpy as np
import pytest

from dampedjc.model import ModelParams, TwoAtomInit
from dampedjc.numerics import TimeGrid, pure_state
from dampedjc.two_atoms import (concurrence_pair, evolve_two_atoms, reduced_two_atom_state,
                                steady_concurrence, wootters_concurrence)
from dampedjc.two_excitation import build_lindblad_oracle

SQ = math.sqrt
FIG3 = (SQ(0.5), SQ(0.1), SQ(0.4))

# |ct1|, |ct2|, |ct3| from scipy.linalg.expm of the 3x3 generator
# [[0, D, 1], [D, 0, 1], [1, 1, -i Gamma/2]] (Omega = 1, omega = 0).
EXPM_REFERENCE = [
    # theta1, theta2, Gamma, D, t, 2|ct1 ct2|, |ct3|^2
    (0.0, 0.0, 6.0, 0.0, 1.0, 0.19349709033067455, 0.06040977098897998),
    (math.pi, 0.0, 6.0, 0.0, 2.0, 0.5298979163074449, 0.005989187752724723),
    (0.5 * math.pi, 0.25 * math.pi, 1.0, 0.5, 1.5, 0.46075556198700673, 0.24081612791670734),
]


@pytest.mark.parametrize("theta1, theta2, gamma, d, t, conc, mode", EXPM_REFERENCE)
def test_matrix_exponential_reference(theta1, theta2, gamma, d, t, conc, mode):
    init = TwoAtomInit(*FIG3, theta1, theta2)
    traj = evolve_two_atoms(init, ModelParams(Gamma=gamma, D=d), [0.0, t])
    assert traj.concurrence[1] == pytest.approx(conc, abs=1e-9)
    assert abs(traj.ct3[1]) ** 2 == pytest.approx(mode, abs=1e-9)


def test_dark_state_is_frozen():
    init = TwoAtomInit(SQ(0.5), SQ(0.5), 0.0, math.pi, 0.0)
    traj = evolve_two_atoms(init, ModelParams(Gamma=6.0), TimeGrid(0.0, 20.0, 41))
    assert np.max(np.abs(np.abs(traj.ct1) - SQ(0.5))) < 1e-9
    assert np.max(np.abs(np.abs(traj.ct2) - SQ(0.5))) < 1e-9
    assert np.max(np.abs(traj.ct3)) < 1e-9


@pytest.mark.parametrize("d", [0.0, 0.7])
def test_dark_amplitude_modulus_constant(d):
    init = TwoAtomInit(*FIG3, 0.3, 1.1)
    traj = evolve_two_atoms(init, ModelParams(Gamma=2.0, D=d), TimeGrid(0.0, 20.0, 41))
    dark = np.abs(traj.dark_amplitude)
    assert np.max(np.abs(dark - dark[0])) < 1e-9


@pytest.mark.parametrize("gamma", [0.0, 1.0, 6.0, 10.0])
def test_norm_identity(gamma):
    traj = evolve_two_atoms(TwoAtomInit(*FIG3, 0.5, 2.0), ModelParams(Gamma=gamma),
                            TimeGrid(0.0, 50.0, 201))
    assert np.max(np.abs(traj.norm_defect())) < 1e-8


class TestSteadyConcurrence:
    @pytest.mark.parametrize("theta1, value", [(0.0, 0.076393), (math.pi, 0.523607)])
    def test_values(self, theta1, value):
        assert steady_concurrence(TwoAtomInit(*FIG3, theta1)) == pytest.approx(value, abs=1e-6)

    @pytest.mark.parametrize("d", [0.0, 0.5])
    def test_reached_independent_of_dipole_coupling(self, d):
        init = TwoAtomInit(*FIG3, math.pi, 0.0)
        traj = evolve_two_atoms(init, ModelParams(Gamma=6.0, D=d), [0.0, 50.0])
        assert traj.concurrence[-1] == pytest.approx(steady_concurrence(init), abs=1e-6)

    def test_monotone_in_theta1(self):
        values = [steady_concurrence(TwoAtomInit(*FIG3, th)) for th in np.linspace(0, math.pi, 9)]
        assert all(b > a for a, b in zip(values, values[1:]))


class TestWootters:
    def test_bell_state(self):
        psi = np.array([1, 0, 0, 1]) / SQ(2)
        assert wootters_concurrence(pure_state(psi)) == pytest.approx(1.0, abs=1e-12)

    def test_singlet_like(self):
        psi = np.array([0, 1, 1, 0]) / SQ(2)
        assert wootters_concurrence(pure_state(psi)) == pytest.approx(1.0, abs=1e-12)

    def test_product_state(self):
        a = np.array([0.6, 0.8])
        b = np.array([1, 1j]) / SQ(2)
        assert wootters_concurrence(pure_state(np.kron(a, b))) == pytest.approx(0.0, abs=1e-12)

    def test_maximally_mixed(self):
        assert wootters_concurrence(np.eye(4) / 4) == 0.0

    def test_x_state(self):
        rho = np.zeros((4, 4), dtype=complex)
        rho[1, 1], rho[2, 2] = 0.36, 0.09
        rho[1, 2] = 0.6 * np.conj(0.3j)
        rho[2, 1] = np.conj(rho[1, 2])
        rho[3, 3] = 0.55
        assert wootters_concurrence(rho) == pytest.approx(0.36, abs=1e-12)

    def test_werner_state(self):
        # p |Phi+><Phi+| + (1 - p) I/4 has concurrence max(0, (3p - 1)/2)
        bell = pure_state(np.array([1, 0, 0, 1]) / SQ(2))
        for p in (0.2, 0.5, 0.9):
            rho = p * bell + (1 - p) * np.eye(4) / 4
            assert wootters_concurrence(rho) == pytest.approx(max(0.0, (3 * p - 1) / 2), abs=1e-12)

    @pytest.mark.parametrize("bad", [np.eye(3) / 3, np.eye(4), np.diag([1.2, -0.2, 0, 0])])
    def test_rejects_invalid(self, bad):
        with pytest.raises(ValueError):
            wootters_concurrence(bad)

    def test_reduced_state_formula(self):
        traj = evolve_two_atoms(TwoAtomInit(*FIG3, 0.4, 0.0), ModelParams(Gamma=6.0),
                                TimeGrid(0.0, 5.0, 26))
        for state in traj:
            assert wootters_concurrence(reduced_two_atom_state(state)) == pytest.approx(
                concurrence_pair(state), abs=1e-9)


def test_matches_master_equation():
    params = ModelParams(Gamma=6.0, D=0.5)
    init = TwoAtomInit(*FIG3, math.pi, 0.5 * math.pi)
    oracle = build_lindblad_oracle(params, n_atoms=2)
    a1, a2, a3 = init.amplitudes
    psi = oracle.ket({("e", "g", 0): a1, ("g", "e", 0): a2, ("g", "g", 1): a3})
    grid = TimeGrid(0.0, 5.0, 11)
    rhos = oracle.evolve(pure_state(psi), grid)
    traj = evolve_two_atoms(init, params, grid)
    for k, rho in enumerate(rhos):
        atoms = oracle.trace_out_mode(rho)
        # oracle atom basis (e, g) x (e, g) coincides with (ee, eg, ge, gg)
        assert np.max(np.abs(atoms - reduced_two_atom_state(traj[k]))) < 1e-8


def test_requires_resonance():
    with pytest.raises(ValueError, match="resonance"):
        evolve_two_atoms(TwoAtomInit(*FIG3), ModelParams(omega0=1.0), [0.0, 1.0])
