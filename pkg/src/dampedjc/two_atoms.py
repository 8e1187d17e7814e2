"""Two atoms sharing one damped mode, restricted to a single excitation.

Amplitudes ``ct1, ct2, ct3`` multiply ``|e,g,0>, |g,e,0>, |g,g,1>``; ``lam``
is the weight of ``|g,g,0>``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelParams, TwoAtomInit
from .numerics import (DEFAULT_TOL, as_density_matrix, as_times, hermitian_eigenvalues, integrate_ode,
                       psd_sqrt, singular_values)

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
SPIN_FLIP = np.kron(SIGMA_Y, SIGMA_Y)


@dataclass(frozen=True)
class TwoAtomState:
    ct1: complex
    ct2: complex
    ct3: complex
    lam: float


def two_atom_rhs(params: ModelParams):
    """Right-hand side for ``(ct1, ct2, ct3, lam)``."""
    w0, wc, om, gam, d = params.omega0, params.omega_c, params.Omega, params.Gamma, params.D

    def rhs(t, y):
        c1, c2, c3 = y[0], y[1], y[2]
        return np.array([
            -1j * (w0 * c1 + om * c3 + d * c2),
            -1j * (w0 * c2 + om * c3 + d * c1),
            -1j * ((wc - 0.5j * gam) * c3 + om * (c1 + c2)),
            gam * (c3.real ** 2 + c3.imag ** 2),
        ])

    return rhs


@dataclass(frozen=True)
class TwoAtomTrajectory:
    """Array-backed sequence of :class:`TwoAtomState`."""

    times: np.ndarray
    ct1: np.ndarray
    ct2: np.ndarray
    ct3: np.ndarray
    lam: np.ndarray

    def __len__(self):
        return self.times.size

    def __getitem__(self, i) -> TwoAtomState:
        return TwoAtomState(complex(self.ct1[i]), complex(self.ct2[i]), complex(self.ct3[i]),
                            float(self.lam[i]))

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def norm_defect(self) -> np.ndarray:
        return (np.abs(self.ct1) ** 2 + np.abs(self.ct2) ** 2 + np.abs(self.ct3) ** 2
                + self.lam - 1.0)

    @property
    def concurrence(self) -> np.ndarray:
        return 2 * np.abs(self.ct1 * self.ct2)

    @property
    def dark_amplitude(self) -> np.ndarray:
        """Antisymmetric combination ``(ct1 - ct2)/sqrt(2)``, decoupled from the mode."""
        return (self.ct1 - self.ct2) / np.sqrt(2)


def evolve_two_atoms(init: TwoAtomInit, params: ModelParams, grid,
                     tol: float = DEFAULT_TOL) -> TwoAtomTrajectory:
    """Integrate the three-amplitude system from ``init`` on ``grid`` (starting at t = 0)."""
    params.require_resonance()
    t = as_times(grid)
    if t[0] != 0:
        raise ValueError("evolution grid must start at t = 0")
    y = integrate_ode(two_atom_rhs(params), [*init.amplitudes, 0.0], t, tol=tol)
    return TwoAtomTrajectory(t, y[:, 0], y[:, 1], y[:, 2], y[:, 3].real)


def reduced_two_atom_state(state: TwoAtomState) -> np.ndarray:
    """Two-atom density matrix on (ee, eg, ge, gg), the mode traced out."""
    rho = np.zeros((4, 4), dtype=complex)
    rho[1, 1] = abs(state.ct1) ** 2
    rho[2, 2] = abs(state.ct2) ** 2
    rho[1, 2] = state.ct1 * np.conj(state.ct2)
    rho[2, 1] = np.conj(rho[1, 2])
    rho[3, 3] = state.lam + abs(state.ct3) ** 2
    return rho


def concurrence_pair(state: TwoAtomState) -> float:
    return 2 * abs(state.ct1 * state.ct2)


def wootters_concurrence(rho) -> float:
    """Wootters concurrence of a two-qubit density matrix in the standard basis.

    The square roots of the eigenvalues of ``rho (sy x sy) rho* (sy x sy)`` are
    the singular values of ``sqrt(rho) (sy x sy) sqrt(rho)* (sy x sy)``; they are
    computed directly so that vanishing ones stay at rounding level.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 two-qubit state, got shape {rho.shape}")
    rho = as_density_matrix(rho)
    if hermitian_eigenvalues(rho)[0] < -1e-9:
        raise ValueError("density matrix is not positive semidefinite")
    root = psd_sqrt(rho)
    s = singular_values(root @ SPIN_FLIP @ root.conj() @ SPIN_FLIP)
    return float(max(0.0, s[0] - s[1] - s[2] - s[3]))


def steady_concurrence(init: TwoAtomInit) -> float:
    """Long-time concurrence ``|c1 - c2 exp(i theta1)|^2 / 2``.

    Only the antisymmetric (dark) amplitude survives the damping, so the
    limit does not involve ``c3``, ``theta2``, ``Gamma`` or ``D``.
    """
    c1, c2, _ = init.amplitudes
    return abs(c1 - c2) ** 2 / 2
