"""Two-excitation sector and the brute-force Lindblad oracle.

The uncorrelated initial state contains ``|e,1><e,1|``, which carries two
excitations. Its evolution stays on the basis

    |0~> = |g,0>, |1~> = |e,1>, |2~> = |g,2>, |3~> = |e,0>, |4~> = |g,1>

and is described by six matrix elements ``r11, r12, r22, r33, r34, r44``.
``r00`` follows from the unit trace.

The oracle assembles the full master equation on a truncated Fock space from
explicit tensor products and is deliberately independent of the sector code.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelParams, ProductInit
from .numerics import DEFAULT_TOL, as_times, integrate_ode
from .single_excitation import propagator

SQRT2 = np.sqrt(2.0)
LEAKAGE_TOL = 1e-9


@dataclass(frozen=True)
class TwoExcDensity:
    r11: float
    r22: float
    r33: float
    r44: float
    r12: complex
    r34: complex

    @property
    def r00(self) -> float:
        return 1.0 - self.r11 - self.r22 - self.r33 - self.r44

    def matrix(self) -> np.ndarray:
        """5x5 density matrix on the ordered basis |0~> ... |4~>."""
        m = np.zeros((5, 5), dtype=complex)
        m[0, 0] = self.r00
        m[1, 1], m[2, 2], m[3, 3], m[4, 4] = self.r11, self.r22, self.r33, self.r44
        m[1, 2], m[2, 1] = self.r12, np.conj(self.r12)
        m[3, 4], m[4, 3] = self.r34, np.conj(self.r34)
        return m


# state vector layout of the sector system
_E1_VARS = ("r11", "r12", "r21", "r22", "r33", "r34", "r43", "r44", "r00")
_I = {name: i for i, name in enumerate(_E1_VARS)}


def e1_generator(params: ModelParams, keep_typo: bool = False) -> np.ndarray:
    """Constant matrix ``M`` with ``d/dt (r11, r12, r21, r22, r33, r34, r43, r44, r00) = M r``.

    The conjugate coherences ``r21, r43`` are carried explicitly so that the
    system is complex-linear. ``keep_typo`` adds a spurious ``-i omega_c r44``
    term to the ``r44`` equation; it exists only to show that such a term
    breaks trace conservation.
    """
    w0, wc, om, gam = params.omega0, params.omega_c, params.Omega, params.Gamma
    det = w0 - wc
    s2om = SQRT2 * om
    m = np.zeros((9, 9), dtype=complex)

    def add(row, col, value):
        m[_I[row], _I[col]] += value

    # d r11 = -i sqrt2 Om (r21 - r12) - Gam r11
    add("r11", "r21", -1j * s2om)
    add("r11", "r12", 1j * s2om)
    add("r11", "r11", -gam)
    # d r12 = -i [det r12 + sqrt2 Om (r22 - r11)] - 3 Gam/2 r12
    add("r12", "r12", -1j * det - 1.5 * gam)
    add("r12", "r22", -1j * s2om)
    add("r12", "r11", 1j * s2om)
    add("r21", "r21", 1j * det - 1.5 * gam)
    add("r21", "r22", 1j * s2om)
    add("r21", "r11", -1j * s2om)
    # d r22 = -i sqrt2 Om (r12 - r21) - 2 Gam r22
    add("r22", "r12", -1j * s2om)
    add("r22", "r21", 1j * s2om)
    add("r22", "r22", -2 * gam)
    # d r33 = -i Om (r43 - r34) + Gam r11
    add("r33", "r43", -1j * om)
    add("r33", "r34", 1j * om)
    add("r33", "r11", gam)
    # d r34 = -i [det r34 + Om (r44 - r33)] - Gam/2 (r34 - 2 sqrt2 r12)
    add("r34", "r34", -1j * det - 0.5 * gam)
    add("r34", "r44", -1j * om)
    add("r34", "r33", 1j * om)
    add("r34", "r12", SQRT2 * gam)
    add("r43", "r43", 1j * det - 0.5 * gam)
    add("r43", "r44", 1j * om)
    add("r43", "r33", -1j * om)
    add("r43", "r21", SQRT2 * gam)
    # d r44 = -i Om (r34 - r43) - Gam/2 (2 r44 - 4 r22)
    add("r44", "r34", -1j * om)
    add("r44", "r43", 1j * om)
    add("r44", "r44", -gam)
    add("r44", "r22", 2 * gam)
    if keep_typo:
        add("r44", "r44", -1j * wc)
    # d r00 = Gam r44
    add("r00", "r44", gam)
    return m


def e1_rhs(params: ModelParams, keep_typo: bool = False):
    m = e1_generator(params, keep_typo)

    def rhs(t, y):
        return m @ y

    return rhs


@dataclass(frozen=True)
class TwoExcTrajectory:
    """Array-backed sequence of :class:`TwoExcDensity`."""

    times: np.ndarray
    r11: np.ndarray
    r22: np.ndarray
    r33: np.ndarray
    r44: np.ndarray
    r12: np.ndarray
    r34: np.ndarray

    def __len__(self):
        return self.times.size

    def __getitem__(self, i) -> TwoExcDensity:
        return TwoExcDensity(float(self.r11[i]), float(self.r22[i]), float(self.r33[i]),
                             float(self.r44[i]), complex(self.r12[i]), complex(self.r34[i]))

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    @property
    def r00(self) -> np.ndarray:
        return 1.0 - self.r11 - self.r22 - self.r33 - self.r44

    @property
    def excited(self) -> np.ndarray:
        """Atomic excited-state probability ``r11 + r33``."""
        return self.r11 + self.r33


def evolve_e1(params: ModelParams, grid, tol: float = DEFAULT_TOL) -> TwoExcTrajectory:
    """Evolve ``rho(0) = |e,1><e,1|`` on ``grid`` (which must start at t = 0)."""
    t = as_times(grid)
    if t[0] != 0:
        raise ValueError("evolution grid must start at t = 0")
    y = integrate_ode(e1_rhs(params), _e1_initial(), t, tol=tol)
    col = {name: y[:, i] for name, i in _I.items()}
    return TwoExcTrajectory(t, col["r11"].real, col["r22"].real, col["r33"].real,
                            col["r44"].real, col["r12"], col["r34"])


def _e1_initial() -> np.ndarray:
    y0 = np.zeros(len(_E1_VARS), dtype=complex)
    y0[_I["r11"]] = 1.0
    return y0


def e1_trace_defect(params: ModelParams, grid, keep_typo: bool,
                    tol: float = DEFAULT_TOL) -> np.ndarray:
    """``|sum of populations - 1|`` along the ``|e,1>`` trajectory, with ``r00`` integrated."""
    t = as_times(grid)
    y = integrate_ode(e1_rhs(params, keep_typo=keep_typo), _e1_initial(), t, tol=tol)
    total = sum(y[:, _I[name]] for name in ("r00", "r11", "r22", "r33", "r44"))
    return np.abs(total - 1.0)


def excited_population_product(prod: ProductInit, params: ModelParams, t, tol: float = DEFAULT_TOL):
    """Excited-state population of the atom for the product initial state.

    ``t`` may be a scalar or a strictly increasing array of times.
    """
    params.require_resonance()
    scalar = np.ndim(t) == 0
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    p = propagator(params, t_arr)
    m1, m2 = prod.mode_amplitudes
    b1, b2 = abs(prod.b1), abs(prod.b2)
    out = (b1 * m1) ** 2 * np.abs(p.mu) ** 2 + (b2 * m2) ** 2 * np.abs(p.nu) ** 2
    weight = (b1 * m2) ** 2
    if weight > 0:
        if t_arr[0] == 0:
            exc = evolve_e1(params, t_arr, tol=tol).excited
        else:
            exc = evolve_e1(params, np.concatenate([[0.0], t_arr]), tol=tol).excited[1:]
        out = out + weight * exc
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# Lindblad oracle

class LindbladOracle:
    """Master-equation generator on ``atoms (x) Fock(0..n_max)``.

    Atom basis ordering is ``(e, g)`` for each atom; the mode index runs last.
    ``rhs(t, vec)`` acts on the row-major flattened density matrix.
    """

    def __init__(self, params: ModelParams, n_atoms: int = 1, n_max: int = 2):
        if n_atoms not in (1, 2):
            raise ValueError(f"n_atoms must be 1 or 2, got {n_atoms}")
        if n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {n_max}")
        self.params = params
        self.n_atoms = n_atoms
        self.n_max = n_max
        nf = n_max + 1

        sm = np.array([[0, 0], [1, 0]], dtype=complex)  # |g><e|
        i2 = np.eye(2, dtype=complex)
        b_mode = np.diag(np.sqrt(np.arange(1, nf)), k=1).astype(complex)
        i_f = np.eye(nf, dtype=complex)

        if n_atoms == 1:
            lowering = [np.kron(sm, i_f)]
            self.b = np.kron(i2, b_mode)
        else:
            lowering = [np.kron(np.kron(sm, i2), i_f), np.kron(np.kron(i2, sm), i_f)]
            self.b = np.kron(np.kron(i2, i2), b_mode)
        self.sigma_minus = lowering
        self.dim = self.b.shape[0]

        bd = self.b.conj().T
        n_op = bd @ self.b
        h = params.omega_c * n_op
        for s in lowering:
            sp = s.conj().T
            h = h + params.omega0 * sp @ s + params.Omega * (s @ bd + sp @ self.b)
        if n_atoms == 2:
            sa, sb = lowering
            h = h + params.D * (sa.conj().T @ sb + sa @ sb.conj().T)
        self.H = h

        exc = np.real(np.diag(n_op)).copy()
        for s in lowering:
            exc += np.real(np.diag(s.conj().T @ s))
        self.excitations = np.rint(exc).astype(int)

        eye = np.eye(self.dim, dtype=complex)
        gam = params.Gamma
        self.liouvillian = (-1j * (np.kron(h, eye) - np.kron(eye, h.T))
                            - 0.5 * gam * (np.kron(n_op, eye) + np.kron(eye, n_op.T))
                            + gam * np.kron(self.b, self.b.conj()))

    def index(self, *labels) -> int:
        """Basis index of e.g. ``("e", 1)`` or ``("e", "g", 0)``."""
        *atoms, n = labels
        if len(atoms) != self.n_atoms or not 0 <= n <= self.n_max:
            raise ValueError(f"bad basis label {labels}")
        idx = 0
        for a in atoms:
            idx = idx * 2 + {"e": 0, "g": 1}[a]
        return idx * (self.n_max + 1) + n

    def ket(self, amplitudes: dict) -> np.ndarray:
        psi = np.zeros(self.dim, dtype=complex)
        for labels, amp in amplitudes.items():
            psi[self.index(*labels)] += amp
        return psi

    def rhs(self, t, y):
        return self.liouvillian @ y

    def leakage(self, rho) -> float:
        """Weight on states whose excitation number exceeds the photon cutoff."""
        d = np.real(np.diag(np.asarray(rho).reshape(self.dim, self.dim)))
        return float(np.sum(np.abs(d[self.excitations > self.n_max])))

    def evolve(self, rho0, grid, tol: float = DEFAULT_TOL) -> np.ndarray:
        """Density matrices at every grid time, shape ``(n_times, dim, dim)``."""
        rho0 = np.asarray(rho0, dtype=complex)
        if rho0.shape != (self.dim, self.dim):
            raise ValueError(f"expected a {self.dim}x{self.dim} density matrix")
        if self.leakage(rho0) > LEAKAGE_TOL:
            raise ValueError(
                f"photon cutoff n_max={self.n_max} too small for this initial state "
                f"(weight {self.leakage(rho0):.3g} above cutoff)")
        y = integrate_ode(self.rhs, rho0.ravel(), grid, tol=tol)
        return y.reshape(-1, self.dim, self.dim)

    def trace_out_mode(self, rho) -> np.ndarray:
        """Reduced state of the atom(s)."""
        na = 2 ** self.n_atoms
        r = np.asarray(rho).reshape(na, self.n_max + 1, na, self.n_max + 1)
        return np.einsum("injn->ij", r)


def build_lindblad_oracle(params: ModelParams, n_atoms: int = 1, n_max: int | None = None) -> LindbladOracle:
    if n_max is None:
        n_max = 2 if n_atoms == 1 else 1
    return LindbladOracle(params, n_atoms, n_max)


def e1_elements_from_oracle(oracle: LindbladOracle, rho) -> TwoExcDensity:
    """Pick the six sector elements out of a one-atom oracle density matrix."""
    if oracle.n_atoms != 1:
        raise ValueError("single-atom oracle required")
    i1, i2 = oracle.index("e", 1), oracle.index("g", 2)
    i3, i4 = oracle.index("e", 0), oracle.index("g", 1)
    return TwoExcDensity(rho[i1, i1].real, rho[i2, i2].real, rho[i3, i3].real,
                         rho[i4, i4].real, rho[i1, i2], rho[i3, i4])
