"""One-excitation sector of the damped Jaynes-Cummings model.

The atom-mode state is ``|psi~><psi~| + lam |g,0><g,0|`` with the unnormalized
branch ``psi~ = ct1 |e,0> + ct2 |g,1>``. The amplitudes obey a linear,
non-Hermitian 2x2 system and ``lam`` collects the probability lost through the
mode damping.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import CorrelatedInit, ModelParams
from .numerics import DEFAULT_TOL, as_times, integrate_ode

SERIES_CUTOFF = 1e-4


@dataclass(frozen=True)
class SingleExcState:
    ct1: complex
    ct2: complex
    lam: float

    @property
    def norm_defect(self) -> float:
        return abs(self.ct1) ** 2 + abs(self.ct2) ** 2 + self.lam - 1.0


@dataclass(frozen=True)
class Propagator:
    """Propagator entries at one or many times.

    ``mu`` and ``nu`` fix the excited amplitude, ``ct1 = mu C1 - i nu C2``;
    ``mu_bar`` is the companion entry that propagates ``C2`` into ``ct2``,
    ``ct2 = -i nu C1 + mu_bar C2``.
    """

    mu: np.ndarray | complex
    nu: np.ndarray | complex
    mu_bar: np.ndarray | complex
    a_param: complex


def discriminant(params: ModelParams) -> complex:
    """``a = sqrt((Gamma/2)^2 - 4 Omega^2)`` on the principal complex branch."""
    return complex(np.sqrt(complex((params.Gamma / 2) ** 2 - 4 * params.Omega ** 2)))


def _damped_cosh_sinh(a: complex, gamma: float, t: np.ndarray):
    """Return ``exp(-gamma t/4) cosh(a t/2)`` and ``exp(-gamma t/4) sinh(a t/2)/a``.

    Written with the two exponentials folded together so large ``gamma t``
    cannot overflow; small ``|a t|`` uses a series for ``sinh(x)/a``.
    """
    t = np.asarray(t, dtype=float)
    x = 0.5 * a * t
    small = np.abs(x) < 0.5 * SERIES_CUTOFF
    c = np.empty(t.shape, dtype=complex)
    s = np.empty(t.shape, dtype=complex)

    damp = np.exp(-0.25 * gamma * t[small])
    xs = x[small]
    x2 = xs * xs
    c[small] = damp * (1 + x2 / 2 + x2 * x2 / 24)
    s[small] = damp * 0.5 * t[small] * (1 + x2 / 6 + x2 * x2 / 120)

    big = ~small
    tb = t[big]
    ep = np.exp((0.5 * a - 0.25 * gamma) * tb)
    em = np.exp((-0.5 * a - 0.25 * gamma) * tb)
    c[big] = 0.5 * (ep + em)
    if np.any(big):
        s[big] = (ep - em) / (2 * a)
    return c, s


def propagator(params: ModelParams, t) -> Propagator:
    """Closed-form propagator of the resonant one-excitation amplitudes.

    ``t`` may be a scalar or an array; the returned entries have the same shape.
    """
    omega = params.omega
    scalar = np.ndim(t) == 0
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t_arr < 0):
        raise ValueError("propagator requires t >= 0")
    a = discriminant(params)
    c, s = _damped_cosh_sinh(a, params.Gamma, t_arr)
    rot = np.exp(-1j * omega * t_arr)
    half_gamma = 0.5 * params.Gamma
    mu = rot * (c + half_gamma * s)
    nu = rot * (2 * params.Omega * s)
    mu_bar = rot * (c - half_gamma * s)
    if scalar:
        return Propagator(complex(mu[0]), complex(nu[0]), complex(mu_bar[0]), a)
    return Propagator(mu, nu, mu_bar, a)


def amplitude_rhs(params: ModelParams):
    """Right-hand side for ``(ct1, ct2, lam)``; ``lam`` is carried as a complex entry."""
    w0, wc, om, gam = params.omega0, params.omega_c, params.Omega, params.Gamma

    def rhs(t, y):
        c1, c2 = y[0], y[1]
        return np.array([
            -1j * (w0 * c1 + om * c2),
            -1j * ((wc - 0.5j * gam) * c2 + om * c1),
            gam * (c2.real ** 2 + c2.imag ** 2),
        ])

    return rhs


@dataclass(frozen=True)
class SingleExcTrajectory:
    """Array-backed sequence of :class:`SingleExcState`."""

    times: np.ndarray
    ct1: np.ndarray
    ct2: np.ndarray
    lam: np.ndarray

    def __len__(self):
        return self.times.size

    def __getitem__(self, i) -> SingleExcState:
        return SingleExcState(complex(self.ct1[i]), complex(self.ct2[i]), float(self.lam[i]))

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    @property
    def excited_population(self) -> np.ndarray:
        return np.abs(self.ct1) ** 2

    def norm_defect(self) -> np.ndarray:
        return np.abs(self.ct1) ** 2 + np.abs(self.ct2) ** 2 + self.lam - 1.0


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)


def _cumulative_quadrature(f, t: np.ndarray, rate: float) -> np.ndarray:
    """Cumulative integral of ``f`` from ``t[0]`` to each ``t[i]``.

    Composite 12-point Gauss-Legendre; panels are at most ``0.25 / rate`` long.
    """
    edges = [t[:1]]
    owner = []
    for i in range(1, t.size):
        n = max(1, int(np.ceil((t[i] - t[i - 1]) * rate / 0.25)))
        edges.append(np.linspace(t[i - 1], t[i], n + 1)[1:])
        owner.extend([i] * n)
    edges = np.concatenate(edges)
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    nodes = (0.5 * (hi + lo))[:, None] + half[:, None] * _GL_NODES[None, :]
    panels = half * (f(nodes.ravel()).reshape(nodes.shape) @ _GL_WEIGHTS)
    per_interval = np.bincount(np.asarray(owner, dtype=int), weights=panels, minlength=t.size)
    return np.cumsum(per_interval)


def evolve(init: CorrelatedInit, params: ModelParams, grid, method: str = "analytic",
           tol: float = DEFAULT_TOL) -> SingleExcTrajectory:
    """Evolve the correlated initial state on ``grid`` (which must start at t = 0).

    ``method="analytic"`` uses the closed-form propagator for the amplitudes
    and obtains ``lam`` as the quadrature of ``Gamma |ct2|^2``;
    ``method="ode"`` integrates amplitudes and ``lam`` together.
    """
    t = as_times(grid)
    if t[0] != 0:
        raise ValueError("evolution grid must start at t = 0")
    C1, C2 = init.amplitudes

    if method == "ode":
        y = integrate_ode(amplitude_rhs(params), [C1, C2, 0.0], t, tol=tol)
        return SingleExcTrajectory(t, y[:, 0], y[:, 1], y[:, 2].real)
    if method != "analytic":
        raise ValueError(f"unknown method {method!r}")

    params.require_resonance()

    def amps(tt):
        p = propagator(params, tt)
        return p.mu * C1 - 1j * p.nu * C2, -1j * p.nu * C1 + p.mu_bar * C2

    ct1, ct2 = amps(t)
    if params.Gamma == 0:
        lam = np.zeros_like(t)
    else:
        lam = params.Gamma * _cumulative_quadrature(lambda tt: np.abs(amps(tt)[1]) ** 2, t,
                                                    rate=max(params.Gamma, params.Omega))
    return SingleExcTrajectory(t, ct1, ct2, lam)


@dataclass(frozen=True)
class PopulationTerms:
    """The excited-state population split into its three addends."""

    from_atom: np.ndarray | float
    from_mode: np.ndarray | float
    interference: np.ndarray | float

    @property
    def total(self):
        return self.from_atom + self.from_mode + self.interference


def population_terms(init: CorrelatedInit, params: ModelParams, t) -> PopulationTerms:
    """Transfer-from-atom, transfer-from-mode and interference addends at time(s) ``t``."""
    p = propagator(params, t)
    c1, c2 = init.c1, init.c2
    from_atom = np.abs(p.mu) ** 2 * c1 ** 2
    from_mode = np.abs(p.nu) ** 2 * c2 ** 2
    # mu nu* is real on resonance
    cross = (p.mu * np.conj(p.nu)).real
    interference = 2 * cross * c1 * c2 * np.sin(init.theta)
    if np.ndim(t) == 0:
        return PopulationTerms(float(from_atom), float(from_mode), float(interference))
    return PopulationTerms(from_atom, from_mode, interference)


def excited_population(init: CorrelatedInit, params: ModelParams, t):
    """Excited-state population of the atom for the correlated initial state."""
    return population_terms(init, params, t).total


def reduced_atom_state(state: SingleExcState) -> np.ndarray:
    """Atom density matrix in the basis (e, g)."""
    pe = abs(state.ct1) ** 2
    return np.diag([pe, 1.0 - pe]).astype(complex)


def atom_mode_matrix(state: SingleExcState) -> np.ndarray:
    """Full atom-mode density matrix on the basis (|e,0>, |g,0>, |g,1>)."""
    psi = np.array([state.ct1, 0.0, state.ct2])
    rho = np.outer(psi, psi.conj())
    rho[1, 1] += state.lam
    return rho
