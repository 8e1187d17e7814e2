"""Numerical substrate: complex ODE integration, Hermitian eigenvalues, trace distance.

Everything here works on plain numpy arrays. States are ``complex128`` vectors
and density matrices are square ``complex128`` arrays.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

DEFAULT_TOL = 1e-10
MIN_TOL = 1e-15  # finer tolerances sit below double-precision rounding
HERMITIAN_TOL = 1e-10
JACOBI_THRESHOLD = 1e-12
MAX_EIG_DIM = 16

RHS = Callable[[float, np.ndarray], np.ndarray]


class IntegrationError(RuntimeError):
    """Raised when the integrator cannot advance (step-size underflow, blow-up)."""

    def __init__(self, message: str, t: float):
        super().__init__(f"{message} (integration reached t={t:.10g})")
        self.t = t


class NotHermitianError(ValueError):
    pass


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid ``t_start, ..., t_end`` with ``n_points`` samples."""

    t_start: float
    t_end: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 1:
            raise ValueError(f"n_points must be positive, got {self.n_points}")
        if self.t_start < 0:
            raise ValueError(f"t_start must be >= 0, got {self.t_start}")
        if self.n_points > 1 and not self.t_end > self.t_start:
            raise ValueError("t_end must exceed t_start")

    def times(self) -> np.ndarray:
        if self.n_points == 1:
            return np.array([float(self.t_start)])
        return np.linspace(self.t_start, self.t_end, self.n_points)


def as_times(grid) -> np.ndarray:
    """Accept a TimeGrid or any 1-D increasing sequence of times."""
    if isinstance(grid, TimeGrid):
        return grid.times()
    t = np.atleast_1d(np.asarray(grid, dtype=float))
    if t.ndim != 1 or t.size == 0:
        raise ValueError("time grid must be a nonempty 1-D sequence")
    if t.size > 1 and np.any(np.diff(t) <= 0):
        raise ValueError("time grid must be strictly increasing")
    if t[0] < 0:
        raise ValueError("time grid must start at t >= 0")
    return t


# ---------------------------------------------------------------------------
# Dormand-Prince 5(4) with Hairer's continuous extension

_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = np.zeros((7, 7))
_A[1, :1] = [1 / 5]
_A[2, :2] = [3 / 40, 9 / 40]
_A[3, :3] = [44 / 45, -56 / 15, 32 / 9]
_A[4, :4] = [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]
_A[5, :5] = [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]
_A[6, :6] = [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]
# fifth-order solution minus embedded fourth-order solution
_E = np.array([
    71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40,
])
_D = np.array([
    -12715105075 / 11282082432, 0.0, 87487479700 / 32700410799,
    -10690763975 / 1880347072, 701980252875 / 199316789632,
    -1453857185 / 822651844, 69997945 / 29380423,
])


_EPS16 = 16 * np.finfo(float).eps


def _error_norm(err, y, y_new, atol, rtol):
    q = err / (atol + rtol * np.maximum(np.abs(y), np.abs(y_new)))
    return float(np.sqrt(np.vdot(q, q).real / q.size))


def _initial_step(rhs, t0, y0, f0, atol, rtol, t_span):
    scale = atol + rtol * np.abs(y0)
    d0 = np.sqrt(np.mean(np.abs(y0 / scale) ** 2))
    d1 = np.sqrt(np.mean(np.abs(f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, t_span)
    f1 = rhs(t0 + h0, y0 + h0 * f0)
    d2 = np.sqrt(np.mean(np.abs((f1 - f0) / scale) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1, t_span)


def _dopri5(rhs, y0, t_out, atol, rtol, max_steps):
    out = np.empty((t_out.size, y0.size), dtype=complex)
    out[0] = y0
    if t_out.size == 1:
        return out

    t = float(t_out[0])
    t_final = float(t_out[-1])
    y = y0.copy()
    k = np.empty((7, y0.size), dtype=complex)
    k[0] = rhs(t, y)
    h = _initial_step(rhs, t, y, k[0], atol, rtol, t_final - t)
    next_out = 1
    steps = 0
    rejected_last = False

    while next_out < t_out.size:
        if steps >= max_steps:
            raise IntegrationError(f"exceeded {max_steps} steps", t)
        if h < _EPS16 * max(abs(t), 1.0):
            raise IntegrationError("step size underflow", t)
        last = t + h >= t_final - 1e-12 * max(1.0, abs(t_final))
        if last:
            h = t_final - t

        for s in range(1, 6):
            k[s] = rhs(t + _C[s] * h, y + h * (_A[s, :s] @ k[:s]))
        # stage 7 is evaluated at the fifth-order solution (FSAL)
        y_new = y + h * (_A[6, :6] @ k[:6])
        k[6] = rhs(t + h, y_new)
        err = h * (_E @ k)
        err_norm = _error_norm(err, y, y_new, atol, rtol)
        steps += 1

        if not np.isfinite(err_norm):
            raise IntegrationError("non-finite state", t)

        if err_norm <= 1.0:
            t_new = t_final if last else t + h
            if t_out[next_out] <= t_new:
                r2 = y_new - y
                r3 = h * k[0] - r2
                r4 = r2 - h * k[6] - r3
                r5 = h * (_D @ k)
                stop = int(np.searchsorted(t_out, t_new, side="right"))
                theta = np.minimum((t_out[next_out:stop] - t) / h, 1.0)[:, None]
                th1 = 1.0 - theta
                out[next_out:stop] = y + theta * (r2 + th1 * (r3 + theta * (r4 + th1 * r5)))
                next_out = stop
            t, y = t_new, y_new
            k[0] = k[6]
            fac = 10.0 if err_norm == 0 else min(10.0, max(0.2, 0.9 * err_norm ** -0.2))
            if rejected_last:
                fac = min(fac, 1.0)
            h *= fac
            rejected_last = False
        else:
            h *= max(0.2, 0.9 * err_norm ** -0.2)
            rejected_last = True
    return out


def _rk4(rhs, y0, t_out, step):
    out = np.empty((t_out.size, y0.size), dtype=complex)
    out[0] = y0
    y = y0.copy()
    for i in range(1, t_out.size):
        t0, t1 = t_out[i - 1], t_out[i]
        n_sub = max(1, int(np.ceil((t1 - t0) / step - 1e-9)))
        h = (t1 - t0) / n_sub
        t = t0
        for j in range(n_sub):
            k1 = rhs(t, y)
            k2 = rhs(t + h / 2, y + h / 2 * k1)
            k3 = rhs(t + h / 2, y + h / 2 * k2)
            k4 = rhs(t + h, y + h * k3)
            y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            t = t0 + (j + 1) * h
        if not np.all(np.isfinite(y)):
            raise IntegrationError("non-finite state", t1)
        out[i] = y
    return out


def integrate_ode(rhs: RHS, y0, grid, tol: float = DEFAULT_TOL, method: str = "dopri5",
                  step: float = 1e-3, max_steps: int = 10_000_000) -> np.ndarray:
    """Integrate ``dy/dt = rhs(t, y)`` for a complex vector ``y``.

    Parameters
    ----------
    rhs : callable
        ``rhs(t, y) -> dy/dt`` with ``y`` a complex 1-D array.
    y0 : array_like
        State at the first grid time.
    grid : TimeGrid or sequence of float
        Output times, strictly increasing.
    tol : float
        Absolute and relative tolerance of the adaptive scheme.
    method : {"dopri5", "rk4"}
        ``"rk4"`` is the fixed-step classical scheme with step at most ``step``,
        kept as a cross-check.

    Returns
    -------
    numpy.ndarray
        Shape ``(n_times, len(y0))``, the solution at every grid time.
    """
    if not MIN_TOL <= tol < 1:
        raise ValueError(f"tol must lie in [{MIN_TOL:g}, 1), got {tol}")
    t_out = as_times(grid)
    y0 = np.asarray(y0, dtype=complex).ravel()
    if not np.all(np.isfinite(y0)):
        raise ValueError("initial state contains non-finite entries")
    if method == "dopri5":
        # overflow shows up as a non-finite error norm and is reported as IntegrationError
        with np.errstate(over="ignore", invalid="ignore"):
            return _dopri5(rhs, y0, t_out, tol, tol, max_steps)
    if method == "rk4":
        return _rk4(rhs, y0, t_out, step)
    raise ValueError(f"unknown integration method {method!r}")


# ---------------------------------------------------------------------------
# Hermitian eigenproblem

def _check_hermitian(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] > MAX_EIG_DIM:
        raise ValueError(f"dimension {m.shape[0]} exceeds {MAX_EIG_DIM}")
    dev = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if dev > HERMITIAN_TOL:
        raise NotHermitianError(f"matrix is not Hermitian (max deviation {dev:.3g})")
    return 0.5 * (m + m.conj().T)


def _jacobi(a: np.ndarray, vectors: bool):
    """Cyclic Jacobi sweeps on a complex Hermitian matrix (modified copy)."""
    n = a.shape[0]
    v = np.eye(n, dtype=complex) if vectors else None
    scale = max(np.max(np.abs(a)), 1.0)
    for _ in range(100):
        off = np.max(np.abs(a - np.diag(np.diag(a))))
        if off <= JACOBI_THRESHOLD * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= JACOBI_THRESHOLD * scale * 1e-3:
                    continue
                phase = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1 + tau * tau))
                c = 1 / np.sqrt(1 + t * t)
                s = t * c
                # unitary rotation acting on columns p, q
                g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                cols = a[:, [p, q]] @ g
                a[:, p], a[:, q] = cols[:, 0], cols[:, 1]
                rows = g.conj().T @ a[[p, q], :]
                a[p, :], a[q, :] = rows[0], rows[1]
                a[q, p] = 0.0
                a[p, q] = 0.0
                if vectors:
                    vc = v[:, [p, q]] @ g
                    v[:, p], v[:, q] = vc[:, 0], vc[:, 1]
    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], (v[:, order] if vectors else None)


def hermitian_eigenvalues(m) -> np.ndarray:
    """Ascending eigenvalues of a small Hermitian matrix.

    2x2 matrices use the closed form; larger ones go through cyclic Jacobi.
    """
    m = _check_hermitian(m)
    n = m.shape[0]
    if n == 1:
        return np.array([m[0, 0].real])
    if n == 2:
        a, d = m[0, 0].real, m[1, 1].real
        r = np.hypot(0.5 * (a - d), abs(m[0, 1]))
        mid = 0.5 * (a + d)
        return np.array([mid - r, mid + r])
    return _jacobi(m.copy(), vectors=False)[0]


def hermitian_eigh(m):
    """Eigenvalues (ascending) and unitary eigenvector matrix via cyclic Jacobi."""
    m = _check_hermitian(m)
    return _jacobi(m.copy(), vectors=True)


def psd_sqrt(m) -> np.ndarray:
    """Square root of a positive semidefinite Hermitian matrix.

    Eigenvalues below the rounding floor ``16 n eps max|w|`` are treated as
    exact zeros. Without this, a numerically zero eigenvalue of size ~1e-17
    would contribute ~3e-9 to the root.
    """
    w, v = hermitian_eigh(m)
    floor = w.size * _EPS16 * max(float(np.max(np.abs(w))), 1e-300)
    w = np.where(w > floor, w, 0.0)
    return (v * np.sqrt(w)) @ v.conj().T


def singular_values(a) -> np.ndarray:
    """Descending singular values of a small square matrix.

    Taken from the Hermitian dilation ``[[0, a], [a^H, 0]]`` whose spectrum
    is ``+-s``. This keeps the absolute accuracy at ``eps * |a|`` even for
    tiny singular values, which squaring followed by a root would lose.
    """
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    dil = np.zeros((2 * n, 2 * n), dtype=complex)
    dil[:n, n:] = a
    dil[n:, :n] = a.conj().T
    return np.clip(hermitian_eigenvalues(dil)[::-1][:n], 0.0, None)


# ---------------------------------------------------------------------------
# Density matrices

def as_density_matrix(rho, trace_tol: float = 1e-9) -> np.ndarray:
    """Validate Hermiticity and unit trace; return a complex array."""
    rho = _check_hermitian(rho)
    tr = np.trace(rho).real
    if abs(tr - 1) > trace_tol:
        raise ValueError(f"density matrix trace is {tr:.12g}, expected 1")
    return rho


def trace_distance(rho1, rho2) -> float:
    """Half the trace norm of ``rho1 - rho2``."""
    rho1 = np.asarray(rho1, dtype=complex)
    rho2 = np.asarray(rho2, dtype=complex)
    if rho1.shape != rho2.shape:
        raise ValueError(f"dimension mismatch: {rho1.shape} vs {rho2.shape}")
    rho1 = as_density_matrix(rho1)
    rho2 = as_density_matrix(rho2)
    return 0.5 * float(np.sum(np.abs(hermitian_eigenvalues(rho1 - rho2))))


def pure_state(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())
