"""Parameter records, initial states and regime labels."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-9


@dataclass(frozen=True)
class ModelParams:
    """Physical constants in units of a reference frequency.

    ``omega0`` is the atomic transition frequency, ``omega_c`` the mode
    frequency, ``Omega`` the atom-mode coupling, ``Gamma`` the mode damping
    rate and ``D`` the dipole-dipole coupling (two-atom model only).
    """

    omega0: float = 0.0
    omega_c: float = 0.0
    Omega: float = 1.0
    Gamma: float = 0.0
    D: float = 0.0

    def __post_init__(self):
        for name in ("omega0", "omega_c", "Omega", "Gamma", "D"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.omega0 < 0:
            raise ValueError("omega0 must be >= 0")
        if self.omega_c < 0:
            raise ValueError("omega_c must be >= 0")
        if not self.Omega > 0:
            raise ValueError("Omega must be > 0")
        if self.Gamma < 0:
            raise ValueError("Gamma must be >= 0")

    @classmethod
    def resonant(cls, omega: float = 0.0, Omega: float = 1.0, Gamma: float = 0.0,
                 D: float = 0.0) -> "ModelParams":
        return cls(omega0=omega, omega_c=omega, Omega=Omega, Gamma=Gamma, D=D)

    @property
    def is_resonant(self) -> bool:
        return self.omega0 == self.omega_c

    @property
    def omega(self) -> float:
        """Common frequency; only defined on resonance."""
        self.require_resonance()
        return self.omega0

    def require_resonance(self):
        if not self.is_resonant:
            raise ValueError(
                f"resonance required (omega0={self.omega0} != omega_c={self.omega_c})")


def _check_unit(total: float, what: str):
    if abs(total - 1.0) > NORM_TOL:
        raise ValueError(f"{what} not normalized: sum of squares is {total:.12g}")


def _check_amplitude(x: float, name: str):
    if not (math.isfinite(x) and x >= 0):
        raise ValueError(f"{name} must be a nonnegative real, got {x}")


@dataclass(frozen=True)
class CorrelatedInit:
    """``c1 |e,0> + c2 exp(i theta) |g,1>`` with ``c1, c2 >= 0``."""

    c1: float
    c2: float
    theta: float = 0.0

    def __post_init__(self):
        _check_amplitude(self.c1, "c1")
        _check_amplitude(self.c2, "c2")
        if not math.isfinite(self.theta):
            raise ValueError("theta must be finite")
        _check_unit(self.c1 ** 2 + self.c2 ** 2, "correlated state")

    @classmethod
    def from_complex(cls, C1: complex, C2: complex) -> "CorrelatedInit":
        """Build from complex amplitudes; a global phase is removed so that C1 >= 0."""
        C1, C2 = complex(C1), complex(C2)
        if abs(C1) > 0:
            C2 = C2 * abs(C1) / C1
        theta = cmath.phase(C2) % (2 * math.pi) if abs(C2) > 0 else 0.0
        return cls(abs(C1), abs(C2), theta)

    @property
    def amplitudes(self) -> tuple[complex, complex]:
        """Complex amplitudes ``(C1(0), C2(0))``."""
        return complex(self.c1), self.c2 * cmath.exp(1j * self.theta)

    def state_vector(self) -> np.ndarray:
        """Amplitudes on ``(|e,0>, |g,1>)``."""
        return np.array(self.amplitudes)


@dataclass(frozen=True)
class ProductInit:
    """Atom amplitudes ``b1`` (excited), ``b2`` (ground) times a diagonal mode state."""

    b1: complex
    b2: complex
    mode_p0: float
    mode_p1: float

    def __post_init__(self):
        object.__setattr__(self, "b1", complex(self.b1))
        object.__setattr__(self, "b2", complex(self.b2))
        _check_unit(abs(self.b1) ** 2 + abs(self.b2) ** 2, "product atom state")
        if self.mode_p0 < 0 or self.mode_p1 < 0:
            raise ValueError("mode weights must be nonnegative")
        _check_unit(self.mode_p0 + self.mode_p1, "product mode state")

    @property
    def mode_amplitudes(self) -> tuple[float, float]:
        return math.sqrt(self.mode_p0), math.sqrt(self.mode_p1)

    def atom_matrix(self) -> np.ndarray:
        return np.diag([abs(self.b1) ** 2, abs(self.b2) ** 2]).astype(complex)


@dataclass(frozen=True)
class TwoAtomInit:
    """``c1 |e,g,0> + c2 e^{i theta1} |g,e,0> + c3 e^{i theta2} |g,g,1>``."""

    c1: float
    c2: float
    c3: float
    theta1: float = 0.0
    theta2: float = 0.0

    def __post_init__(self):
        for name in ("c1", "c2", "c3"):
            _check_amplitude(getattr(self, name), name)
        if not (math.isfinite(self.theta1) and math.isfinite(self.theta2)):
            raise ValueError("phases must be finite")
        _check_unit(self.c1 ** 2 + self.c2 ** 2 + self.c3 ** 2, "two-atom state")

    @property
    def amplitudes(self) -> tuple[complex, complex, complex]:
        return (complex(self.c1), self.c2 * cmath.exp(1j * self.theta1),
                self.c3 * cmath.exp(1j * self.theta2))


def marginals(init: CorrelatedInit) -> tuple[np.ndarray, np.ndarray]:
    """Reduced atom state (basis e, g) and mode state (basis 0, 1) of the correlated state."""
    w = np.array([init.c1 ** 2, init.c2 ** 2])
    w = w / w.sum()
    atom = np.diag(w).astype(complex)
    return atom, atom.copy()


def product_from_marginals(init: CorrelatedInit) -> ProductInit:
    """Uncorrelated partner built from the marginals of ``init``."""
    return ProductInit(b1=init.c1, b2=init.c2, mode_p0=init.c1 ** 2, mode_p1=init.c2 ** 2)


def product_partner(init: CorrelatedInit, b1: complex, b2: complex) -> ProductInit:
    """Product state with atom amplitudes ``(b1, b2)`` sharing the mode marginal of ``init``."""
    return ProductInit(b1=b1, b2=b2, mode_p0=init.c1 ** 2, mode_p1=init.c2 ** 2)


def classify_regime(params: ModelParams) -> str:
    """``"weak"`` if Gamma > 2 Omega, ``"strong"`` if Gamma < 2 Omega, else ``"boundary"``."""
    if params.Gamma > 2 * params.Omega:
        return "weak"
    if params.Gamma < 2 * params.Omega:
        return "strong"
    return "boundary"
