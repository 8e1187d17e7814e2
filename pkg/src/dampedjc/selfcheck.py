"""Invariant suite behind ``dampedjc selfcheck``.

Each check returns a :class:`CheckResult`; a check passes when the measured
quantity stays inside its stated tolerance.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .information import initial_info_bound
from .model import CorrelatedInit, ModelParams, TwoAtomInit, product_partner
from .numerics import DEFAULT_TOL, TimeGrid, integrate_ode, pure_state, trace_distance
from .scenarios import FIG1_COMBOS, FIG1_THETAS, FIG3_AMPLITUDES, catalog, get_scenario, run_scenario
from .single_excitation import amplitude_rhs, evolve, excited_population
from .two_atoms import evolve_two_atoms, reduced_two_atom_state, steady_concurrence, wootters_concurrence
from .two_excitation import build_lindblad_oracle, e1_elements_from_oracle, e1_trace_defect, evolve_e1
from .two_excitation import excited_population_product

GAMMAS = (0.0, 1.0, 2.0, 4.0, 6.0, 10.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def catalog_initial_states():
    """Distinct correlated and two-atom initial states used across the catalog."""
    one, two = [], []
    for sc in catalog():
        for s in sc.series:
            bucket = one if isinstance(s.initial, CorrelatedInit) else two
            if s.initial not in bucket:
                bucket.append(s.initial)
    return one, two


def check_norm(tol: float = DEFAULT_TOL) -> CheckResult:
    t = TimeGrid(0.0, 50.0, 501).times()
    one, two = catalog_initial_states()
    worst = 0.0
    for g in GAMMAS:
        params = ModelParams.resonant(Gamma=g)
        for init in one:
            for method in ("analytic", "ode"):
                worst = max(worst, np.max(np.abs(evolve(init, params, t, method, tol).norm_defect())))
        for init in two:
            worst = max(worst, np.max(np.abs(evolve_two_atoms(init, params, t, tol).norm_defect())))
    return CheckResult("norm conservation", worst <= 1e-8,
                       f"max |norm - 1| = {worst:.2e} over {len(one) + len(two)} states, Omega t in [0,50]")


def check_propagator(tol: float = DEFAULT_TOL) -> CheckResult:
    t = TimeGrid(0.0, 20.0, 401).times()
    worst = 0.0
    for g in GAMMAS:
        for omega in (0.0, 1.0):
            params = ModelParams.resonant(omega=omega, Gamma=g)
            for init in (CorrelatedInit(math.sqrt(0.3), math.sqrt(0.7), 0.5 * math.pi),
                         CorrelatedInit(1.0, 0.0, 0.0)):
                a = evolve(init, params, t, "analytic")
                y = integrate_ode(amplitude_rhs(params), [*init.amplitudes, 0.0], t, tol=tol)
                worst = max(worst, np.max(np.abs(a.ct1 - y[:, 0])), np.max(np.abs(a.ct2 - y[:, 1])))
    return CheckResult("closed-form propagator vs integrator", worst <= 1e-8,
                       f"max deviation {worst:.2e} (Gamma/Omega = 4 included)")


def check_typo(tol: float = DEFAULT_TOL) -> CheckResult:
    grid = TimeGrid(0.0, 20.0, 201)
    worst = 0.0
    for g in (0.0, 1.0, 6.0):
        params = ModelParams.resonant(Gamma=g)
        traj = evolve_e1(params, grid, tol)
        oracle = build_lindblad_oracle(params)
        rho0 = pure_state(oracle.ket({("e", 1): 1.0}))
        rhos = oracle.evolve(rho0, grid, tol)
        for k, rho in enumerate(rhos):
            ref = e1_elements_from_oracle(oracle, rho)
            got = traj[k]
            for f in ("r11", "r22", "r33", "r44", "r12", "r34"):
                worst = max(worst, abs(getattr(got, f) - getattr(ref, f)))
    detuned = ModelParams(omega0=1.0, omega_c=1.0, Gamma=1.0)
    fixed = float(np.max(e1_trace_defect(detuned, TimeGrid(0.0, 5.0, 51), keep_typo=False, tol=tol)))
    broken = float(e1_trace_defect(detuned, TimeGrid(0.0, 5.0, 51), keep_typo=True, tol=tol)[-1])
    ok = worst <= 1e-8 and fixed <= 1e-8 and broken > 1e-3
    return CheckResult("two-excitation equations (typo dropped) vs master equation", ok,
                       f"max element deviation {worst:.2e}; trace defect {fixed:.1e} without the "
                       f"-i omega r44 term, {broken:.3f} with it at Omega t = 5")


def check_interference(tol: float = DEFAULT_TOL) -> CheckResult:
    t = TimeGrid(0.0, 15.0, 1501).times()
    ok = True
    notes = []
    for g in (6.0, 1.0):
        params = ModelParams.resonant(Gamma=g)
        for p1, p2 in FIG1_COMBOS:
            c1, c2 = math.sqrt(p1), math.sqrt(p2)
            for theta in FIG1_THETAS:
                corr = CorrelatedInit(c1, c2, theta)
                rc = excited_population(corr, params, t) / p1
                peak = float(np.max(rc))
                if theta == 0.0 and p2 > p1:
                    prod = product_partner(corr, c1, c2)
                    rp = excited_population_product(prod, params, t, tol) / p1
                    good = peak > 1 and peak > float(np.max(rp))
                elif theta == 0.5 * math.pi:
                    good = peak > 1
                elif g == 6.0 and theta == 1.5 * math.pi:
                    good = peak <= 1 + 1e-9
                else:
                    continue
                ok &= good
                if not good:
                    notes.append(f"Gamma={g:g} p1={p1} theta={theta:.3f} peak={peak:.6f}")
    return CheckResult("phase-controlled interference", ok, "; ".join(notes) or
                       "peaks above 1 at theta = 0, pi/2; none at theta = 3pi/2, Gamma/Omega = 6")


def check_bound(tol: float = DEFAULT_TOL) -> CheckResult:
    peaks = {}
    bound = None
    worst = -math.inf
    d0 = None
    for name in ("fig2a", "fig2b", "fig2c"):
        sc = get_scenario(name)
        tab = run_scenario(sc, tol)
        for s in sc.series:
            d = tab[f"trace_distance_{s.label}"]
            bound = initial_info_bound(s.initial, s.product)
            d0 = d[0]
            worst = max(worst, float(np.max(d - d0 - bound)))
            peaks[(name, s.params.Gamma)] = float(np.max(d))
    ok = (abs(bound - 30 / 49) <= 1e-12 and abs(d0 - 1 / 7) <= 1e-12 and worst <= 1e-9
          and peaks[("fig2a", 0.0)] >= 0.74 and abs(peaks[("fig2b", 0.0)] - 16 / 49) <= 1e-3)
    for name in ("fig2a", "fig2b", "fig2c"):
        ok &= all(peaks[(name, g)] < peaks[(name, 0.0)] for g in (1.0, 6.0))
    return CheckResult("information bound", ok,
                       f"I = {bound:.12f}, D(0) = {d0:.12f}, max(D - D0 - I) = {worst:.2e}, "
                       f"max D (Gamma=0, theta=pi/2) = {peaks[('fig2a', 0.0)]:.6f}, "
                       f"max D (Gamma=0, theta=0) = {peaks[('fig2b', 0.0)]:.6f}")


def check_entanglement(tol: float = DEFAULT_TOL) -> CheckResult:
    c1, c2, c3 = FIG3_AMPLITUDES
    params = ModelParams.resonant(Gamma=6.0)
    t = TimeGrid(0.0, 50.0, 5001).times()
    ok = True
    parts = []
    for theta1, expect in ((0.0, 0.076393), (math.pi, 0.523607)):
        finals = []
        for theta2 in (0.0, 0.25 * math.pi, 0.5 * math.pi, math.pi):
            init = TwoAtomInit(c1, c2, c3, theta1, theta2)
            traj = evolve_two_atoms(init, params, t, tol)
            conc = traj.concurrence
            finals.append(conc[-1])
            ok &= abs(conc[-1] - steady_concurrence(init)) <= 1e-4 and abs(conc[-1] - expect) <= 1e-4
            if theta1 == math.pi and theta2 == 0.0:
                ok &= bool(np.min(conc) >= conc[0] - 1e-9) and conc[-1] > conc[0]
        spread = max(finals) - min(finals)
        ok &= spread < 1e-6
        parts.append(f"theta1={theta1:.3f}: C(50) = {finals[0]:.6f}, spread {spread:.1e}")
    return CheckResult("steady two-atom entanglement", ok, "; ".join(parts))


def check_contraction(tol: float = DEFAULT_TOL) -> CheckResult:
    params = ModelParams.resonant(Gamma=1.0)
    oracle = build_lindblad_oracle(params)
    s7 = math.sqrt(1 / 7)
    rho_a = pure_state(oracle.ket({("e", 0): s7, ("g", 1): math.sqrt(6 / 7)}))
    atom = np.array([[6 / 7, 0], [0, 1 / 7]])
    mode = np.diag([1 / 7, 6 / 7, 0.0])
    rho_b = np.kron(atom, mode)
    grid = TimeGrid(0.0, 20.0, 200)
    a = oracle.evolve(rho_a, grid, tol)
    b = oracle.evolve(rho_b, grid, tol)
    d = np.array([trace_distance(x, y) for x, y in zip(a, b)])
    rise = float(np.max(np.diff(d)))
    return CheckResult("trace-distance contraction", rise <= 1e-9,
                       f"largest increase {rise:.2e} over 200 times")


def check_wootters(tol: float = DEFAULT_TOL) -> CheckResult:
    worst = 0.0
    for name in ("fig3a", "fig3b"):
        sc = get_scenario(name)
        t = sc.grid.times()[::10]
        for s in sc.series:
            traj = evolve_two_atoms(s.initial, s.params, t, tol)
            for state in traj:
                w = wootters_concurrence(reduced_two_atom_state(state))
                worst = max(worst, abs(w - 2 * abs(state.ct1 * state.ct2)))
    return CheckResult("Wootters concurrence of reduced state", worst <= 1e-9,
                       f"max |C_W - 2|c1 c2|| = {worst:.2e}")


CHECKS: tuple[Callable[..., CheckResult], ...] = (
    check_norm, check_propagator, check_typo, check_interference, check_bound,
    check_entanglement, check_contraction, check_wootters,
)


def run_all(tol: float = DEFAULT_TOL, report: Callable[[str], None] | None = None) -> list[CheckResult]:
    results = []
    for check in CHECKS:
        start = time.perf_counter()
        r = check(tol)
        results.append(r)
        if report is not None:
            report(f"{r.line()} [{time.perf_counter() - start:.1f}s]")
    return results
