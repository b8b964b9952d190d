"""Steady states, time evolution, quench protocols and Zeno-limit metrics.

Propagation is exact exponentiation of the 16x16 generator on the
requested time grid (no step integrator in the main path); a fixed-step
RK4 integrator lives in the tests as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .model import ModelParams, build_liouvillian, hermitize, unvec, vec

UP_PROJECTOR = np.array([[1, 0], [0, 0]], dtype=complex)


class DenominatorVanishes(Exception):
    """Stationary-state denominator hit zero (degenerate parameter line)."""


class NegativeRadicand(Exception):
    """The characteristic-strength rational function evaluated negative."""


def ness_exact(gamma, big_gamma):
    """Exact unique stationary state of the full two-qubit problem.

    Closed form in (gamma, Gamma); independent of the z-anisotropy.
    """
    g, G = gamma, abs(big_gamma)
    den = 8.0 * g ** 4 + g * g * (G * G - 16.0) + G * G + 8.0
    if abs(den) <= 1e-12:
        raise DenominatorVanishes(f"stationary denominator ~ 0 at gamma={g}, Gamma={G}")
    r = np.zeros((4, 4), dtype=complex)
    r[0, 0] = (g + 1) ** 2 * (4 * g * g - 8 * g + G * G + 4) / (2 * den)
    r[1, 1] = (g - 1) ** 2 * (4 * g * g + 8 * g + G * G + 4) / (2 * den)
    r[2, 2] = 2 * (g - 1) ** 2 * (g + 1) ** 2 / den
    r[3, 3] = r[2, 2]
    r[0, 3] = -1j * (g - 1) * (g + 1) ** 2 * G / den
    r[3, 0] = np.conj(r[0, 3])
    r[1, 2] = 1j * (g - 1) ** 2 * (g + 1) * G / den
    r[2, 1] = np.conj(r[1, 2])
    return r


def zeno_qubit2(gamma):
    """Second-qubit factor of the strong-dissipation stationary state."""
    g = gamma
    c = 2.0 * (g * g + 1.0)
    return np.array([[(g + 1) ** 2 / c, 0], [0, (g - 1) ** 2 / c]], dtype=complex)


def ness_zeno(gamma):
    """Strong-dissipation limit of the stationary state (qubit 1 pinned up)."""
    return np.kron(UP_PROJECTOR, zeno_qubit2(gamma))


@dataclass
class TrajectorySample:
    t: float
    rho: np.ndarray
    distance: float


def _distance(rho, reference, norm):
    diff = rho - reference
    if norm == "fro":
        return float(np.linalg.norm(diff))
    if norm == "spec":
        return float(linalg.singular_values(diff)[0])
    raise ValueError("norm must be 'fro' or 'spec'")


def _propagate(generator, rho0, t_grid, reference, norm):
    ts = np.asarray(t_grid, dtype=float)
    if ts.size == 0:
        return []
    if np.any(ts < 0) or np.any(np.diff(ts) < 0):
        raise ValueError("t_grid must be ascending and non-negative")
    steps = np.diff(np.concatenate([[0.0], ts]))
    uniform = ts.size > 1 and np.allclose(steps[1:], steps[1], rtol=1e-12, atol=0)
    samples = []
    if uniform and steps[0] in (0.0, steps[1]):
        # uniform grid: one propagator, repeated application
        prop = linalg.expm(generator * steps[1])
        v = vec(rho0)
        if steps[0] != 0.0:
            v = prop @ v
        for t in ts:
            rho, _dev = hermitize(unvec(v))
            samples.append(TrajectorySample(float(t), rho,
                                            _distance(rho, reference, norm)))
            v = prop @ v
    else:
        cache = {}
        v = vec(rho0)
        for t, dt in zip(ts, steps):
            if dt > 0:
                if dt not in cache:
                    cache[dt] = linalg.expm(generator * dt)
                v = cache[dt] @ v
            rho, _dev = hermitize(unvec(v))
            samples.append(TrajectorySample(float(t), rho,
                                            _distance(rho, reference, norm)))
    return samples


def evolve(p: ModelParams, rho0, t_grid, reference=None, norm="fro"):
    """Evolve a state on a time grid; distances are against ``reference``
    (the exact stationary state of ``p`` when not given)."""
    if reference is None:
        reference = ness_exact(p.gamma, p.big_gamma)
    return _propagate(build_liouvillian(p), np.asarray(rho0, dtype=complex),
                      t_grid, np.asarray(reference, dtype=complex), norm)


def _assert_unique_ness(p: ModelParams):
    lv = build_liouvillian(p)
    eigs = linalg.eigen(lv).eigenvalues
    scale = max(1.0, float(np.abs(eigs).max()))
    nzero = int(np.sum(np.abs(eigs) < 1e-10 * scale))
    if nzero != 1:
        raise DenominatorVanishes(
            f"stationary state not unique at {p} ({nzero} null eigenvalues)")


def quench(gamma_i, gamma_f, delta, big_gamma, t_max, n_samples,
           big_gamma_i=None, norm="fro", check_unique=True):
    """Instantaneous anisotropy quench relaxing toward the new steady state.

    Starts from the exact stationary state at gamma_i (dissipation
    big_gamma_i, defaulting to big_gamma) and evolves under the generator
    at gamma_f; the recorded distance is to the final stationary state.
    For the gamma > 1 protocol both the anisotropy and the dissipation are
    quenched together by passing big_gamma_i explicitly.
    """
    if big_gamma_i is None:
        big_gamma_i = big_gamma
    pf = ModelParams(gamma_f, delta, big_gamma)
    if check_unique:
        _assert_unique_ness(pf)
    rho0 = ness_exact(gamma_i, big_gamma_i)
    ref = ness_exact(gamma_f, big_gamma)
    t_grid = np.linspace(0.0, t_max, n_samples)
    return _propagate(build_liouvillian(pf), rho0, t_grid, ref, norm)


def relaxation_time(samples, epsilon=1e-2):
    """Last-crossing relaxation time: first t with d < epsilon from then on.

    Returns +inf when the final sample is still at or above epsilon, and
    the first grid time when the whole trajectory is below.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if not samples:
        raise ValueError("no samples")
    ds = np.array([s.distance for s in samples])
    above = np.flatnonzero(ds >= epsilon)
    if above.size == 0:
        return samples[0].t
    if above[-1] == len(samples) - 1:
        return math.inf
    return samples[above[-1] + 1].t


@dataclass
class EffectiveModel:
    """Reduced one-qubit description valid deep in the Zeno regime."""

    h_d: np.ndarray
    l_tilde: np.ndarray
    rate: float

    def generator(self):
        i2 = np.eye(2, dtype=complex)
        ldl = self.l_tilde.conj().T @ self.l_tilde
        return (-1j * np.kron(self.h_d, i2) + 1j * np.kron(i2, self.h_d.T)
                + self.rate * (np.kron(self.l_tilde, self.l_tilde.conj())
                               - 0.5 * np.kron(ldl, i2)
                               - 0.5 * np.kron(i2, ldl.T)))


def effective_model(gamma, delta, big_gamma):
    if big_gamma <= 0:
        raise ValueError("the effective description needs Gamma > 0")
    h_d = delta * np.array([[1, 0], [0, -1]], dtype=complex)
    l_tilde = 4.0 * np.array([[0, 1 + gamma], [1 - gamma, 0]], dtype=complex)
    return EffectiveModel(h_d, l_tilde, 1.0 / big_gamma)


def evolve_effective(gamma, delta, big_gamma, r0, t_grid, norm="fro"):
    """Evolve the 2x2 reduced state under the effective slow generator.

    The effective dissipation strength is 1/Gamma; distances are against
    the strong-dissipation stationary factor.
    """
    em = effective_model(gamma, delta, big_gamma)
    return _propagate(em.generator(), np.asarray(r0, dtype=complex),
                      t_grid, zeno_qubit2(gamma), norm)


def gamma_ch_sq(gamma):
    """Squared characteristic dissipation strength (closed rational form)."""
    g2 = gamma * gamma
    num = 4.0 * g2 ** 5 + 36.0 * g2 ** 4 - 40.0 * g2 ** 3 - 40.0 * g2 ** 2 + 36.0 * g2 + 4.0
    den = g2 ** 4 + 4.0 * g2 ** 3 + 6.0 * g2 ** 2 + 4.0 * g2 + 1.0
    return num / den


def gamma_ch(gamma):
    """Characteristic dissipation strength needed to reach the Zeno state."""
    val = gamma_ch_sq(gamma)
    if val < 0:
        raise NegativeRadicand(f"rational function negative at gamma={gamma}")
    return math.sqrt(val)


def trace_gap(gamma, big_gamma):
    """Finite-dissipation population-purity gap, scaled by Gamma^2.

    Gamma^2 (sum_i rho_Zeno[i,i]^2 - sum_i rho_NESS[i,i]^2): the purity of
    the populations, which is the part the reduced slow dynamics relaxes.
    Its large-Gamma limit is gamma_ch_sq (the full Hilbert-Schmidt purity
    gap converges to a different constant because the stationary
    coherences also scale as 1/Gamma).
    """
    rz = np.real(np.diag(ness_zeno(gamma)))
    rn = np.real(np.diag(ness_exact(gamma, big_gamma)))
    return big_gamma ** 2 * (float(np.sum(rz * rz)) - float(np.sum(rn * rn)))


@dataclass
class ZenoMetrics:
    gamma: float
    big_gamma: float
    gamma_ch_sq: float
    trace_gap: float

    @property
    def rel_deviation(self):
        if self.gamma_ch_sq == 0.0:
            return abs(self.trace_gap)
        return abs(self.trace_gap / self.gamma_ch_sq - 1.0)


def zeno_metrics(gamma, big_gamma=1e4, tol=None):
    """Closed-form characteristic strength against its finite-Gamma estimate.

    With ``tol`` set, raises if the two disagree beyond it (convergence
    assertion for the Zeno limit).
    """
    m = ZenoMetrics(gamma, big_gamma, gamma_ch_sq(gamma), trace_gap(gamma, big_gamma))
    if tol is not None and m.rel_deviation > tol:
        raise ArithmeticError(
            f"trace gap {m.trace_gap} has not converged to {m.gamma_ch_sq}")
    return m


def check_density(rho, herm_tol=1e-12, trace_tol=1e-12, eig_floor=-1e-10):
    """Validate the density-matrix invariants; returns (ok, message)."""
    rho = np.asarray(rho)
    dev = float(np.abs(rho - rho.conj().T).max())
    if dev > herm_tol:
        return False, f"hermiticity violated by {dev:.2e}"
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > trace_tol:
        return False, f"trace off by {abs(tr - 1.0):.2e}"
    eigs = linalg.eigen(np.asarray(rho, complex)).eigenvalues.real
    if eigs.min() < eig_floor:
        return False, f"negative eigenvalue {eigs.min():.2e}"
    return True, "ok"
