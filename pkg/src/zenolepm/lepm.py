"""Exceptional-point manifolds: the degree-8 branching polynomial of the
parity-odd block, critical dissipation surface, phase-diagram regions and
the region boundary curves.

Everything here lives in squared variables X = gamma^2, Y = delta^2,
Z = Gamma^2; all results are even in each bare parameter.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .model import ModelParams
from .spectra import sigma_minus_spectrum

PLANE_8 = "PLANE_8"
PLANE_8GAMMA = "PLANE_8GAMMA"
SIGMA_MINUS = "SIGMA_MINUS"

ROOT_RESIDUAL_TOL = 1e-8   # |poly(Z)| <= tol * sum |a_i| max(1,Z)^i
WITNESS_GAP = 1e-3         # eigenvalue gap flagging a genuine coalescence
WITNESS_STEP = 1e-4        # relative Gamma offset for the local-minimum probe


class NoRoot(Exception):
    """A boundary sample admits no positive solution."""


# ---------------------------------------------------------------------------
# coefficient table: a_i(X, Y) = sum_j T[i][j](X) * Y^j
# (verified against the exact discriminant of the odd-block quartic)
# ---------------------------------------------------------------------------

_TERMS = {
    0: {
        2: lambda X: 2 ** 32 * (X - 1) ** 4 * X,  # times (X^2+(1-4Y)^2-2X(1+4Y))^2, handled below
    },
    1: {
        1: lambda X: -2 ** 27 * (X - 1) ** 8 * X,
        2: lambda X: 2 ** 31 * (X - 1) ** 6 * X * (X + 1),
        3: lambda X: 2 ** 31 * X * (X - 1) ** 4 * (1 + 30 * X + X * X),
        4: lambda X: -2 ** 35 * (X - 1) ** 2 * X * (X + 1) * (3 + 2 * X + 3 * X * X),
        5: lambda X: 2 ** 36 * (X - 1) ** 2 * X * (5 + 6 * X + 5 * X * X),
        6: lambda X: -2 ** 38 * X * (X - 1) ** 2 * (X + 1),
    },
    2: {
        0: lambda X: 2 ** 20 * (X - 1) ** 8 * X,
        1: lambda X: 2 ** 20 * (X - 1) ** 6 * (1 + X) * (1 - 34 * X + X * X),
        2: lambda X: -2 ** 23 * (X - 1) ** 4 * (1 + 24 * X + 238 * X ** 2 + 24 * X ** 3 + X ** 4),
        3: lambda X: 2 ** 24 * (X - 1) ** 2 * (1 + X) * (1 + 44 * X - 602 * X ** 2 + 44 * X ** 3 + X ** 4),
        4: lambda X: 2 ** 29 * X * (27 + 36 * X + 2 * X ** 2 + 36 * X ** 3 + 27 * X ** 4),
        5: lambda X: -2 ** 33 * X * (1 + X) * (5 - 2 * X + 5 * X * X),
        6: lambda X: 2 ** 33 * X * (3 + 2 * X + 3 * X * X),
    },
    3: {
        0: lambda X: -2 ** 14 * (X - 1) ** 6 * (1 + X) * (1 - 18 * X + X * X),
        1: lambda X: 2 ** 18 * (X - 1) ** 4 * (1 + 4 * X + 54 * X ** 2 + 4 * X ** 3 + X ** 4),
        2: lambda X: 2 ** 21 * (1 + X) * (X - 1) ** 2 * (1 + 10 * X + 42 * X ** 2 + 10 * X ** 3 + X ** 4),
        3: lambda X: -2 ** 20 * (3 + 22 * X - 883 * X ** 2 - 332 * X ** 3 - 883 * X ** 4 + 22 * X ** 5 + 3 * X ** 6),
        4: lambda X: -2 ** 26 * X * (1 + X) * (21 + 22 * X + 21 * X * X),
        5: lambda X: 2 ** 29 * X * (5 + 6 * X + 5 * X * X),
        6: lambda X: -2 ** 30 * X * (1 + X),
    },
    4: {
        0: lambda X: -256 * (X - 1) ** 4 * (15 - 60 * X - 166 * X ** 2 - 60 * X ** 3 + 15 * X ** 4),
        1: lambda X: -2 ** 15 * (X - 1) ** 2 * (1 + X) * (1 + 4 * X - 42 * X ** 2 + 4 * X ** 3 + X ** 4),
        2: lambda X: -2 ** 16 * (3 + 42 * X - 3 * X ** 2 - 340 * X ** 3 - 3 * X ** 4 + 42 * X ** 5 + 3 * X ** 6),
        3: lambda X: 2 ** 16 * (1 + X) * (3 - 156 * X - 974 * X ** 2 - 156 * X ** 3 + 3 * X ** 4),
        4: lambda X: 2 ** 21 * X * (39 + 74 * X + 39 * X * X),
        5: lambda X: -(2 ** 24) * 5 * X * (1 + X),
        6: lambda X: 2 ** 24 * X,
    },
    5: {
        0: lambda X: -64 * (3 + X - 21 * X ** 2 + 17 * X ** 3 + 17 * X ** 4 - 21 * X ** 5 + X ** 6 + 3 * X ** 7),
        1: lambda X: -256 * (X - 1) ** 2 * (1 + 68 * X + 246 * X ** 2 + 68 * X ** 3 + X ** 4),
        2: lambda X: 2 ** 13 * (1 + X) * (1 - 6 * X + X * X) * (1 + 14 * X + X * X),
        3: lambda X: -2 ** 12 * (1 - 236 * X - 682 * X ** 2 - 236 * X ** 3 + X ** 4),
        4: lambda X: -(2 ** 18) * 9 * X * (1 + X),
        5: lambda X: 2 ** 20 * X,
    },
    6: {
        0: lambda X: 4 * (1 - 2 * X - X ** 2 + 4 * X ** 3 - X ** 4 - 2 * X ** 5 + X ** 6),
        1: lambda X: 16 * (X - 1) ** 2 * (1 + X) * (5 + 38 * X + 5 * X * X),
        2: lambda X: -(2 ** 7) * (1 - 28 * X - 138 * X ** 2 - 28 * X ** 3 + X ** 4),
        3: lambda X: -7 * 2 ** 12 * X * (1 + X),
        4: lambda X: 3 * 2 ** 13 * X,
    },
    7: {
        1: lambda X: -(1 + 4 * X - 10 * X ** 2 + 4 * X ** 3 + X ** 4),
        2: lambda X: -(2 ** 7) * X * (1 + X),
        3: lambda X: 2 ** 8 * X,
    },
    8: {
        2: lambda X: X * 1.0,
    },
}


def _a0_y_coeffs(X):
    """Y-expansion of a_0 = 2^32 (X-1)^4 X Y^2 (X^2+(1-4Y)^2-2X(1+4Y))^2."""
    pref = 2 ** 32 * (X - 1) ** 4 * X
    # (q0 + q1 Y + q2 Y^2)^2 with q0 = (X-1)^2, q1 = -8(1+X), q2 = 16
    q = np.array([(X - 1) ** 2, -8.0 * (1 + X), 16.0])
    sq = np.convolve(q, q)
    return {j + 2: pref * c for j, c in enumerate(sq)}


def _y_tables(X):
    """Per-power-of-Z dictionaries {j: coefficient of Y^j} at fixed X."""
    tables = [dict() for _ in range(9)]
    tables[0] = _a0_y_coeffs(X)
    for i in range(1, 9):
        tables[i] = {j: f(X) for j, f in _TERMS[i].items()}
    return tables


@dataclass
class LepPolynomial:
    X: float
    Y: float
    coeffs: np.ndarray  # a_0..a_8, ascending in Z


def lep_poly_coeffs(X, Y):
    """Evaluate the nine branching-polynomial coefficients at (X, Y).

    Each coefficient is an fsum over its monomial-in-Y terms, which
    keeps the large alternating contributions compensated.
    """
    if X < 0 or Y < 0:
        raise ValueError("X and Y are squared parameters and must be >= 0")
    tables = _y_tables(X)
    coeffs = np.array([math.fsum(c * Y ** j for j, c in tab.items())
                       for tab in tables])
    return LepPolynomial(X, Y, coeffs)


def lep_poly_in_y(X, Z):
    """The same polynomial reorganized in Y at fixed Z (ascending coeffs)."""
    tables = _y_tables(X)
    jmax = max(max(tab) for tab in tables if tab)
    out = np.zeros(jmax + 1)
    for i, tab in enumerate(tables):
        zi = Z ** i
        for j, c in tab.items():
            out[j] += c * zi
    return out


@dataclass
class LepRoot:
    big_gamma: float
    z: float
    multiplicity: int
    residual: float
    witness_ok: bool
    witness_gap: float


@dataclass
class LepSet:
    gamma: float
    delta: float
    plus_leps: tuple
    minus_leps: list
    center_collapses: list = field(default_factory=list)

    @property
    def branch_count(self):
        return len(self.minus_leps)

    def all_gammas(self):
        return sorted(set(self.plus_leps) | {r.big_gamma for r in self.minus_leps})


def _min_eig_gap(gamma, delta, big_gamma):
    lams, _ = sigma_minus_spectrum(ModelParams(gamma, delta, big_gamma))
    d = np.abs(lams[:, None] - lams[None, :])
    d[np.eye(8, dtype=bool)] = np.inf
    return float(d.min())


def _witness(gamma, delta, g0):
    """Coalescence witness: the minimum eigenvalue gap of the odd block has
    a local minimum <= WITNESS_GAP at g0 (probed at g0 (1 +/- step))."""
    gap0 = _min_eig_gap(gamma, delta, g0)
    gap_lo = _min_eig_gap(gamma, delta, g0 * (1 - WITNESS_STEP))
    gap_hi = _min_eig_gap(gamma, delta, g0 * (1 + WITNESS_STEP))
    ok = gap0 <= WITNESS_GAP and gap0 <= gap_lo and gap0 <= gap_hi
    return ok, gap0


def _center_collapse_poly(X, Y):
    """Polynomial in Z whose roots give the lambda = -Gamma/2 collapses.

    Substituting xi = -Z into the quartic detects the points where an
    eigenvalue pair merges at -Gamma/2; these are branchings of the
    eigenvalue map but not zeros of the quartic discriminant, so they are
    recorded separately and not counted as manifold branches.
    """
    # quartic coefficients as polynomials in Z (ascending)
    cb = np.array([32.0 * (1 + X) + 64.0 * Y, 2.0])
    cc = np.array([256.0 * ((1 + X) ** 2 + 2 * X + 2 * (1 + X) * Y + 6 * Y * Y),
                   32.0 * (2 * (1 + X) + 5 * Y), 1.0])
    cd = np.array([32.0 * 256.0 * (X * (1 + X) + ((1 + X) ** 2 - 6 * X) * Y
                                   - (1 + X) * Y * Y + 2 * Y ** 3),
                   32.0 * 8.0 * ((1 + X) ** 2 + 6 * X + 14 * Y * Y),
                   32.0 * ((1 + X) + 5 * Y)])
    ce = np.array([65536.0 * (X - (1 + X) * Y + Y * Y) ** 2,
                   4096.0 * (2 * X * (1 + X) + ((1 + X) ** 2 - 6 * X) * Y
                             - 4 * (1 + X) * Y * Y + 6 * Y ** 3),
                   256.0 * (4 * X - 2 * (1 + X) * Y + 9 * Y * Y),
                   64.0 * Y])
    P = np.polynomial.polynomial
    z = np.array([0.0, 1.0])
    out = P.polypow(z, 4)
    out = P.polyadd(out, P.polymul(cb, P.polypow(z, 3)) * -1.0)
    out = P.polyadd(out, P.polymul(cc, P.polypow(z, 2)))
    out = P.polyadd(out, P.polymul(cd, z) * -1.0)
    out = P.polyadd(out, ce)
    return out


def lep_roots_minus(gamma, delta, residual_tol=ROOT_RESIDUAL_TOL):
    """All positive branching strengths of the parity-odd block at (gamma, delta).

    Real positive roots Z of the degree-8 polynomial mapped to
    Gamma = sqrt(Z), each carrying its residual and a coalescence witness.
    Witness failures are flagged, never dropped.
    """
    if gamma <= 0 or delta <= 0:
        raise ValueError("lep_roots_minus needs gamma > 0 and delta > 0")
    X, Y = gamma * gamma, delta * delta
    poly = lep_poly_coeffs(X, Y)
    # the leading coefficient X Y^2 is an exact product: tiny values at
    # small anisotropies are genuine and carry the divergent roots, so the
    # degree is reduced only when it is exactly zero
    roots = linalg.real_roots(poly.coeffs, domain_min=1e-12, domain_max=np.inf,
                              tol=residual_tol, trim_rel_tol=0.0)
    out = []
    for z, mult in roots:
        g0 = math.sqrt(z)
        res = abs(linalg.polyval(poly.coeffs, z)) / linalg.poly_scale(poly.coeffs, z)
        ok, gap = _witness(gamma, delta, g0)
        out.append(LepRoot(g0, z, mult, res, ok, gap))
    out.sort(key=lambda r: r.big_gamma)
    collapses = []
    try:
        cpoly = _center_collapse_poly(X, Y)
        for z, _ in linalg.real_roots(cpoly, domain_min=1e-12, domain_max=np.inf,
                                      tol=residual_tol):
            collapses.append(math.sqrt(z))
    except linalg.DegenerateAllZero:
        pass
    return LepSet(gamma, delta, (8.0, 8.0 * abs(gamma)), out, collapses)


@dataclass
class PhasePoint:
    gamma: float
    delta: float
    gamma_cr: float
    region: str
    lep_set: LepSet


def gamma_cr(gamma, delta, residual_tol=ROOT_RESIDUAL_TOL):
    """Critical dissipation: the largest branching strength at (gamma, delta).

    Beyond it every eigenvalue is analytic in 1/Gamma.  The region label
    records which manifold supplies the supremum: one of the two planes
    (8 or 8 gamma) or the odd-block manifold.
    """
    leps = lep_roots_minus(gamma, delta, residual_tol)
    candidates = list(leps.plus_leps) + [r.big_gamma for r in leps.minus_leps]
    gcr = max(candidates)
    if abs(gcr - 8.0) <= 1e-9 and gamma < 1:
        region = PLANE_8
    elif abs(gcr - 8.0 * gamma) <= 1e-9 and gamma > 1:
        region = PLANE_8GAMMA
    else:
        region = SIGMA_MINUS
    return PhasePoint(gamma, delta, gcr, region, leps)


@dataclass
class BoundarySample:
    gamma: float
    deltas: np.ndarray       # all positive solutions, ascending
    delta_lower: float
    delta_upper: float


@dataclass
class BoundaryCurve:
    side: str                 # "LEFT" (Gamma=8) or "RIGHT" (Gamma=8 gamma)
    samples: list
    gaps: list                # gamma values where no positive solution exists


def boundary_curve(side, gamma_samples, residual_tol=ROOT_RESIDUAL_TOL):
    """Region-boundary curve: solve the branching polynomial for delta with
    the dissipation pinned to the relevant plane.

    LEFT pins Z = 64 for gamma in (0, 1); RIGHT pins Z = 64 gamma^2 for
    gamma > 1.  Each sample keeps every positive delta branch; the largest
    is the region boundary.
    """
    side = side.upper()
    if side not in ("LEFT", "RIGHT"):
        raise ValueError("side must be LEFT or RIGHT")
    samples, gaps = [], []
    for g in gamma_samples:
        if side == "LEFT" and not 0 < g < 1:
            raise ValueError("LEFT samples must satisfy 0 < gamma < 1")
        if side == "RIGHT" and not g > 1:
            raise ValueError("RIGHT samples must satisfy gamma > 1")
        X = g * g
        Z = 64.0 if side == "LEFT" else 64.0 * X
        ycoeffs = lep_poly_in_y(X, Z)
        try:
            # Y = 0 is a structural root of the pinned-plane polynomial
            # (exactly zero constant term); the floor keeps its float-noise
            # images out of the branch list
            roots = linalg.real_roots(ycoeffs, domain_min=1e-8, domain_max=np.inf,
                                      tol=residual_tol)
        except linalg.DegenerateAllZero:
            roots = []
        ys = np.array(sorted(y for y, _ in roots))
        if ys.size == 0:
            gaps.append(g)
            continue
        deltas = np.sqrt(ys)
        samples.append(BoundarySample(g, deltas, float(deltas[0]), float(deltas[-1])))
    return BoundaryCurve(side, samples, gaps)


def default_boundary_gammas(side, n=400):
    """Log-spaced samples accumulating near the gamma = 1 meeting point."""
    t = np.linspace(0.0, 1.0, n)
    if side.upper() == "LEFT":
        return 1.0 - np.logspace(np.log10(0.95), np.log10(5e-4), n)
    return 1.0 + np.logspace(np.log10(5e-4), np.log10(1.5), n)


def _scan_point(args):
    g, d, residual_tol = args
    try:
        return lep_roots_minus(g, d, residual_tol)
    except Exception as exc:  # per-point failures are data, not crashes
        return f"{type(exc).__name__}: {exc}"


def manifold_scan(gammas, deltas, residual_tol=ROOT_RESIDUAL_TOL, workers=1):
    """Evaluate lep_roots_minus over a grid, one record per (gamma, delta).

    Records appear in row-major grid order regardless of worker count;
    failures are recorded inline as strings so a scan never aborts.
    """
    tasks = [(float(g), float(d), residual_tol) for g in gammas for d in deltas]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_scan_point, tasks, chunksize=64))
    else:
        results = [_scan_point(t) for t in tasks]
    grid = []
    k = 0
    for g in gammas:
        for d in deltas:
            grid.append((float(g), float(d), results[k]))
            k += 1
    return grid
