"""Closed-form block spectra, strong-dissipation stripe asymptotics, and
numerical Jordan-structure detection at spectral degeneracies.

The parity-even block has a fully explicit spectrum; the parity-odd one
reduces to a quartic whose roots feed the eigenvalue pairs
lambda = (-Gamma +/- sqrt(Gamma^2 + xi)) / 2.  The quartic is solved by the
closed radical formulas (real-valued cube root on the real branch) with a
companion-matrix fallback whenever the radicals go numerically degenerate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .model import ModelParams, build_liouvillian, sigma_minus_matrix, sigma_plus_matrix


class QuarticBranchFailure(Exception):
    """Radical quartic formulas hit a degenerate resolvent."""


def match_multisets(a, b):
    """Greedy smallest-distance-first matching of two equal-size multisets.

    Returns the largest matched distance, i.e. how far the multisets are
    from being equal.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.size != b.size:
        raise ValueError("multiset sizes differ")
    D = np.abs(a[:, None] - b[None, :])
    worst = 0.0
    for _ in range(a.size):
        i, j = np.unravel_index(np.argmin(D), D.shape)
        worst = max(worst, D[i, j])
        D[i, :] = np.inf
        D[:, j] = np.inf
    return worst


def sigma_plus_spectrum(p: ModelParams):
    """The eight z-anisotropy-independent eigenvalues, in closed form.

    Principal complex square roots on both nested radicals; the sheet
    choice is validated against the numeric eigensolver in the tests.
    """
    g, G = p.gamma, p.big_gamma
    inner = np.emath.sqrt((G * G - 64.0) * (G * G - 64.0 * g * g))
    quartet = []
    for si in (+1.0, -1.0):
        rad = np.emath.sqrt(G * G - 32.0 * (1.0 + g * g) + si * inner)
        for so in (+1.0, -1.0):
            quartet.append(-G / 2.0 + so * (np.sqrt(2.0) / 4.0) * rad)
    return np.array([0.0, -G, -G / 2.0, -G / 2.0] + quartet, dtype=complex)


def quartic_coeffs(p: ModelParams):
    """Coefficients (c_a..c_e) of the quartic governing the odd block.

    Functions of the squared parameters only; they come from the block's
    characteristic polynomial rewritten in u = lambda^2 + Gamma * lambda
    (the quartic variable is xi = 4u).
    """
    X, Y, Z = p.gamma * p.gamma, p.delta * p.delta, p.big_gamma * p.big_gamma
    ca = 1.0
    cb = 2.0 * Z + 32.0 * (1.0 + X) + 64.0 * Y
    cc = (Z * Z + 32.0 * Z * (2.0 * (1.0 + X) + 5.0 * Y)
          + 256.0 * ((1.0 + X) ** 2 + 2.0 * X + 2.0 * (1.0 + X) * Y + 6.0 * Y * Y))
    cd = 32.0 * (8.0 * Z * ((1.0 + X) ** 2 + 6.0 * X + 14.0 * Y * Y)
                 + Z * Z * ((1.0 + X) + 5.0 * Y)
                 + 256.0 * (X * (1.0 + X) + ((1.0 + X) ** 2 - 6.0 * X) * Y
                            - (1.0 + X) * Y * Y + 2.0 * Y ** 3))
    ce = (64.0 * Z ** 3 * Y
          + 65536.0 * (X - (1.0 + X) * Y + Y * Y) ** 2
          + 256.0 * Z * Z * (4.0 * X - 2.0 * (1.0 + X) * Y + 9.0 * Y * Y)
          + 4096.0 * Z * (2.0 * X * (1.0 + X) + ((1.0 + X) ** 2 - 6.0 * X) * Y
                          - 4.0 * (1.0 + X) * Y * Y + 6.0 * Y ** 3))
    return np.array([ca, cb, cc, cd, ce])


@dataclass
class QuarticSolve:
    """Radical solution record for the odd-block quartic."""

    coeffs: np.ndarray
    intermediates: dict = field(default_factory=dict)
    roots: np.ndarray = None
    max_residual: float = np.nan
    used_fallback: bool = False


def _quartic_residual(co, roots):
    ca, cb, cc, cd, ce = co
    scale = np.max(np.abs(co))
    worst = 0.0
    for x in roots:
        val = abs(((ca * x + cb) * x + cc) * x ** 2 + cd * x + ce)
        worst = max(worst, val / (scale * max(1.0, abs(x)) ** 4))
    return worst


def _quartic_radical_roots(co):
    """Closed radical quartic roots via the resolvent-cubic intermediates."""
    ca, cb, cc, cd, ce = co
    p1 = (2.0 * cc ** 3 - 9.0 * cb * cc * cd + 27.0 * ca * cd * cd
          + 27.0 * cb * cb * ce - 72.0 * ca * cc * ce)
    d0 = cc * cc - 3.0 * cb * cd + 12.0 * ca * ce
    p2 = p1 + np.emath.sqrt(p1 * p1 - 4.0 * d0 ** 3 + 0j)
    half = p2 / 2.0
    if abs(half.imag) <= 1e-14 * max(1.0, abs(half)):
        croot = complex(np.cbrt(half.real))  # real-valued cube root
    else:
        croot = half ** (1.0 / 3.0)
    if abs(croot) < 1e-300:
        raise QuarticBranchFailure("vanishing resolvent cube root")
    p3 = d0 / (3.0 * ca * croot) + croot / (3.0 * ca)
    p4 = np.emath.sqrt(cb * cb / (4.0 * ca * ca) - 2.0 * cc / (3.0 * ca) + p3)
    if abs(p4) < 1e-13:
        raise QuarticBranchFailure("p4 underflow (degenerate resolvent)")
    p5 = cb * cb / (2.0 * ca * ca) - 4.0 * cc / (3.0 * ca) - p3
    p6 = (-(cb / ca) ** 3 + 4.0 * cb * cc / (ca * ca) - 8.0 * cd / ca) / (4.0 * p4)
    base = -cb / (4.0 * ca)
    sm = np.emath.sqrt(p5 - p6)
    sp = np.emath.sqrt(p5 + p6)
    # the last root needs +p4/2: only that combination closes the multiset
    roots = np.array([base - p4 / 2.0 - sm / 2.0,
                      base - p4 / 2.0 + sm / 2.0,
                      base + p4 / 2.0 - sp / 2.0,
                      base + p4 / 2.0 + sp / 2.0])
    # cancellation inside the radicals can cost ~1e-5 accuracy without
    # raising the residual; a short Newton polish restores full precision
    # whenever the root is simple
    for k in range(4):
        z = roots[k]
        for _ in range(6):
            q = (((ca * z + cb) * z + cc) * z + cd) * z + ce
            dq = ((4.0 * ca * z + 3.0 * cb) * z + 2.0 * cc) * z + cd
            if dq == 0.0:
                break
            step = q / dq
            if abs(step) > 0.05 * max(1.0, abs(z)):
                break
            z -= step
            if abs(step) <= 4e-16 * max(1.0, abs(z)):
                break
        roots[k] = z
    inter = {"p1": p1, "p2": p2, "p3": p3, "p4": p4, "p5": p5, "p6": p6}
    return roots, inter


def _quartic_companion_roots(co):
    monic = (co / co[0])[::-1]  # ascending for the companion builder
    deg = 4
    C = np.zeros((deg, deg), dtype=complex)
    for i in range(1, deg):
        C[i, i - 1] = 1.0
    C[:, -1] = -monic[:deg]
    return linalg.eigen(C).eigenvalues


def solve_quartic(p: ModelParams, residual_tol=1e-6):
    """Roots of the odd-block quartic, radicals first, companion fallback."""
    co = quartic_coeffs(p)
    record = QuarticSolve(coeffs=co)
    try:
        roots, inter = _quartic_radical_roots(co)
        record.intermediates = inter
        res = _quartic_residual(co, roots)
        if res > residual_tol:
            raise QuarticBranchFailure(f"radical residual {res:.2e}")
        record.roots = roots
        record.max_residual = res
    except QuarticBranchFailure:
        roots = _quartic_companion_roots(co)
        record.roots = roots
        record.max_residual = _quartic_residual(co, roots)
        record.used_fallback = True
    return record


def sigma_minus_spectrum(p: ModelParams):
    """Eight closed-form eigenvalues of the parity-odd block.

    Returns (eigenvalues, QuarticSolve record).
    """
    G = p.big_gamma
    record = solve_quartic(p)
    sq = np.emath.sqrt(G * G + record.roots)
    lams = np.concatenate([0.5 * (-G + sq), 0.5 * (-G - sq)])
    return lams, record


@dataclass
class SpectrumResult:
    params: ModelParams
    plus_eigs: np.ndarray
    minus_eigs: np.ndarray
    numeric_eigs: np.ndarray
    max_mismatch: float


def full_spectrum(p: ModelParams):
    """Closed-form 16-eigenvalue multiset against the numeric oracle."""
    plus = sigma_plus_spectrum(p)
    minus, _ = sigma_minus_spectrum(p)
    numeric = linalg.eigen(build_liouvillian(p)).eigenvalues
    mismatch = match_multisets(np.concatenate([plus, minus]), numeric)
    return SpectrumResult(p, plus, minus, numeric, mismatch)


@dataclass
class AsymptoticSpectrum:
    """Large-dissipation stripe eigenvalues, valid to first order in 1/Gamma."""

    gamma_plus: float
    gamma_minus: float
    stripe0: np.ndarray
    stripe1: np.ndarray
    stripe2: np.ndarray

    def all_values(self):
        return np.concatenate([self.stripe0, self.stripe1, self.stripe2])


def asymptotic_spectrum(p: ModelParams):
    g, d, G = p.gamma, p.delta, p.big_gamma
    if G <= 0:
        raise ValueError("stripe asymptotics need a positive dissipation strength")
    gp = 4.0 * (1.0 + g * g)
    gm = 4.0 * (1.0 - g * g)
    s0 = np.array([0.0, -2.0 * gp / G, -gp / G + 2j * d, -gp / G - 2j * d],
                  dtype=complex)
    s1 = np.array([-G / 2.0, -G / 2.0,
                   -G / 2.0 + 2.0 * gm / G, -G / 2.0 - 2.0 * gm / G,
                   -G / 2.0 + 8.0 * g / G + 2j * d, -G / 2.0 + 8.0 * g / G - 2j * d,
                   -G / 2.0 - 8.0 * g / G + 2j * d, -G / 2.0 - 8.0 * g / G - 2j * d],
                  dtype=complex)
    s2 = np.array([-G, -G + 2.0 * gp / G, -G + gp / G + 2j * d, -G + gp / G - 2j * d],
                  dtype=complex)
    return AsymptoticSpectrum(gp, gm, s0, s1, s2)


@dataclass
class JordanReport:
    block_tag: str
    eigenvalue: complex
    algebraic_mult: int
    geometric_mult: int
    block_sizes: list

    @property
    def defective(self):
        return self.geometric_mult < self.algebraic_mult


CLUSTER_RADIUS = 1e-6
RANK_TOL = 1e-8


def _cluster(values, radius):
    order = np.argsort(values.real + 1e-3 * values.imag)
    clusters = []
    for idx in order:
        v = values[idx]
        placed = False
        for cl in clusters:
            if abs(v - cl[-1]) <= radius or abs(v - np.mean(cl)) <= radius:
                cl.append(v)
                placed = True
                break
        if not placed:
            clusters.append([v])
    return [np.array(c) for c in clusters]


def jordan_structure(p: ModelParams, block_tag):
    """Jordan data of one 8x8 block at the given parameters.

    Eigenvalues are clustered within CLUSTER_RADIUS; geometric multiplicity
    and block sizes come from numeric ranks of successive powers of
    (Sigma - lambda I) at RANK_TOL relative tolerance.
    """
    if block_tag not in ("plus", "minus"):
        raise ValueError("block_tag must be 'plus' or 'minus'")
    mat = sigma_plus_matrix(p) if block_tag == "plus" else sigma_minus_matrix(p)
    n = mat.shape[0]
    eigs = linalg.eigen(mat).eigenvalues
    reports = []
    for cl in _cluster(eigs, CLUSTER_RADIUS):
        lam = complex(np.mean(cl))
        alg = len(cl)
        shifted = mat - lam * np.eye(n)
        ranks = [n]
        power = np.eye(n, dtype=complex)
        for _ in range(alg + 1):
            power = power @ shifted
            r = linalg.numeric_rank(power, tol=RANK_TOL)
            ranks.append(r)
            if r <= n - alg:
                break
        geo = n - ranks[1]
        # pad so rank differences are well-defined up to the largest block
        while len(ranks) < alg + 2:
            ranks.append(ranks[-1])
        sizes = []
        for k in range(1, alg + 1):
            nk = (ranks[k - 1] - ranks[k]) - (ranks[k] - ranks[k + 1])
            sizes.extend([k] * max(0, nk))
        sizes.sort(reverse=True)
        reports.append(JordanReport(block_tag, lam, alg, geo, sizes))
    reports.sort(key=lambda r: (r.eigenvalue.real, r.eigenvalue.imag))
    return reports
