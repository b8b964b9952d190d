"""Model construction: Hamiltonian, jump operator, vectorized generator,
parity projectors and the two 8x8 invariant blocks.

Conventions fixed here and relied on everywhere else:

* vectorization is row-major: vec(rho) stacks rows, so vec(A rho B) =
  (A kron B^T) vec(rho);
* the "plus" block is the parity sector containing all populations (and
  hence the stationary state), the "minus" block carries the
  even-odd coherences and is the only place the z-exchange enters.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
I16 = np.eye(16, dtype=complex)

# jump operator: raising on qubit 1 only
JUMP = np.kron(SIGMA_PLUS, I2)

_PARITY = np.kron(SIGMA_Z, SIGMA_Z)  # two-qubit parity
_Q_PLUS_DIAG = 0.5 * (np.ones(16) + np.diag(np.kron(_PARITY, _PARITY)).real)
PLUS_INDICES = tuple(int(i) for i in np.flatnonzero(_Q_PLUS_DIAG > 0.5))
MINUS_INDICES = tuple(int(i) for i in np.flatnonzero(_Q_PLUS_DIAG < 0.5))


class BlockMismatch(Exception):
    """Extracted and explicit block forms differ under every permutation."""


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless model coordinates (y-anisotropy, z-anisotropy, dissipation).

    The spectrum depends only on squares of the parameters, so a negative
    dissipation strength is normalized to its absolute value.
    """

    gamma: float
    delta: float
    big_gamma: float

    def __post_init__(self):
        for name in ("gamma", "delta", "big_gamma"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
        object.__setattr__(self, "big_gamma", abs(self.big_gamma))


def vec(rho):
    """Row-major vectorization of a matrix."""
    return np.asarray(rho, dtype=complex).reshape(-1)

def unvec(v):
    """Inverse of vec for square matrices."""
    v = np.asarray(v, dtype=complex)
    n = int(round(math.sqrt(v.size)))
    return v.reshape(n, n)


def build_hamiltonian(p: ModelParams):
    """4x4 anisotropic two-qubit exchange Hamiltonian."""
    return (np.kron(SIGMA_X, SIGMA_X)
            + p.gamma * np.kron(SIGMA_Y, SIGMA_Y)
            + p.delta * np.kron(SIGMA_Z, SIGMA_Z))


def build_liouvillian(p: ModelParams):
    """16x16 vectorized generator of the dissipative evolution."""
    h = build_hamiltonian(p)
    ldl = JUMP.conj().T @ JUMP
    return (-1j * np.kron(h, I4) + 1j * np.kron(I4, h.T)
            + p.big_gamma * (np.kron(JUMP, JUMP.conj())
                             - 0.5 * np.kron(ldl, I4)
                             - 0.5 * np.kron(I4, ldl.T)))


def q_projectors():
    """The complementary parity projectors acting on vectorized operators."""
    pp = np.kron(_PARITY, _PARITY)
    return 0.5 * (I16 + pp), 0.5 * (I16 - pp)


def explicit_blocks(p: ModelParams):
    """The two 8x8 blocks assembled from their closed-form 4x4 constituents.

    Used as a cross-check against the blocks extracted from the full
    generator; the coupling corner C has the single entry Gamma at (0, 1).
    """
    g, d, G = p.gamma, p.delta, p.big_gamma
    a1 = np.array([
        [0, 0, -1j * (1 - g), 1j * (1 - g)],
        [0, -G, 1j * (1 - g), -1j * (1 - g)],
        [-1j * (1 - g), 1j * (1 - g), -G / 2, 0],
        [1j * (1 - g), -1j * (1 - g), 0, -G / 2]], dtype=complex)
    a2 = np.array([
        [0, 0, 1j * (g + 1), -1j * (g + 1)],
        [0, -G, -1j * (g + 1), 1j * (g + 1)],
        [1j * (g + 1), -1j * (g + 1), -G / 2, 0],
        [-1j * (g + 1), 1j * (g + 1), 0, -G / 2]], dtype=complex)
    b1 = np.array([
        [2j * d, 0, -1j * (g + 1), 1j * (1 - g)],
        [0, -G + 2j * d, 1j * (1 - g), -1j * (g + 1)],
        [-1j * (g + 1), 1j * (1 - g), -G / 2 + 2j * d, 0],
        [1j * (1 - g), -1j * (g + 1), 0, -G / 2 + 2j * d]], dtype=complex)
    b2 = np.array([
        [-2j * d, 0, -1j * (1 - g), 1j * (g + 1)],
        [0, -G - 2j * d, 1j * (g + 1), -1j * (1 - g)],
        [-1j * (1 - g), 1j * (g + 1), -G / 2 - 2j * d, 0],
        [1j * (g + 1), -1j * (1 - g), 0, -G / 2 - 2j * d]], dtype=complex)
    c = np.zeros((4, 4), dtype=complex)
    c[0, 1] = G
    plus = np.block([[a1, c], [c, a2]])
    minus = np.block([[b1, c], [c, b2]])
    return plus, minus


@dataclass(frozen=True)
class LiouvillianBlocks:
    full: np.ndarray
    sigma_plus: np.ndarray
    sigma_minus: np.ndarray
    plus_indices: tuple
    minus_indices: tuple


# permutations relating the extracted blocks to the explicit closed forms;
# pure index bookkeeping, so one successful search serves all parameters
_PERM_CACHE = {"plus": None, "minus": None}


def _match_permutation(extracted, explicit, cached):
    if cached is not None:
        P = list(cached)
        if np.allclose(extracted[np.ix_(P, P)], explicit, atol=1e-12):
            return cached
    diag_e = np.diag(extracted)
    diag_t = np.diag(explicit)
    # group target positions by diagonal value and permute within groups
    groups = []
    used = np.zeros(8, bool)
    for i in range(8):
        if used[i]:
            continue
        members = [j for j in range(8) if not used[j]
                   and abs(diag_t[j] - diag_t[i]) < 1e-9]
        for j in members:
            used[j] = True
        sources = [k for k in range(8) if abs(diag_e[k] - diag_t[i]) < 1e-9]
        if len(sources) != len(members):
            return None
        groups.append((members, sources))
    for assignment in itertools.product(*[itertools.permutations(src)
                                          for _, src in groups]):
        perm = [0] * 8
        ok = True
        for (members, _), chosen in zip(groups, assignment):
            for pos, src in zip(members, chosen):
                perm[pos] = src
        if np.allclose(extracted[np.ix_(perm, perm)], explicit, atol=1e-12):
            return tuple(perm)
    return None


def build_blocks(p: ModelParams, verify=True):
    """Project the generator onto the two parity sectors and extract blocks.

    Verifies the projector identities and, when ``verify`` is set, that the
    extracted blocks coincide with the explicit closed forms up to a
    simultaneous row/column permutation (raising BlockMismatch otherwise).
    """
    lv = build_liouvillian(p)
    qp, qm = q_projectors()
    if not np.allclose(qp + qm, I16, atol=1e-14):
        raise BlockMismatch("projector completeness failed")
    if np.abs(qp @ lv @ qm).max() > 1e-12 or np.abs(qm @ lv @ qp).max() > 1e-12:
        raise BlockMismatch("generator does not commute with parity projectors")
    sp = lv[np.ix_(PLUS_INDICES, PLUS_INDICES)]
    sm = lv[np.ix_(MINUS_INDICES, MINUS_INDICES)]
    if verify:
        exp_p, exp_m = explicit_blocks(p)
        perm_p = _match_permutation(sp, exp_p, _PERM_CACHE["plus"])
        perm_m = _match_permutation(sm, exp_m, _PERM_CACHE["minus"])
        if perm_p is None or perm_m is None:
            raise BlockMismatch("no permutation matches the explicit block forms")
        _PERM_CACHE["plus"] = perm_p
        _PERM_CACHE["minus"] = perm_m
    return LiouvillianBlocks(lv, sp, sm, PLUS_INDICES, MINUS_INDICES)


def sigma_plus_matrix(p: ModelParams):
    """8x8 parity-even block, extracted without the verification pass."""
    return build_liouvillian(p)[np.ix_(PLUS_INDICES, PLUS_INDICES)]


def sigma_minus_matrix(p: ModelParams):
    """8x8 parity-odd block, extracted without the verification pass."""
    return build_liouvillian(p)[np.ix_(MINUS_INDICES, MINUS_INDICES)]


def hermitize(rho, tol=None):
    """Symmetrize (rho + rho^H)/2, returning the deviation as well."""
    rho = np.asarray(rho, dtype=complex)
    dev = float(np.abs(rho - rho.conj().T).max())
    return 0.5 * (rho + rho.conj().T), dev
