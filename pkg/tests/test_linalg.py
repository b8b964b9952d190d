import numpy as np
import numpy.polynomial.polynomial as npoly
import pytest

from zenolepm import linalg
from zenolepm.model import (I2, SIGMA_PLUS, SIGMA_Z, ModelParams,
                            sigma_plus_matrix)

RNG = np.random.default_rng(20240811)


def greedy_match(a, b):
    a, b = np.asarray(a, complex), np.asarray(b, complex)
    D = np.abs(a[:, None] - b[None, :])
    worst = 0.0
    for _ in range(a.size):
        i, j = np.unravel_index(np.argmin(D), D.shape)
        worst = max(worst, D[i, j])
        D[i, :] = np.inf
        D[:, j] = np.inf
    return worst


# -- kron --------------------------------------------------------------------

def test_kron_identity():
    assert np.array_equal(linalg.kron(I2, I2), np.eye(4))


def test_kron_sigma_z_pair():
    assert np.array_equal(linalg.kron(SIGMA_Z, SIGMA_Z),
                          np.diag([1, -1, -1, 1]).astype(complex))


def test_kron_raising_on_first_qubit():
    k = linalg.kron(SIGMA_PLUS, I2)
    nz = {(i, j): k[i, j] for i in range(4) for j in range(4) if k[i, j] != 0}
    assert nz == {(0, 2): 1, (1, 3): 1}


def test_kron_mixed_product_and_associativity():
    for _ in range(30):
        A = RNG.normal(size=(3, 2)) + 1j * RNG.normal(size=(3, 2))
        B = RNG.normal(size=(2, 4)) + 1j * RNG.normal(size=(2, 4))
        C = RNG.normal(size=(2, 3)) + 1j * RNG.normal(size=(2, 3))
        D = RNG.normal(size=(3, 2)) + 1j * RNG.normal(size=(3, 2))
        lhs = linalg.kron(A, C) @ linalg.kron(B, D)
        rhs = linalg.kron(A @ B, C @ D)
        assert np.abs(lhs - rhs).max() <= 1e-12 * max(1, np.abs(rhs).max())
        assert np.allclose(linalg.kron(linalg.kron(A, B), C),
                           linalg.kron(A, linalg.kron(B, C)), atol=1e-12)


# -- eigen -------------------------------------------------------------------

def test_eigen_diagonal_input():
    dec = linalg.eigen(np.diag([1.0, 2.0j, -3.0]))
    assert greedy_match(dec.eigenvalues, [1, 2j, -3]) < 1e-14


def test_eigen_even_block_on_plane():
    # doubled pairs 2(-2 +/- sqrt(1-gamma^2)) at gamma = 0.6
    m = sigma_plus_matrix(ModelParams(0.6, 0.123, 8.0))
    expected = [0, -8, -4, -4, -2.4, -2.4, -5.6, -5.6]
    assert greedy_match(linalg.eigen(m).eigenvalues, expected) < 1e-7


def test_eigen_triangular_equals_diagonal():
    for _ in range(20):
        T = np.triu(RNG.normal(size=(8, 8)) + 1j * RNG.normal(size=(8, 8)))
        dec = linalg.eigen(T)
        assert greedy_match(dec.eigenvalues, np.diag(T)) < 1e-10


def test_eigen_trace_identity_random():
    for _ in range(1000):
        A = RNG.uniform(-1, 1, (8, 8)) + 1j * RNG.uniform(-1, 1, (8, 8))
        s = linalg.eigen(A).eigenvalues.sum()
        scale = max(1.0, np.abs(A).max())
        assert abs(s - np.trace(A)) <= 1e-9 * scale


def test_eigen_vector_residuals():
    for _ in range(40):
        n = int(RNG.integers(2, 17))
        A = RNG.normal(size=(n, n)) + 1j * RNG.normal(size=(n, n))
        dec = linalg.eigen(A, want_vectors=True)
        for k in range(n):
            v = dec.eigenvectors[:, k]
            res = np.linalg.norm(A @ v - dec.eigenvalues[k] * v) / np.linalg.norm(v)
            assert res <= 1e-9


def test_eigen_rejects_non_square():
    with pytest.raises(ValueError):
        linalg.eigen(np.zeros((2, 3)))


def test_eigen_sweep_cap_raises():
    A = RNG.normal(size=(6, 6)) + 1j * RNG.normal(size=(6, 6))
    with pytest.raises(linalg.NonConvergence):
        linalg.eigen(A, max_sweep_mult=0)


# -- expm --------------------------------------------------------------------

def test_expm_zero_is_identity():
    assert np.allclose(linalg.expm(np.zeros((4, 4))), np.eye(4), atol=1e-15)


def test_expm_diagonal():
    out = linalg.expm(np.diag([1.5 + 0.5j, -2.0]))
    assert np.allclose(np.diag(out), np.exp([1.5 + 0.5j, -2.0]), rtol=1e-12)
    assert abs(out[0, 1]) == 0 and abs(out[1, 0]) == 0


def test_expm_rotation_closed_form():
    for theta in (0.1, 1.0, 2.5):
        sy = np.array([[0, -1j], [1j, 0]])
        out = linalg.expm(1j * theta * sy)
        expected = np.array([[np.cos(theta), np.sin(theta)],
                             [-np.sin(theta), np.cos(theta)]])
        assert np.abs(out - expected).max() < 1e-12


def test_expm_semigroup():
    for _ in range(15):
        n = int(RNG.integers(2, 9))
        A = RNG.normal(size=(n, n)) + 1j * RNG.normal(size=(n, n))
        A *= 10.0 / max(1, np.linalg.norm(A))
        s, t = RNG.uniform(0, 1, 2)
        lhs = linalg.expm(A * (s + t))
        rhs = linalg.expm(A * s) @ linalg.expm(A * t)
        assert np.abs(lhs - rhs).max() <= 1e-8


def test_expm_large_norm_scaled():
    # normal matrix with a known exponential: A = Q D Q^H, norm 100
    d = np.array([100.0, -100.0, 40.0 + 30.0j, -12.0j, 0.3, -7.0])
    G = RNG.normal(size=(6, 6)) + 1j * RNG.normal(size=(6, 6))
    Q, _ = np.linalg.qr(G)
    A = Q @ np.diag(d) @ Q.conj().T
    expected = Q @ np.diag(np.exp(d)) @ Q.conj().T
    out = linalg.expm(A)
    rel = np.abs(out - expected).max() / np.abs(expected).max()
    assert rel < 1e-10


# -- singular values / rank --------------------------------------------------

def test_rank_identity_and_zero():
    assert linalg.numeric_rank(np.eye(4)) == 4
    assert linalg.numeric_rank(np.zeros((4, 4))) == 0


def test_rank_products():
    for r in (1, 3, 5):
        A = RNG.normal(size=(8, r)) @ RNG.normal(size=(r, 8))
        assert linalg.numeric_rank(A, tol=1e-10) == r


def test_rank_deficiency_at_defective_eigenvalue():
    # algebraic multiplicity 2 but a single Jordan chain on the plane
    g = 0.5
    m = sigma_plus_matrix(ModelParams(g, 0.3, 8.0))
    alpha_plus = -4.0 + 2.0 * np.sqrt(1 - g * g)
    assert linalg.numeric_rank(m - alpha_plus * np.eye(8), tol=1e-8) == 7


def test_singular_values_match_eigenvalues_for_hermitian():
    A = RNG.normal(size=(6, 6)) + 1j * RNG.normal(size=(6, 6))
    H = A + A.conj().T
    sv = linalg.singular_values(H)
    ev = np.sort(np.abs(linalg.eigen(H).eigenvalues.real))[::-1]
    assert np.abs(sv - ev).max() < 1e-9 * max(1, ev[0])


# -- solve -------------------------------------------------------------------

def test_solve_roundtrip():
    A = RNG.normal(size=(7, 7)) + 1j * RNG.normal(size=(7, 7))
    b = RNG.normal(size=7) + 1j * RNG.normal(size=7)
    x = linalg.solve(A, b)
    assert np.abs(A @ x - b).max() < 1e-10


# -- real_roots --------------------------------------------------------------

def test_real_roots_simple_quadratic():
    roots = linalg.real_roots([-4.0, 0.0, 1.0], 0.0, 10.0)
    assert len(roots) == 1
    r, mult = roots[0]
    assert abs(r - 2.0) < 1e-12 and mult == 1


def test_real_roots_multiplicity():
    coeffs = npoly.polyfromroots([1.0, 1.0, -3.0])
    roots = linalg.real_roots(coeffs, -10.0, 10.0)
    assert [(round(r, 6), m) for r, m in roots] == [(-3.0, 1), (1.0, 2)]


def test_real_roots_reconstruction_random():
    worst = 0.0
    n_done = 0
    while n_done < 500:
        deg = int(RNG.integers(2, 9))
        roots = np.sort(RNG.uniform(-3, 3, deg))
        if np.min(np.diff(roots)) <= 1e-3:
            continue
        n_done += 1
        lead = RNG.choice([-2.0, 0.5, 1.0, 3.0])
        coeffs = npoly.polyfromroots(roots) * lead
        found = linalg.real_roots(coeffs, -10, 10)
        assert len(found) == deg
        worst = max(worst, np.abs(np.array([r for r, _ in found]) - roots).max())
    assert worst <= 1e-8


def test_real_roots_degenerate_all_zero():
    with pytest.raises(linalg.DegenerateAllZero):
        linalg.real_roots([0.0, 0.0, 0.0])


def test_real_roots_degree_drop_trim():
    # leading coefficient far below trim tolerance is discarded
    roots = linalg.real_roots([-1.0, 0.0, 1.0, 1e-30], -10, 10)
    assert sorted(round(r, 9) for r, _ in roots) == [-1.0, 1.0]
