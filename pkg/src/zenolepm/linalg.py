"""Self-contained dense complex linear algebra for small matrices.

Everything numerical in this module is implemented in-repo (Hessenberg +
shifted-QR eigensolver, one-sided Jacobi singular values, Pade matrix
exponential, companion-matrix polynomial roots).  The heavy kernels are
numba-compiled for throughput on large parameter scans; numpy is used only
for array storage and elementwise arithmetic.  The point of carrying our
own eigensolver is that it serves as a numerical oracle that is fully
independent of any closed-form spectrum it is checked against.

Matrices are plain ``numpy.ndarray`` of complex128, row-major.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba as nb
import numpy as np

_EPS = float(np.finfo(np.float64).eps)


class NonConvergence(Exception):
    """QR iteration hit its sweep cap (pathological input)."""


class DegenerateAllZero(Exception):
    """Every polynomial coefficient is below the trim tolerance."""


@dataclass
class EigenDecomposition:
    """Eigenvalues (and optionally eigenvectors as columns) of a matrix."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None
    converged: np.ndarray


# ---------------------------------------------------------------------------
# compiled kernels
# ---------------------------------------------------------------------------


@nb.njit(cache=True)
def _balance(A):
    """Parlett-Reinsch diagonal balancing with powers of 2.

    Returns the scaling vector d; A is modified in place (A <- D^-1 A D).
    """
    n = A.shape[0]
    d = np.ones(n)
    for _ in range(32):
        changed = False
        for i in range(n):
            c = 0.0
            r = 0.0
            for j in range(n):
                if j != i:
                    c += abs(A[j, i])
                    r += abs(A[i, j])
            if c == 0.0 or r == 0.0:
                continue
            f = 1.0
            s = c + r
            while c < r / 2.0:
                c *= 2.0
                r /= 2.0
                f *= 2.0
            while c >= r * 2.0:
                c /= 2.0
                r *= 2.0
                f /= 2.0
            if c + r < 0.95 * s:
                changed = True
                d[i] *= f
                for j in range(n):
                    A[i, j] /= f
                    A[j, i] *= f
        if not changed:
            break
    return d


@nb.njit(cache=True)
def _hessenberg(H, Z, want_z):
    """Householder reduction to upper Hessenberg form, in place.

    If want_z, Z accumulates the unitary similarity (H = Z^H A Z).
    """
    n = H.shape[0]
    for k in range(n - 2):
        nx = 0.0
        for i in range(k + 1, n):
            nx += abs(H[i, k]) ** 2
        nx = np.sqrt(nx)
        if nx < 1e-300:
            continue
        v = np.zeros(n, np.complex128)
        for i in range(k + 1, n):
            v[i] = H[i, k]
        a = v[k + 1]
        phase = a / abs(a) if abs(a) > 0.0 else 1.0 + 0j
        v[k + 1] += phase * nx
        nv = 0.0
        for i in range(k + 1, n):
            nv += abs(v[i]) ** 2
        nv = np.sqrt(nv)
        for i in range(k + 1, n):
            v[i] /= nv
        # H <- (I - 2 v v^H) H
        for j in range(n):
            s = 0.0 + 0j
            for i in range(k + 1, n):
                s += np.conj(v[i]) * H[i, j]
            for i in range(k + 1, n):
                H[i, j] -= 2.0 * v[i] * s
        # H <- H (I - 2 v v^H)
        for i in range(n):
            s = 0.0 + 0j
            for j in range(k + 1, n):
                s += H[i, j] * v[j]
            for j in range(k + 1, n):
                H[i, j] -= 2.0 * s * np.conj(v[j])
        if want_z:
            for i in range(n):
                s = 0.0 + 0j
                for j in range(k + 1, n):
                    s += Z[i, j] * v[j]
                for j in range(k + 1, n):
                    Z[i, j] -= 2.0 * s * np.conj(v[j])


@nb.njit(cache=True)
def _givens(x, y):
    """Complex Givens pair (c real, s complex) with c*x + s*y = r >= 0 * phase(x)."""
    ax = abs(x)
    ay = abs(y)
    if ay == 0.0:
        return 1.0, 0.0 + 0j
    if ax == 0.0:
        return 0.0, np.conj(y) / ay
    r = np.hypot(ax, ay)
    c = ax / r
    s = (x / ax) * np.conj(y) / r
    return c, s


@nb.njit(cache=True)
def _qr_schur(H, Z, want_z, max_sweeps):
    """Shifted QR on a Hessenberg matrix; H becomes upper triangular.

    Single Wilkinson shift (complex arithmetic makes double shifts
    unnecessary), deflation on negligible subdiagonals, occasional
    exceptional shift to break stagnation.  Returns True on convergence
    within max_sweeps.
    """
    n = H.shape[0]
    hi = n - 1
    sweeps = 0
    stall = 0
    # overall scale for the zero-diagonal corner case of the deflation test
    hnorm = 0.0
    for i in range(n):
        for j in range(n):
            hnorm += abs(H[i, j])
    hnorm = hnorm / (n * n) + 1e-300
    while hi > 0:
        # deflate converged eigenvalues at the bottom
        deflated = True
        while deflated and hi > 0:
            s = abs(H[hi - 1, hi - 1]) + abs(H[hi, hi])
            if s == 0.0:
                s = hnorm
            if abs(H[hi, hi - 1]) <= _EPS * s:
                H[hi, hi - 1] = 0.0
                hi -= 1
                stall = 0
            else:
                deflated = False
        if hi <= 0:
            break
        # active block [lo, hi]
        lo = hi
        while lo > 0:
            s = abs(H[lo - 1, lo - 1]) + abs(H[lo, lo])
            if s == 0.0:
                s = hnorm
            if abs(H[lo, lo - 1]) <= _EPS * s:
                H[lo, lo - 1] = 0.0
                break
            lo -= 1
        if sweeps >= max_sweeps:
            return False
        sweeps += 1
        stall += 1
        if stall % 12 == 0:
            mu = H[hi, hi] + 0.75 * abs(H[hi, hi - 1])
        else:
            # Wilkinson: eigenvalue of the trailing 2x2 closest to H[hi, hi]
            a = H[hi - 1, hi - 1]
            b = H[hi - 1, hi]
            c = H[hi, hi - 1]
            dd = H[hi, hi]
            tr = a + dd
            disc = np.sqrt(tr * tr - 4.0 * (a * dd - b * c))
            r1 = (tr + disc) / 2.0
            r2 = (tr - disc) / 2.0
            mu = r1 if abs(r1 - dd) < abs(r2 - dd) else r2
        # explicit shifted QR: H - mu I = QR, then H <- RQ + mu I
        cs = np.empty(hi - lo, np.float64)
        sn = np.empty(hi - lo, np.complex128)
        for i in range(lo, hi + 1):
            H[i, i] -= mu
        jmax = n if want_z else hi + 1
        for k in range(lo, hi):
            c, s = _givens(H[k, k], H[k + 1, k])
            cs[k - lo] = c
            sn[k - lo] = s
            for j in range(k, jmax):
                t1 = H[k, j]
                t2 = H[k + 1, j]
                H[k, j] = c * t1 + s * t2
                H[k + 1, j] = -np.conj(s) * t1 + c * t2
        for k in range(lo, hi):
            c = cs[k - lo]
            s = sn[k - lo]
            imin = 0 if want_z else lo
            imax = min(k + 2, hi) + 1
            for i in range(imin, imax):
                t1 = H[i, k]
                t2 = H[i, k + 1]
                H[i, k] = c * t1 + np.conj(s) * t2
                H[i, k + 1] = -s * t1 + c * t2
            if want_z:
                for i in range(n):
                    t1 = Z[i, k]
                    t2 = Z[i, k + 1]
                    Z[i, k] = c * t1 + np.conj(s) * t2
                    Z[i, k + 1] = -s * t1 + c * t2
        for i in range(lo, hi + 1):
            H[i, i] += mu
    return True


@nb.njit(cache=True)
def _triangular_vectors(T):
    """Right eigenvectors of an upper-triangular matrix by back-substitution.

    Small pivots are regularized (LAPACK-style) so a vector is returned
    even at multiple eigenvalues; residuals stay at roundoff level.
    """
    n = T.shape[0]
    V = np.zeros((n, n), np.complex128)
    tnorm = 0.0
    for i in range(n):
        for j in range(i, n):
            tnorm = max(tnorm, abs(T[i, j]))
    smin = _EPS * (tnorm + 1e-300)
    for j in range(n):
        lam = T[j, j]
        V[j, j] = 1.0
        for i in range(j - 1, -1, -1):
            s = 0.0 + 0j
            for k in range(i + 1, j + 1):
                s += T[i, k] * V[k, j]
            piv = T[i, i] - lam
            if abs(piv) < smin:
                piv = smin + 0j
            V[i, j] = -s / piv
        nv = 0.0
        for i in range(j + 1):
            nv += abs(V[i, j]) ** 2
        nv = np.sqrt(nv)
        for i in range(j + 1):
            V[i, j] /= nv
    return V


@nb.njit(cache=True)
def _jacobi_singular_values(A):
    """Singular values via one-sided Jacobi rotations on the columns."""
    m, n = A.shape
    U = A.copy()
    for _ in range(60):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                app = 0.0
                aqq = 0.0
                apq = 0.0 + 0j
                for i in range(m):
                    app += abs(U[i, p]) ** 2
                    aqq += abs(U[i, q]) ** 2
                    apq += np.conj(U[i, p]) * U[i, q]
                g = abs(apq)
                if g <= 1e2 * _EPS * np.sqrt(app * aqq) or g == 0.0:
                    continue
                off = max(off, g / (np.sqrt(app * aqq) + 1e-300))
                phase = apq / g
                tau = (aqq - app) / (2.0 * g)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                for i in range(m):
                    up = U[i, p]
                    uq = U[i, q]
                    U[i, p] = c * up - s * np.conj(phase) * uq
                    U[i, q] = s * phase * up + c * uq
        if off < 10.0 * _EPS:
            break
    sv = np.empty(n)
    for j in range(n):
        acc = 0.0
        for i in range(m):
            acc += abs(U[i, j]) ** 2
        sv[j] = np.sqrt(acc)
    return np.sort(sv)[::-1]


@nb.njit(cache=True)
def _lu_solve(A, B):
    """Solve A X = B by LU with partial pivoting, in place on copies."""
    n = A.shape[0]
    m = B.shape[1]
    M = A.copy()
    X = B.copy()
    for k in range(n):
        piv = k
        big = abs(M[k, k])
        for i in range(k + 1, n):
            if abs(M[i, k]) > big:
                big = abs(M[i, k])
                piv = i
        if piv != k:
            for j in range(n):
                M[k, j], M[piv, j] = M[piv, j], M[k, j]
            for j in range(m):
                X[k, j], X[piv, j] = X[piv, j], X[k, j]
        for i in range(k + 1, n):
            f = M[i, k] / M[k, k]
            M[i, k] = f
            for j in range(k + 1, n):
                M[i, j] -= f * M[k, j]
            for j in range(m):
                X[i, j] -= f * X[k, j]
    for k in range(n - 1, -1, -1):
        for j in range(m):
            for i in range(k + 1, n):
                X[k, j] -= M[k, i] * X[i, j]
            X[k, j] /= M[k, k]
    return X


# Pade-13 coefficients (Higham's scaling-and-squaring)
_PADE13 = np.array([
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0, 129060195264000.0, 10559470521600.0,
    670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
    960960.0, 16380.0, 182.0, 1.0,
])


@nb.njit(cache=True)
def _expm_kernel(A):
    n = A.shape[0]
    norm1 = 0.0
    for j in range(n):
        s = 0.0
        for i in range(n):
            s += abs(A[i, j])
        norm1 = max(norm1, s)
    theta13 = 5.371920351148152
    sq = 0
    M = A.copy()
    if norm1 > theta13:
        sq = int(np.ceil(np.log2(norm1 / theta13)))
        M = M / (2.0 ** sq)
    I = np.eye(n, dtype=np.complex128)
    b = _PADE13
    A2 = M @ M
    A4 = A2 @ A2
    A6 = A2 @ A4
    U = M @ (A6 @ (b[13] * A6 + b[11] * A4 + b[9] * A2)
             + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I)
    V = (A6 @ (b[12] * A6 + b[10] * A4 + b[8] * A2)
         + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I)
    R = _lu_solve(V - U, V + U)
    for _ in range(sq):
        R = R @ R
    return R


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------


def kron(a, b):
    """Kronecker product (thin alias so callers stay inside this module)."""
    return np.kron(np.asarray(a, complex), np.asarray(b, complex))


def eigen(m, want_vectors=False, max_sweep_mult=100):
    """Eigendecomposition of a dense complex matrix.

    Balancing + Householder Hessenberg + shifted-QR iteration; eigenvectors
    (if requested) come from back-substitution on the Schur factor.

    Raises NonConvergence if the QR iteration exceeds ``max_sweep_mult * n``
    sweeps, which signals pathological input.
    """
    A = np.array(m, dtype=complex)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("eigen expects a square matrix")
    if n > 64:
        raise ValueError("eigen supports dimensions up to 64")
    if n == 0:
        return EigenDecomposition(np.empty(0, complex), None, np.empty(0, bool))
    if n == 1:
        vecs = np.ones((1, 1), complex) if want_vectors else None
        return EigenDecomposition(A[0, :1].copy(), vecs, np.ones(1, bool))
    d = _balance(A)
    Z = np.eye(n, dtype=complex)
    _hessenberg(A, Z, want_vectors)
    ok = _qr_schur(A, Z, want_vectors, max_sweep_mult * n)
    if not ok:
        raise NonConvergence("QR iteration did not converge")
    eigs = np.diag(A).copy()
    vecs = None
    if want_vectors:
        Y = Z @ _triangular_vectors(A)
        Y = d[:, None] * Y
        Y /= np.linalg.norm(Y, axis=0, keepdims=True)
        vecs = Y
    return EigenDecomposition(eigs, vecs, np.ones(n, bool))


def eigvals(m):
    """Eigenvalues only (convenience wrapper around ``eigen``)."""
    return eigen(m, want_vectors=False).eigenvalues


def expm(m):
    """Matrix exponential by scaling-and-squaring with a Pade-13 approximant."""
    A = np.array(m, dtype=complex)
    if A.shape[0] != A.shape[1]:
        raise ValueError("expm expects a square matrix")
    return _expm_kernel(A)


def singular_values(m):
    """Singular values (descending) via one-sided Jacobi rotations."""
    A = np.array(m, dtype=complex)
    if A.size == 0:
        return np.empty(0)
    if A.shape[0] < A.shape[1]:
        A = A.conj().T.copy()
    return _jacobi_singular_values(A)


def numeric_rank(m, tol=1e-10):
    """Number of singular values above tol * (largest singular value)."""
    sv = singular_values(m)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > tol * sv[0]))


def solve(a, b):
    """Solve a x = b (LU with partial pivoting, in-repo)."""
    A = np.array(a, dtype=complex)
    B = np.array(b, dtype=complex)
    one_d = B.ndim == 1
    if one_d:
        B = B[:, None]
    X = _lu_solve(A, B)
    return X[:, 0] if one_d else X


# -- polynomials ------------------------------------------------------------

TRIM_REL_TOL = 1e-12  # leading-coefficient trim, relative to max |coeff|


def trim_polynomial(coeffs, trim_rel_tol=TRIM_REL_TOL):
    """Drop leading coefficients at or below trim_rel_tol * max|coeff|.

    Callers whose leading coefficients are exact products (never noise)
    pass trim_rel_tol=0 so only exact zeros drop the degree.
    """
    c = np.asarray(coeffs, dtype=float)
    if c.size == 0:
        raise DegenerateAllZero("empty coefficient list")
    scale = np.max(np.abs(c))
    if scale == 0.0 or not np.isfinite(scale):
        raise DegenerateAllZero("all coefficients are zero")
    deg = c.size - 1
    while deg > 0 and abs(c[deg]) <= trim_rel_tol * scale:
        deg -= 1
    if deg == 0 and abs(c[0]) <= trim_rel_tol * scale:
        raise DegenerateAllZero("all coefficients below trim tolerance")
    return c[: deg + 1]


def polyval(coeffs, z):
    """Horner evaluation, ascending coefficients."""
    acc = 0.0
    for c in coeffs[::-1]:
        acc = acc * z + c
    return acc


def _polyder(coeffs):
    return np.array([i * c for i, c in enumerate(coeffs)][1:], dtype=float)


def poly_scale(coeffs, z):
    """Magnitude scale Sum |c_i| max(1,|z|)^i used for residual acceptance."""
    az = max(1.0, abs(z))
    acc = 0.0
    for c in coeffs[::-1]:
        acc = acc * az + abs(c)
    return acc


def _companion_roots(monic):
    """All complex roots of a monic polynomial via its companion matrix."""
    deg = monic.size - 1
    C = np.zeros((deg, deg), dtype=complex)
    for i in range(1, deg):
        C[i, i - 1] = 1.0
    C[:, -1] = -monic[:deg]
    return eigen(C).eigenvalues


def real_roots(coeffs, domain_min=-np.inf, domain_max=np.inf, tol=1e-8,
               cluster_radius=1e-6, trim_rel_tol=TRIM_REL_TOL):
    """Real roots (with multiplicities) of a real-coefficient polynomial.

    Companion-matrix eigenvalues of the trimmed, monic polynomial, Newton
    polishing on the real axis, then clustering within ``cluster_radius``
    (scaled by max(1, |z|) so wide-ranging roots cluster sensibly).  A root
    is accepted only if |p(z)| <= tol * poly_scale(p, z).

    Returns a list of (root, multiplicity), ascending in root.
    Raises DegenerateAllZero when every coefficient is below trim tolerance.
    """
    c = trim_polynomial(coeffs, trim_rel_tol)
    deg = c.size - 1
    if deg == 0:
        return []
    if deg > 16:
        raise ValueError("real_roots supports degree <= 16 after trimming")
    monic = c / c[-1]
    dc = _polyder(c)
    candidates = []
    for z in _companion_roots(monic):
        # complex Newton first: double roots split into conjugate pairs at
        # the sqrt(eps) level and polish back onto the real axis
        for _ in range(60):
            p = polyval(c, z)
            dp = polyval(dc, z)
            if dp == 0.0:
                break
            step = p / dp
            limit = 0.1 * max(1.0, abs(z))
            if abs(step) > limit:
                step *= limit / abs(step)
            z -= step
            if abs(step) <= 4 * _EPS * max(1.0, abs(z)):
                break
        if abs(z.imag) > cluster_radius * max(1.0, abs(z)):
            continue
        candidates.append(float(z.real))
    candidates.sort()
    out = []
    for x in candidates:
        if out and abs(x - out[-1][0]) <= cluster_radius * max(1.0, abs(x)):
            r, k = out[-1]
            out[-1] = ((r * k + x) / (k + 1), k + 1)
        else:
            out.append((x, 1))
    accepted = []
    for r, k in out:
        if r < domain_min or r > domain_max:
            continue
        if abs(polyval(c, r)) <= tol * poly_scale(c, r):
            accepted.append((r, k))
    return accepted
