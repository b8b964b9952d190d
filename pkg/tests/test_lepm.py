from fractions import Fraction

import numpy as np
import pytest

from zenolepm import linalg
from zenolepm.lepm import (PLANE_8, PLANE_8GAMMA, SIGMA_MINUS, boundary_curve,
                           gamma_cr, lep_poly_coeffs, lep_poly_in_y,
                           lep_roots_minus, manifold_scan)
from zenolepm.model import ModelParams
from quartic_oracle import sweep_coalescences

RNG = np.random.default_rng(2024)


# -- coefficient evaluation ------------------------------------------------------

def test_leading_and_constant_structure():
    poly = lep_poly_coeffs(1.0, 1.0)
    assert poly.coeffs[8] == 1.0
    assert poly.coeffs[0] == 0.0
    poly = lep_poly_coeffs(0.0, 0.7)
    assert poly.coeffs[8] == 0.0


def _exact_coeffs(X, Y):
    """Exact-rational evaluation of the coefficient expressions."""
    a = [Fraction(0)] * 9
    a[0] = 2**32 * (X - 1)**4 * X * Y**2 * (X**2 + (1 - 4*Y)**2 - 2*X*(1 + 4*Y))**2
    a[1] = (-2**27*(X-1)**8*X*Y + 2**31*(X-1)**6*X*(X+1)*Y**2
            + 2**31*X*(X-1)**4*(1+30*X+X**2)*Y**3
            - 2**35*(X-1)**2*X*(X+1)*(3+2*X+3*X**2)*Y**4
            + 2**36*(X-1)**2*X*(5+6*X+5*X**2)*Y**5
            - 2**38*X*(X-1)**2*(X+1)*Y**6)
    a[2] = (2**20*(X-1)**8*X + 2**20*(X-1)**6*(1+X)*(1-34*X+X**2)*Y
            - 2**23*(X-1)**4*(1+24*X+238*X**2+24*X**3+X**4)*Y**2
            + 2**24*(X-1)**2*(1+X)*(1+44*X-602*X**2+44*X**3+X**4)*Y**3
            + 2**29*X*(27+36*X+2*X**2+36*X**3+27*X**4)*Y**4
            - 2**33*X*(1+X)*(5-2*X+5*X**2)*Y**5
            + 2**33*X*(3+2*X+3*X**2)*Y**6)
    a[3] = (-2**14*(X-1)**6*(1+X)*(1-18*X+X**2)
            + 2**18*(X-1)**4*(1+4*X+54*X**2+4*X**3+X**4)*Y
            + 2**21*(1+X)*(X-1)**2*(1+10*X+42*X**2+10*X**3+X**4)*Y**2
            - 2**20*(3+22*X-883*X**2-332*X**3-883*X**4+22*X**5+3*X**6)*Y**3
            - 2**26*X*(1+X)*(21+22*X+21*X**2)*Y**4
            + 2**29*X*(5+6*X+5*X**2)*Y**5 - 2**30*X*(1+X)*Y**6)
    a[4] = (-256*(X-1)**4*(15-60*X-166*X**2-60*X**3+15*X**4)
            - 2**15*(X-1)**2*(1+X)*(1+4*X-42*X**2+4*X**3+X**4)*Y
            - 2**16*(3+42*X-3*X**2-340*X**3-3*X**4+42*X**5+3*X**6)*Y**2
            + 2**16*(1+X)*(3-156*X-974*X**2-156*X**3+3*X**4)*Y**3
            + 2**21*X*(39+74*X+39*X**2)*Y**4 - 2**24*5*X*(1+X)*Y**5
            + 2**24*X*Y**6)
    a[5] = (-64*(3+X-21*X**2+17*X**3+17*X**4-21*X**5+X**6+3*X**7)
            - 256*(X-1)**2*(1+68*X+246*X**2+68*X**3+X**4)*Y
            + 2**13*(1+X)*(1-6*X+X**2)*(1+14*X+X**2)*Y**2
            - 2**12*(1-236*X-682*X**2-236*X**3+X**4)*Y**3
            - 2**18*9*X*(1+X)*Y**4 + 2**20*X*Y**5)
    a[6] = (4*(1-2*X-X**2+4*X**3-X**4-2*X**5+X**6)
            + 16*(X-1)**2*(1+X)*(5+38*X+5*X**2)*Y
            - 2**7*(1-28*X-138*X**2-28*X**3+X**4)*Y**2
            - 7*2**12*X*(1+X)*Y**3 + 3*2**13*X*Y**4)
    a[7] = -(1+4*X-10*X**2+4*X**3+X**4)*Y - 2**7*X*(1+X)*Y**2 + 2**8*X*Y**3
    a[8] = X*Y**2
    return a


def test_coefficients_against_rational_oracle():
    X, Y = Fraction(1, 4), Fraction(1, 4)
    exact = _exact_coeffs(X, Y)
    got = lep_poly_coeffs(0.25, 0.25).coeffs
    for k in range(9):
        ref = float(exact[k])
        assert got[k] == pytest.approx(ref, rel=1e-13, abs=1e-9), k


def test_coefficients_rational_oracle_random_points():
    for _ in range(5):
        xn, yn = int(RNG.integers(1, 40)), int(RNG.integers(1, 30))
        X, Y = Fraction(xn, 20), Fraction(yn, 20)
        exact = _exact_coeffs(X, Y)
        got = lep_poly_coeffs(float(X), float(Y)).coeffs
        scale = max(abs(float(c)) for c in exact)
        for k in range(9):
            assert abs(got[k] - float(exact[k])) <= 1e-12 * scale


def test_y_reorganization_consistent():
    X, Z = 0.49, 7.3
    direct = sum(c * Z**i for i, c in enumerate(lep_poly_coeffs(X, 0.33).coeffs))
    via_y = linalg.polyval(lep_poly_in_y(X, Z), 0.33)
    assert direct == pytest.approx(via_y, rel=1e-10)


# -- roots of the branching polynomial --------------------------------------------

def test_isotropic_line_contains_plane_root():
    ls = lep_roots_minus(1.0, 0.7)
    assert any(abs(r.big_gamma - 8.0) < 1e-5 for r in ls.minus_leps)


def test_point_b_roots_and_witnesses():
    # ground truth validated against exact rational root isolation and a
    # dense eigenvalue-gap sweep of the odd block
    ls = lep_roots_minus(0.6, 0.4)
    expected = [1.440570, 1.653823, 3.503949, 7.454969]
    got = [r.big_gamma for r in ls.minus_leps]
    assert len(got) == len(expected)
    assert np.abs(np.array(got) - expected).max() < 1e-4
    assert all(r.witness_ok for r in ls.minus_leps)
    assert all(r.witness_gap <= 1e-3 for r in ls.minus_leps)
    assert ls.plus_leps == (8.0, 4.8)


def test_point_a_largest_root_exceeds_plane():
    ls = lep_roots_minus(0.3, 0.4)
    assert max(r.big_gamma for r in ls.minus_leps) > 8.0


def test_roots_require_positive_parameters():
    with pytest.raises(ValueError):
        lep_roots_minus(0.0, 0.4)
    with pytest.raises(ValueError):
        lep_roots_minus(0.4, -0.1)


def test_root_residuals_scale_relative():
    for g, d in ((0.6, 0.4), (1.6, 0.4), (0.5, 0.001)):
        ls = lep_roots_minus(g, d)
        for r in ls.minus_leps:
            assert r.residual <= 1e-8


# -- critical dissipation ----------------------------------------------------------

def test_phase_points():
    pp = gamma_cr(0.6, 0.4)
    assert pp.gamma_cr == pytest.approx(8.0, abs=1e-9)
    assert pp.region == PLANE_8
    pp = gamma_cr(1.2, 0.4)
    assert pp.gamma_cr == pytest.approx(9.6, abs=1e-9)
    assert pp.region == PLANE_8GAMMA
    for g in (0.3, 1.6):
        pp = gamma_cr(g, 0.4)
        assert pp.region == SIGMA_MINUS
        assert pp.gamma_cr > max(8.0, 8.0 * g)


def test_small_z_anisotropy_divergence():
    g, d = 0.5, 1e-3
    pp = gamma_cr(g, d)
    predicted = max(abs(2 * (g * g - 1) / d), abs((g ** 3 - 1 / g) / d))
    assert pp.gamma_cr == pytest.approx(predicted, rel=1e-2)


def test_gamma_cr_continuous_across_boundary():
    curve = boundary_curve("LEFT", [0.6])
    d2 = curve.samples[0].delta_upper
    above = gamma_cr(0.6, d2 + 1e-3).gamma_cr
    below = gamma_cr(0.6, d2 - 1e-3).gamma_cr
    assert abs(above - below) <= 1e-2
    assert gamma_cr(0.6, d2 + 0.01).region == PLANE_8
    assert gamma_cr(0.6, d2 - 0.01).region == SIGMA_MINUS


def test_gamma_cr_monotone_in_small_z_anisotropy():
    g = 0.5
    deltas = np.geomspace(1e-3, 0.27, 10)
    values = [gamma_cr(g, d).gamma_cr for d in deltas]
    assert all(a >= b - 1e-9 for a, b in zip(values, values[1:]))


def test_even_block_doubly_degenerate_on_plane():
    from zenolepm.spectra import sigma_plus_spectrum
    for g in (0.2, 0.5, 0.9):
        vals = sigma_plus_spectrum(ModelParams(g, 0.3, 8.0))
        gaps = np.abs(vals[:, None] - vals[None, :])
        gaps[np.eye(8, dtype=bool)] = np.inf
        assert gaps.min() < 1e-12


# -- boundary curves -----------------------------------------------------------------

def test_boundary_left_brackets_phase_regions():
    curve = boundary_curve("LEFT", [0.3, 0.6, 0.8])
    assert not curve.gaps
    for s in curve.samples:
        assert s.delta_upper > s.delta_lower > 0
        assert gamma_cr(s.gamma, s.delta_upper + 0.01).region == PLANE_8
        assert gamma_cr(s.gamma, s.delta_upper - 0.01).region == SIGMA_MINUS


def test_boundary_point_b_sits_above_curve():
    curve = boundary_curve("LEFT", [0.6])
    assert curve.samples[0].delta_upper < 0.4


def test_boundary_continuity_near_meeting_point():
    # the two solution branches annihilate in a narrow window around the
    # meeting point of the planes; compare the closest existing samples
    left = boundary_curve("LEFT", [0.98])
    right = boundary_curve("RIGHT", [1.02])
    assert left.samples and right.samples
    assert abs(left.samples[0].delta_upper - right.samples[0].delta_upper) < 0.05


def test_boundary_records_gaps():
    left = boundary_curve("LEFT", [0.999])
    assert left.gaps == [0.999]
    right = boundary_curve("RIGHT", [1.001])
    assert 1.001 in right.gaps or right.samples


def test_boundary_rejects_bad_side_or_sample():
    with pytest.raises(ValueError):
        boundary_curve("MIDDLE", [0.5])
    with pytest.raises(ValueError):
        boundary_curve("LEFT", [1.2])


# -- manifold scan -------------------------------------------------------------------

def test_manifold_scan_orders_and_branch_counts():
    gammas = np.linspace(0.2, 1.8, 7)
    deltas = np.linspace(0.1, 1.2, 5)
    records = manifold_scan(gammas, deltas)
    assert len(records) == 35
    k = 0
    for g in gammas:
        for d in deltas:
            rg, rd, rec = records[k]
            assert (rg, rd) == (float(g), float(d))
            assert not isinstance(rec, str)
            assert 1 <= rec.branch_count <= 6
            k += 1


def test_manifold_scan_parallel_matches_serial():
    gammas = np.linspace(0.3, 1.5, 4)
    deltas = np.linspace(0.1, 0.9, 3)
    serial = manifold_scan(gammas, deltas, workers=1)
    parallel = manifold_scan(gammas, deltas, workers=2)
    assert len(serial) == len(parallel)
    for (g1, d1, r1), (g2, d2, r2) in zip(serial, parallel):
        assert (g1, d1) == (g2, d2)
        assert [x.big_gamma for x in r1.minus_leps] == [x.big_gamma for x in r2.minus_leps]


def test_manifold_scan_full_grid_branch_counts():
    records = manifold_scan(np.linspace(0.1, 2.0, 100),
                            np.linspace(0.05, 1.5, 100), workers=2)
    assert len(records) == 10000
    for _, _, rec in records:
        assert not isinstance(rec, str)
        assert 1 <= rec.branch_count <= 6


def test_scan_row_section_topology():
    # branch count along a fixed-delta row changes at finitely many points
    # and matches a denser rescan of the same row
    deltas = [0.8]
    coarse = manifold_scan(np.linspace(0.2, 1.8, 9), deltas)
    counts = [rec.branch_count for _, _, rec in coarse]
    fine = manifold_scan(np.linspace(0.2, 1.8, 33), deltas)
    fine_counts = [rec.branch_count for _, _, rec in fine]
    assert set(counts) <= set(fine_counts)


# -- discriminant against an independent sweep oracle ---------------------------------

def test_discriminant_matches_sweep_oracle():
    # sampling stays clear of the isotropic line X = 1, where the
    # polynomial degenerates to a perfect square and float64 coefficient
    # rounding makes the realness of near-double roots ill-posed (that
    # line is covered by the exact isotropic-line tests above)
    rng = np.random.default_rng(42)
    n_checked = 0
    for _ in range(50):
        X = rng.uniform(0.05, 2.5)
        while abs(X - 1.0) < 0.02:
            X = rng.uniform(0.05, 2.5)
        Y = rng.uniform(0.05, 1.8)
        poly = lep_poly_coeffs(X, Y)
        roots = [z for z, _ in linalg.real_roots(poly.coeffs, 1e-3, 3e4, tol=1e-8,
                                                 trim_rel_tol=0.0)]
        oracle = sweep_coalescences(X, Y)
        assert len(roots) == len(oracle), (X, Y, roots, oracle)
        for z, zo in zip(sorted(roots), oracle):
            assert abs(z - zo) <= 1e-6 * max(1.0, abs(z))
            n_checked += 1
    assert n_checked > 50
