"""Eigenvalue branches of the two blocks as the dissipation strength sweeps.

Reproduces the branch-and-coalescence picture at the reference point
(gamma, delta) = (0.6, 0.4): the parity-even block branches at Gamma = 8
and Gamma = 8*gamma, the parity-odd block at the positive roots of the
degree-8 branching polynomial.  Writes spectrum_branches.csv and, when
matplotlib is importable, spectrum_branches.png.
"""

import csv

import numpy as np

from zenolepm import lep_roots_minus, sigma_minus_spectrum, sigma_plus_spectrum
from zenolepm.model import ModelParams

GAMMA, DELTA = 0.6, 0.4


def collect_branches(gammas_axis):
    rows = []
    for G in gammas_axis:
        p = ModelParams(GAMMA, DELTA, float(G))
        for tag, vals in (("plus", sigma_plus_spectrum(p)),
                          ("minus", sigma_minus_spectrum(p)[0])):
            for k, lam in enumerate(vals):
                rows.append((float(G), tag, k, lam.real, lam.imag))
    return rows


def main():
    axis = np.geomspace(0.1, 100.0, 1500)
    rows = collect_branches(axis)

    leps = lep_roots_minus(GAMMA, DELTA)
    print(f"reference point (gamma, delta) = ({GAMMA}, {DELTA})")
    print(f"even-block branching strengths: {sorted(leps.plus_leps)}")
    print("odd-block branching strengths (witness flag):")
    for r in leps.minus_leps:
        print(f"   Gamma = {r.big_gamma:.6f}   gap at root {r.witness_gap:.2e} "
              f"witnessed={r.witness_ok}")

    with open("spectrum_branches.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["Gamma", "block", "branch", "re", "im"])
        w.writerows(rows)
    print("wrote spectrum_branches.csv")

    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not available, skipping the figure")
        return

    fig, (ax_re, ax_im) = plt.subplots(2, 1, figsize=(7, 7), sharex=True)
    data = np.array([(g, 0 if tag == "plus" else 1, re, im)
                     for g, tag, _, re, im in rows])
    for blk, color, label in ((0, "tab:red", "even block"),
                              (1, "tab:blue", "odd block")):
        sel = data[data[:, 1] == blk]
        ax_re.plot(sel[:, 0], sel[:, 2] / sel[:, 0], ".", ms=1, color=color,
                   label=label)
        ax_im.plot(sel[:, 0], sel[:, 3], ".", ms=1, color=color)
    for g0 in leps.all_gammas():
        ax_re.axvline(g0, color="gray", lw=0.5)
    ax_re.set_xscale("log")
    ax_re.set_ylabel("Re(lambda) / Gamma")
    ax_im.set_ylabel("Im(lambda)")
    ax_im.set_xlabel("Gamma")
    ax_re.legend(markerscale=10)
    fig.tight_layout()
    fig.savefig("spectrum_branches.png", dpi=150)
    print("wrote spectrum_branches.png")


if __name__ == "__main__":
    main()
