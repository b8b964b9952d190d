"""Branching manifolds and the critical-dissipation phase diagram.

Scans the (gamma, delta) plane, records every positive branching strength
of the parity-odd block, classifies each point by which manifold supplies
the critical dissipation, and traces the region-boundary curves obtained
by pinning the dissipation to the planes.  Writes manifold_scan.csv and
phase_diagram.csv (and PNGs when matplotlib is importable).
"""

import csv

import numpy as np

from zenolepm import boundary_curve, gamma_cr, manifold_scan

GAMMAS = np.linspace(0.1, 2.0, 60)
DELTAS = np.linspace(0.05, 1.5, 60)


def main():
    print(f"scanning {len(GAMMAS)}x{len(DELTAS)} grid ...")
    records = manifold_scan(GAMMAS, DELTAS, workers=2)
    with open("manifold_scan.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["gamma", "delta", "branch", "Gamma", "witness_ok"])
        for g, d, rec in records:
            for k, root in enumerate(rec.minus_leps):
                w.writerow([g, d, k, root.big_gamma, root.witness_ok])
    counts = [rec.branch_count for _, _, rec in records]
    print(f"wrote manifold_scan.csv; sheet count ranges "
          f"{min(counts)}..{max(counts)} over the grid")

    print("classifying the phase diagram ...")
    with open("phase_diagram.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["gamma", "delta", "gamma_cr", "region"])
        phase = []
        for g in GAMMAS:
            for d in DELTAS:
                pp = gamma_cr(float(g), float(d))
                phase.append(pp)
                w.writerow([pp.gamma, pp.delta, pp.gamma_cr, pp.region])
    print("wrote phase_diagram.csv")

    left = boundary_curve("LEFT", np.linspace(0.2, 0.98, 40))
    right = boundary_curve("RIGHT", np.linspace(1.02, 2.0, 40))
    print(f"boundary curves: {len(left.samples)} left samples "
          f"({len(left.gaps)} gaps), {len(right.samples)} right samples "
          f"({len(right.gaps)} gaps)")
    for name, curve in (("left", left), ("right", right)):
        for s in curve.samples[:3]:
            print(f"   {name}: gamma={s.gamma:.3f} boundary delta={s.delta_upper:.4f}")

    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not available, skipping the figures")
        return

    fig = plt.figure(figsize=(7, 6))
    ax = fig.add_subplot(111, projection="3d")
    for g, d, rec in records[:: 2]:
        for root in rec.minus_leps:
            if root.big_gamma < 25:
                ax.scatter(g, d, root.big_gamma, c="tab:blue", s=1)
    ax.set_xlabel("gamma")
    ax.set_ylabel("delta")
    ax.set_zlabel("Gamma")
    fig.savefig("manifold_scan.png", dpi=150)
    print("wrote manifold_scan.png")

    fig2, ax2 = plt.subplots(figsize=(6, 5))
    colors = {"PLANE_8": "lightgray", "PLANE_8GAMMA": "lightgreen",
              "SIGMA_MINUS": "lightblue"}
    for pp in phase:
        ax2.scatter(pp.gamma, pp.delta, c=colors[pp.region], s=12, marker="s")
    for curve, style in ((left, "r-"), (right, "r-")):
        xs = [s.gamma for s in curve.samples]
        ys = [s.delta_upper for s in curve.samples]
        ax2.plot(xs, ys, style, lw=2)
    ax2.axvline(1.0, ls="--", c="k", lw=0.7)
    ax2.set_xlabel("gamma")
    ax2.set_ylabel("delta")
    fig2.tight_layout()
    fig2.savefig("phase_diagram.png", dpi=150)
    print("wrote phase_diagram.png")


if __name__ == "__main__":
    main()
