"""Strong-dissipation behavior: stripe eigenvalues, stationary-state
convergence, and the characteristic dissipation strength.

Shows the 1/Gamma stripe approximations pairing with the exact spectrum,
the first-order approach of the stationary state to its pinned limit, and
the population-purity gap converging to the closed-form characteristic
strength.
"""

import numpy as np

from zenolepm import asymptotic_spectrum, gamma_ch, ness_exact, ness_zeno, trace_gap
from zenolepm.dynamics import evolve_effective, zeno_qubit2
from zenolepm.model import ModelParams
from zenolepm.spectra import match_multisets, sigma_minus_spectrum, sigma_plus_spectrum

GAMMA, DELTA = 0.6, 0.4


def main():
    print("stripe pairing error vs dissipation strength:")
    for G in (50.0, 100.0, 200.0, 400.0):
        p = ModelParams(GAMMA, DELTA, G)
        exact = np.concatenate([sigma_plus_spectrum(p),
                                sigma_minus_spectrum(p)[0]])
        stripes = asymptotic_spectrum(p).all_values()
        err = match_multisets(exact, stripes)
        print(f"   Gamma = {G:6.1f}: worst pairing error {err:.3e} "
              f"(x Gamma^2 = {err * G * G:.3f})")

    print("\nstationary state vs its strong-dissipation limit:")
    for G in (1e2, 1e3, 1e4):
        diff = np.linalg.norm(ness_exact(GAMMA, G) - ness_zeno(GAMMA))
        print(f"   Gamma = {G:8.0f}: |difference| = {diff:.3e} "
              f"(x Gamma = {diff * G:.4f})")

    print("\npopulation-purity gap vs the closed characteristic strength:")
    for g in (0.2, 0.6, 1.0, 1.4):
        gap4 = trace_gap(g, 1e4)
        print(f"   gamma = {g}: Gamma^2 * gap = {gap4:.6f}, "
              f"Gamma_ch^2 = {gamma_ch(g) ** 2:.6f}")

    print("\nreduced slow dynamics of the unmonitored qubit (Gamma = 1000):")
    r0 = np.array([[0.2, 0.1], [0.1, 0.8]], dtype=complex)
    ts = np.linspace(0.0, 400.0, 9)
    for s in evolve_effective(GAMMA, DELTA, 1000.0, r0, ts):
        print(f"   t = {s.t:6.1f}: distance to pinned state {s.distance:.3e}")
    print(f"   pinned second-qubit weights: "
          f"{np.round(np.diag(zeno_qubit2(GAMMA)).real, 6)}")


if __name__ == "__main__":
    main()
