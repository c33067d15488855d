"""Weak-drive cooling of the three-level emitter at low temperature.

Fits ln Q_ph against 1/T and compares the slope with -dE/k, where dE is the
excited-state splitting. Temperatures run from 1 K to the point where the
phonon occupation at dE reaches 0.05.

Usage: python scripts/exponential_suppression.py [--rabi 1e-4] [--points 8]
"""

import argparse
import math
import sys

import numpy as np

from dasc.liouvillian import assemble
from dasc.model import KB_OVER_HBAR, DriveConfig, PhononBathConfig, merge_ground_states, siv_four_level
from dasc.steady_state import heat_currents, solve_steady_state


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--rabi", type=float, default=1e-4, help="rad/ps")
    ap.add_argument("--points", type=int, default=8)
    args = ap.parse_args()

    model = merge_ground_states(siv_four_level())
    dE = model.excited_splitting
    t_max = dE / (KB_OVER_HBAR * math.log(21.0))
    drive = DriveConfig.uniform(model.pl_lines()[0], args.rabi)
    T = np.linspace(1.0, t_max, args.points)
    Q = np.empty_like(T)
    for k, t in enumerate(T):
        parts = assemble(model, drive, PhononBathConfig(t))
        Q[k] = heat_currents(parts, solve_steady_state(parts)).Q_ph
    print(f"{'T (K)':>8} {'Q_ph (W)':>12}")
    for t, q in zip(T, Q):
        print(f"{t:8.3f} {q:12.4e}")
    if np.any(Q <= 0):
        print("non-positive cooling power; drive too strong for an Arrhenius fit")
        return 1
    slope = np.polyfit(1.0 / T, np.log(Q), 1)[0]
    expected = -dE / KB_OVER_HBAR
    print(f"slope {slope:.3f} K, -dE/k {expected:.3f} K, ratio {slope / expected:.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
