"""Entropy along the consistent family of a two-observable data set.

The maximum sits at the family anchor, which is the Jaynes state.
"""
import argparse

import numpy as np

from jaynes_qic import SIGMA_X, SIGMA_Z, entropy_bits, family_state, infer_two


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--a", type=float, default=0.6, help="<sigma_z>")
    ap.add_argument("--b", type=float, default=0.4, help="<sigma_x>")
    ap.add_argument("--points", type=int, default=11)
    args = ap.parse_args()

    sol = infer_two(SIGMA_Z, args.a, SIGMA_X, args.b)
    g = sol.family.radius
    print(f"S_J = {sol.entropy_bits:.10f} bits, gamma in [-{g:.6f}, {g:.6f}]")
    for gamma in np.linspace(-g, g, args.points):
        s = family_state(sol, (gamma,))
        print(f"gamma {gamma:+.6f}  S {entropy_bits(s):.10f}  bloch {np.round(s.bloch, 6)}")


if __name__ == "__main__":
    main()
