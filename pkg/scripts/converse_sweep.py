"""Best retained weight for rank budgets on either side of the Jaynes entropy.

Below S_J the retained weight collapses with N; above it tends to one.
"""
import argparse
import csv
import sys

from jaynes_qic import SIGMA_X, SIGMA_Z, converse_check, infer_two


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--offsets", type=float, nargs="+", default=[-0.2, -0.1, -0.05, 0.05, 0.1, 0.2])
    ap.add_argument("--n", type=int, nargs="+", default=[25, 50, 100, 200, 400, 800, 1600])
    args = ap.parse_args()

    sol = infer_two(SIGMA_Z, 0.6, SIGMA_X, 0.4)
    print(f"# S_J = {sol.entropy_bits:.10f} bits", file=sys.stderr)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["offset"] + [f"n={n}" for n in args.n])
    for off in args.offsets:
        rep = converse_check(sol, args.n, sol.entropy_bits + off)
        w.writerow([f"{off:+.2f}"] + [f"{r.best_retained_trace:.6g}" for r in rep.records])


if __name__ == "__main__":
    main()
