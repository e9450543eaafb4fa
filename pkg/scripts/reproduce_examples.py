"""Print the worked examples: fixed-node formulas against the rules and the oracle."""

import argparse

import numpy as np

from sharpquad import verify, worked


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    ap.add_argument("--s-max", type=int, default=7, help="largest s for the four-point formula")
    args = ap.parse_args()

    print("four-point formula on [-1, 1], f = 1/(x - i)^s")
    print(f"{'s':>2} {'formula':>22} {'rule':>22} {'oracle':>22} {'rel gap':>10}")
    for s, four, rule, ref in worked.segment_example(args.s_max):
        print(f"{s:2d} {four:22.16g} {rule:22.16g} {ref:22.16g} {abs(four - ref) / ref:10.2e}")

    print("\nsix-point formula on the real line, random f with poles at +-i")
    rng = np.random.default_rng(args.seed)
    for six, rule, ref in worked.halfplane_example(rng):
        print(f"   {six:22.16g} {rule:22.16g} {ref:22.16g} {abs(six - ref) / ref:10.2e}")

    print("\nGauss-Chebyshev reduction")
    for s in range(1, 9):
        node_err, moment_err = worked.gauss_chebyshev_check(rng, s)
        print(f"{s:2d} node error {node_err:.2e}  moment rel error {moment_err:.2e}")


if __name__ == "__main__":
    main()
