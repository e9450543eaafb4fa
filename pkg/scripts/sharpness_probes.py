"""Numerical probes of how close the sup-norm bounds come to equality."""

import argparse

from sharpquad import sharp
from sharpquad.blaschke import CirclePoleConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=64, help="phi grid for the extremal search")
    args = ap.parse_args()

    fractions = (0.9, 0.97, 0.99, 0.997)
    ratios = sharp.eq27_tightness_probe(fractions=fractions)
    print("sup mu / bound as a pole approaches the circle")
    for frac, ratio in zip(fractions, ratios):
        print(f"  |z| = {frac:5.3f} r   ratio {ratio:.6f}")

    print("\nbest ratio over phi for the extremal function (sup-norm form)")
    for poles in ([], [0.5], [0.5, -0.4j], [0.8, 0.3 + 0.3j]):
        cfg = CirclePoleConfig.with_origin(1.0, poles)
        for s in (1, 2):
            ratio, phi = sharp.eq12_best_ratio(cfg, s, steps=args.steps)
            print(f"  n={cfg.n} s={s}   ratio {ratio:.6f} at phi {phi:.4f}")


if __name__ == "__main__":
    main()
