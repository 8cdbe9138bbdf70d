"""Why the punctured-rationals Baire witness stalls: for each depth, the
smallest visible basic around the rational 0 and whether {0} is already
open in the visible trace."""
import argparse

from quasipolish.generators import ball, rational, s2
from quasipolish.space import basic_masks, n_points


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--depths", type=int, nargs="+", default=[32, 64, 128, 256, 512])
    args = ap.parse_args()
    S = s2()
    for d in args.depths:
        masks = basic_masks(S, d)
        around = [i for i in range(1, len(masks)) if masks[i] & 1]
        best = min(around, key=lambda i: ball(i)[1])
        nearest = min((abs(rational(p)) for p in range(1, n_points(S, d))))
        isolated = any(masks[i] == 1 for i in around)
        print(f"depth {d:4d}: smallest radius at 0 = {ball(best)[1]}, "
              f"nearest visible rational = {nearest}, singleton trace = {isolated}")


if __name__ == "__main__":
    main()
