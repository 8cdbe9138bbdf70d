"""Largest disjoint nested tree found in the rationals at each depth.

    python3 scripts/s2_tree_heights.py --depths 64 128 256 --max-height 3
"""
import argparse
import time

from quasipolish.extractors import InconclusiveError, extract_S2
from quasipolish.generators import s2


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--depths", type=int, nargs="+", default=[64, 128, 256])
    ap.add_argument("--max-height", type=int, default=3)
    ap.add_argument("--budget", type=int, default=200_000)
    args = ap.parse_args()
    for d in args.depths:
        t = time.perf_counter()
        try:
            rep = extract_S2(s2(), d, tree_height=args.max_height, min_height=1, step_budget=args.budget)
            h = dict(rep.notes)["height"]
            print(f"depth {d:5d}: height {h} ({len(rep.points)} points) in {time.perf_counter() - t:.2f}s")
        except InconclusiveError as exc:
            print(f"depth {d:5d}: none ({exc}) in {time.perf_counter() - t:.2f}s")


if __name__ == "__main__":
    main()
