"""Run classify over every generator file in spaces/ at a few depths."""
import argparse
import time
from pathlib import Path

from quasipolish.extractors import Budgets, InconclusiveError, PreconditionError, classify_countable
from quasipolish.spacefile import SpaceFileError, load_space

SPACES = Path(__file__).resolve().parent.parent / "spaces"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--depths", type=int, nargs="+", default=[32, 128])
    args = ap.parse_args()
    for path in sorted(SPACES.glob("*.space")):
        try:
            sf = load_space(path)
        except SpaceFileError as exc:
            print(f"{path.stem:18s} parse error: {exc}")
            continue
        row = []
        for d in args.depths:
            t = time.perf_counter()
            try:
                tag = classify_countable(sf.space, d, Budgets()).tag
            except (InconclusiveError, PreconditionError) as exc:
                tag = f"inconclusive[{type(exc).__name__}]"
            row.append(f"d={d}: {tag} ({time.perf_counter() - t:.1f}s)")
        print(f"{path.stem:18s} " + "  ".join(row))


if __name__ == "__main__":
    main()
