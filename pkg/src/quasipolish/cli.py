"""Command-line front end.

Exit status: 0 certified, 2 inconclusive at the given depth, 1 on a parse,
configuration or precondition error.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Optional

from . import borel
from .derivative import delta3_witness, rank
from .extractors import (
    Budgets,
    CheckFailed,
    ExtractionReport,
    InconclusiveError,
    PreconditionError,
    baire_witness,
    chain_or_max,
    classify_countable,
    dense_open_family,
    extract_S0,
    extract_S1,
    extract_S2,
    sober_witness,
)
from .order import is_perfect, is_T0, is_T1, is_T2, is_TD, is_sober, sober_evidence
from .space import FiniteSpace, PointSet, mask_of, n_points, presented
from .spacefile import load_space

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    depth: int = 64
    rank_budget: int = 20
    step_budget: int = 10_000
    max_steps: int = 64
    count: int = 16
    height: int = 4
    min_height: int = 2
    seed: int = 0
    output: str = "human"

    def __post_init__(self):
        if self.depth < 2:
            raise ValueError("depth must be at least 2")
        for name in ("rank_budget", "step_budget", "max_steps", "count", "height", "min_height"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        if self.output not in ("human", "structured"):
            raise ValueError("format must be human or structured")

    @property
    def budgets(self) -> Budgets:
        return Budgets(count=self.count, tree_height=self.height, rank_budget=self.rank_budget,
                       step_budget=self.step_budget, max_steps=self.max_steps)


class Printer:
    def __init__(self, cfg: RunConfig, out=None):
        self.structured = cfg.output == "structured"
        self.out = out or sys.stdout

    def line(self, text: str):
        print(text, file=self.out)

    def report(self, rep: ExtractionReport, result: Optional[str] = None):
        for name, ok in rep.checks:
            self.line(f"CHECK {name} {'PASS' if ok else 'FAIL'}")
        if not self.structured:
            self.line(f"depth {rep.depth}, steps {rep.steps_used}")
            for key, value in rep.notes:
                self.line(f"note {key}: {value}")
        self.line("POINTS " + " ".join(_fmt_point(p) for p in rep.points))
        self.line(f"RESULT {result or rep.tag}")


def _fmt_point(p) -> str:
    if isinstance(p, tuple):
        return f"{p[0]}={p[1]}"
    return str(p)


def _parse_points(text: Optional[str]) -> Optional[list]:
    if text is None:
        return None
    return [int(t) for t in text.replace(",", " ").split()]


# ----------------------------------------------------------------- commands

def cmd_classify(sf, cfg, args, pr):
    rep = classify_countable(sf.space, cfg.depth, cfg.budgets)
    pr.report(rep)
    return EXIT_OK


def cmd_extract(sf, cfg, args, pr):
    sp, d = sf.space, cfg.depth
    if args.target == "s0":
        rep = extract_S0(sp, d, cfg.rank_budget, cfg.step_budget)
    elif args.target == "s1":
        rep = extract_S1(sp, d, cfg.count)
    elif args.target == "s2":
        rep = extract_S2(sp, d, cfg.height, min_height=min(cfg.min_height, cfg.height))
    else:
        rep = chain_or_max(sp, d)
    pr.report(rep)
    if rep.tag != args.target.upper():
        pr.line(f"# requested {args.target.upper()}, found {rep.tag}")
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_derive(sf, cfg, args, pr):
    value, trace = rank(sf.space, cfg.depth, cfg.max_steps)
    if not pr.structured:
        for k, stage in enumerate(trace.stages):
            pr.line(f"stage {k}: {len(stage)} visible points")
    stable = value.shape != "did_not_stabilize"
    pr.line(f"CHECK stabilized {'PASS' if stable else 'FAIL'}")
    if value.shape == "finite":
        pr.line(f"RESULT rank={value.n}")
    else:
        pr.line(f"RESULT rank={value}")
    return EXIT_OK if stable else EXIT_INCONCLUSIVE


def cmd_witness(sf, cfg, args, pr):
    sp, d = sf.space, cfg.depth
    if args.kind == "baire":
        if sf.dense is None:
            raise PreconditionError("space file has no 'dense' line")
        pr.report(baire_witness(sp, sf.dense, d, cfg.count))
    elif args.kind == "sober":
        pr.report(sober_witness(sp, d, cfg.count))
    elif args.kind == "dense":
        pts = _parse_points(args.points)
        if pts is None:
            raise PreconditionError("--points is required")
        pr.report(dense_open_family(sp, mask_of(pts), d))
    else:
        pts = _parse_points(args.points)
        X = PointSet.from_bits((1 << n_points(sp, d)) - 1, d) if pts is None else PointSet(frozenset(pts), d)
        w = delta3_witness(sp, X, d, cfg.max_steps)
        pr.line("CHECK extension_matches PASS")
        pr.line(f"CHECK side_conditions {'PASS' if w.unmet == 0 else 'FAIL'}")
        if not pr.structured:
            pr.line(f"alphas {list(w.alphas)}")
        pr.line("POINTS " + " ".join(map(str, w.points)))
        pr.line("EXPR " + borel.to_text(w.expr))
        pr.line("RESULT delta3_witness")
        return EXIT_OK if w.unmet == 0 else EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_eval(sf, cfg, args, pr):
    expr = borel.parse(args.expr)
    mask = borel.extension(expr, sf.space, cfg.depth)
    pts = [p for p in range(n_points(sf.space, cfg.depth)) if mask >> p & 1]
    if not pr.structured:
        pr.line(f"class {expr.level[0]}_{expr.level[1]}, {len(pts)} visible points")
    pr.line("POINTS " + " ".join(map(str, pts)))
    pr.line(f"RESULT size={len(pts)}")
    return EXIT_OK


def cmd_check(sf, cfg, args, pr):
    sp, d = sf.space, cfg.depth
    for name, fn in (("T0", is_T0), ("T1", is_T1), ("T2", is_T2), ("TD", is_TD), ("perfect", is_perfect)):
        v = fn(sp, d)
        pr.line(f"PROPERTY {name} {v.status}")
    if isinstance(sp, FiniteSpace):
        pr.line(f"PROPERTY sober {'holds_exactly' if is_sober(sp) else 'fails'}")
    else:
        pr.line(f"PROPERTY sober {sober_evidence(sp, d).kind}")
    pr.line(f"RESULT {presented(sp).tag}")
    return EXIT_OK


# ---------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--depth", type=int, default=64)
    common.add_argument("--rank", type=int, default=20, help="rank budget for S0 extraction")
    common.add_argument("--steps", type=int, default=10_000, help="step budget")
    common.add_argument("--max-steps", type=int, default=64, help="derivative steps")
    common.add_argument("--count", type=int, default=None)
    common.add_argument("--height", type=int, default=4, help="S2 tree height")
    common.add_argument("--min-height", type=int, default=2)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("human", "structured"), default="human")

    p = argparse.ArgumentParser(prog="quasipolish", description="Countable quasi-Polish space toolkit")
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("classify", parents=[common])
    c.add_argument("file")
    c = sub.add_parser("extract", parents=[common])
    c.add_argument("target", choices=("s0", "s1", "s2", "sd"))
    c.add_argument("file")
    c = sub.add_parser("derive", parents=[common])
    c.add_argument("file")
    c = sub.add_parser("witness", parents=[common])
    c.add_argument("kind", choices=("baire", "sober", "dense", "delta3"))
    c.add_argument("file")
    c.add_argument("--points", default=None, help="point indices, e.g. '0 1 2'")
    c = sub.add_parser("eval", parents=[common])
    c.add_argument("file")
    c.add_argument("expr")
    c = sub.add_parser("check", parents=[common])
    c.add_argument("file")
    return p


COMMANDS = dict(classify=cmd_classify, extract=cmd_extract, derive=cmd_derive,
                witness=cmd_witness, eval=cmd_eval, check=cmd_check)

_COUNT_DEFAULTS = dict(baire=32, sober=6)


def main(argv=None, out=None) -> int:
    args = build_parser().parse_args(argv)
    err = sys.stderr
    try:
        count = args.count
        if count is None:
            count = _COUNT_DEFAULTS.get(getattr(args, "kind", None), 16)
        cfg = RunConfig(depth=args.depth, rank_budget=args.rank, step_budget=args.steps,
                        max_steps=args.max_steps, count=count, height=args.height,
                        min_height=args.min_height, seed=args.seed, output=args.format)
        sf = load_space(args.file)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_ERROR
    pr = Printer(cfg, out)
    try:
        return COMMANDS[args.command](sf, cfg, args, pr)
    except CheckFailed as exc:
        if exc.report is not None:
            pr.report(exc.report, result="inconclusive")
        else:
            pr.line("RESULT inconclusive")
        print(f"inconclusive: {exc}", file=err)
        return EXIT_INCONCLUSIVE
    except InconclusiveError as exc:
        pr.line("RESULT inconclusive")
        print(f"inconclusive: {exc}", file=err)
        return EXIT_INCONCLUSIVE
    except (PreconditionError, borel.LevelError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
