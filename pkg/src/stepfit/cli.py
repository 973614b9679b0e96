"""Command line front end: ``stepfit fit|verify|gen|bench``.

Exit codes: 0 success, 1 failure (bad input file, or engines disagree in
``verify``), 2 usage error.
"""
from __future__ import annotations

import argparse
import statistics
import sys
import time
from pathlib import Path

from .core import CostModel, InstanceError, close, set_cost
from .generate import PROFILES, WEIGHTS, generate
from .io import FitOutput, Instance, format_csv, load_instance, render
from .kstep import k_step
from .oracle import oracle_k_step_edges


def _fit(inst: Instance, k: int, engine: str, tol: float | None = None) -> FitOutput:
    model = inst.model.value
    if engine == "prune":
        opts = {} if tol is None else {"tol": tol}
        return FitOutput.from_report(k_step(inst.points, k, inst.model, **opts), "prune", model)
    t0 = time.perf_counter()
    F, cost, edges = oracle_k_step_edges(inst.points, min(k, len(inst)), inst.model)
    segs = [[s.x_left, s.x_right, s.y] for s in F.segments]
    edges = list(edges)
    while len(segs) < k:  # pad like the prune engine
        segs.append([segs[-1][1], segs[-1][1], segs[-1][2]])
        edges.append(edges[-1])
    return FitOutput(float(cost), segs, edges, "oracle", model,
                     {"wall_time": time.perf_counter() - t0})


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load(args) -> Instance:
    inst = load_instance(args.input, args.input_format, args.k, getattr(args, "model", None))
    if inst.k is None:
        raise InstanceError("no step count: pass --k or put 'k' in the JSON instance")
    return inst


def cmd_fit(args) -> int:
    inst = _load(args)
    out = _fit(inst, inst.k, args.engine, args.tolerance)
    _write(render(out, inst, args.format), args.out)
    return 0


def cmd_verify(args) -> int:
    inst = _load(args)
    a = _fit(inst, inst.k, "prune")
    b = _fit(inst, inst.k, "oracle")
    tol = args.tolerance
    ok = close(a.cost, b.cost, tol)
    for o in (a, b):
        ok &= close(set_cost(inst.points, o.step_function(), inst.model), o.cost, tol)
    status = "agree" if ok else "DISAGREE"
    print(f"prune={a.cost!r} oracle={b.cost!r} {status}")
    return 0 if ok else 1


def cmd_gen(args) -> int:
    ps = generate(args.n, args.k, args.seed, args.weights, args.profile)
    _write(format_csv(ps), args.out)
    return 0


def cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    medians = []
    print(f"# k={args.k} profile={args.profile} trials={args.trials}")
    print("n\tmedian_s\tratio")
    for n in sizes:
        times = []
        for t in range(args.trials):
            ps = generate(n, args.k, args.seed + t, "uniform", args.profile)
            t0 = time.perf_counter()
            k_step(ps, args.k)
            times.append(time.perf_counter() - t0)
        med = statistics.median(times)
        ratio = f"{med / medians[-1]:.3f}" if medians else "-"
        medians.append(med)
        print(f"{n}\t{med:.4f}\t{ratio}", flush=True)
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="stepfit", description="Optimal weighted minimax k-step fitting.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def instance_args(sp):
        sp.add_argument("--input", required=True, help="CSV (x,y[,w]) or JSON instance")
        sp.add_argument("--input-format", choices=("csv", "json"), default=None)
        sp.add_argument("--k", type=int, default=None)
        sp.add_argument("--model", choices=[m.value for m in CostModel], default=None)

    f = sub.add_parser("fit", help="fit a k-step function")
    instance_args(f)
    f.add_argument("--engine", choices=("prune", "oracle"), default="prune")
    f.add_argument("--format", choices=("json", "tsv", "svg"), default="json")
    f.add_argument("--tolerance", type=float, default=None)
    f.add_argument("--out", default=None)
    f.set_defaults(func=cmd_fit)

    v = sub.add_parser("verify", help="compare the prune engine against the oracle")
    instance_args(v)
    v.add_argument("--tolerance", type=float, default=1e-9)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="write a random instance as CSV")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--weights", choices=WEIGHTS, default="uniform")
    g.add_argument("--profile", choices=PROFILES, default="random")
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="time k_step over growing sizes")
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--sizes", required=True, help="comma-separated, e.g. 100000,200000")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--trials", type=int, default=5)
    b.add_argument("--profile", choices=PROFILES, default="random")
    b.set_defaults(func=cmd_bench)
    return p


def run_cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except (InstanceError, OSError, ValueError) as e:
        print(f"stepfit: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli())
