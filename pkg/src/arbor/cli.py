"""Command-line front end.

Subcommands: sample, check, color, balance, experiment, enumerate.
Exit codes: 0 success, 2 precondition or usage error, 1 internal invariant
violation (the offending tree is dumped to stderr for bug reports).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from .balance import DegreeSequence, balance_exact
from .colorings import KColoring
from .equitable import equitable_coloring, equitable_three, verify_equitable
from .errors import ArborError, InternalInvariant
from .experiments import (
    ExperimentConfig,
    run_balanced_fraction,
    run_degree_stats,
    run_equitable_fraction,
    run_max_degree,
)
from .random_trees import (
    ENUMERATION_LIMIT,
    enumerate_labeled_trees,
    prufer_decode,
    prufer_encode,
    random_prufer,
    stats_from_prufer,
    tree_stats,
    trial_rng,
)
from .trees import (
    classify_vertex,
    format_tree_text,
    is_path_graph,
    parse_tree_text,
    pre_leaves,
)

SCHEMA = 1


def _default_seed() -> int:
    return int(os.environ.get("ARBOR_SEED", "0"))


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def _read_tree(path: str):
    with open(path) as fh:
        return parse_tree_text(fh.read())


def _cmd_sample(args) -> int:
    lines = []
    for trial in range(args.trials):
        entries = random_prufer(args.n, trial_rng(args.seed, trial))
        if args.emit == "prufer":
            lines.append("P: " + " ".join(map(str, entries)))
        elif args.emit == "edges":
            t = prufer_decode(entries, args.n)
            lines.append(f"# trial {trial}")
            lines.append(format_tree_text(t).rstrip("\n"))
        else:
            s = stats_from_prufer(entries, args.n)
            lines.append(f"{trial},{s.max_degree},{s.x1},{s.x2}")
    if args.emit == "stats":
        lines.insert(0, "trial,max_degree,x1,x2")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_check(args) -> int:
    t = _read_tree(args.infile)
    s = tree_stats(t)
    classes = {"leaf": 0, "pre-leaf": 0, "special-pre-leaf": 0, "internal": 0}
    for v in range(1, t.n + 1):
        classes[classify_vertex(t, v).value] += 1
    payload = {
        "schema": SCHEMA,
        "n": t.n,
        "edges": t.edge_count,
        "max_degree": s.max_degree,
        "x1": s.x1,
        "x2": s.x2,
        "is_path": is_path_graph(t),
        "classes": classes,
        "pre_leaves": pre_leaves(t),
        "prufer": prufer_encode(t) if t.n >= 2 else [],
    }
    _emit(_json(payload), args.out)
    return 0


def _read_coloring(path: str, k: int) -> KColoring:
    assignment = {}
    with open(path) as fh:
        for ln in fh:
            ln = ln.strip()
            if not ln or ln.startswith("#"):
                continue
            v, c = ln.split()
            assignment[int(v)] = int(c)
    return KColoring(k, assignment)


def _cmd_color(args) -> int:
    t = _read_tree(args.infile)
    if args.verify:
        cert = verify_equitable(t, _read_coloring(args.verify, args.k))
        payload = {
            "schema": SCHEMA,
            "k": args.k,
            "valid": cert.valid,
            "class_sizes": list(cert.coloring.class_sizes),
            "mono_edges": list(cert.mono_edges),
        }
        _emit(_json(payload), args.out)
        return 0
    if args.constrain:
        p, q = args.constrain
        cert = equitable_three(t, constraint=(p, q)) if args.k == 3 else None
        if cert is None:
            raise ArborError("--constrain is only available for k=3")
    else:
        cert = equitable_coloring(t, args.k)
    payload = {
        "schema": SCHEMA,
        "k": args.k,
        "assignment": {str(v): cert.coloring.color(v) for v in range(1, t.n + 1)},
        "class_sizes": list(cert.coloring.class_sizes),
        "trace": list(cert.trace),
    }
    _emit(_json(payload), args.out)
    return 0


def _cmd_balance(args) -> int:
    if args.seq:
        values = [int(x) for x in args.seq.replace(",", " ").split()]
        seq = DegreeSequence(values)
    elif args.infile:
        seq = DegreeSequence.from_graph(_read_tree(args.infile))
    else:
        raise ArborError("balance needs --seq or --in")
    f, part = balance_exact(seq)
    payload = {
        "schema": SCHEMA,
        "F": f,
        "partition_I": list(part.I),
        "partition_J": list(part.J),
        "balanced": f <= 2,
    }
    _emit(_json(payload), args.out)
    return 0


def _cmd_enumerate(args) -> int:
    if args.count_only:
        count = sum(1 for _ in enumerate_labeled_trees(args.n))
        _emit(str(count) + "\n", args.out)
        return 0
    lines = []
    for i, t in enumerate(enumerate_labeled_trees(args.n)):
        lines.append(f"# tree {i}")
        lines.append(format_tree_text(t).rstrip("\n"))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


_EXPERIMENTS = {
    "balanced-fraction": run_balanced_fraction,
    "equitable-fraction": run_equitable_fraction,
    "degree-stats": run_degree_stats,
    "max-degree": run_max_degree,
}


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for key in sorted(d):
        val = d[key]
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            out.update(_flatten(val, name + "."))
        else:
            out[name] = val
    return out


def _cmd_experiment(args) -> int:
    cfg = ExperimentConfig(n=args.n, trials=args.trials, seed=args.seed, k=args.k, workers=args.workers)
    summary = _EXPERIMENTS[args.kind](cfg)
    if args.format == "json":
        _emit(summary.to_json() + "\n", args.out)
    else:
        import csv
        import io

        flat = _flatten(summary.to_dict())
        keys = list(flat)
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(keys)
        writer.writerow([flat[k] if isinstance(flat[k], (int, float, str)) else json.dumps(flat[k]) for k in keys])
        _emit(buf.getvalue(), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arbor", description="Balanced and equitable colorings of random trees")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("sample", help="sample uniform random labeled trees")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--emit", choices=["edges", "prufer", "stats"], default="stats")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_sample)

    p = sub.add_parser("check", help="validate a tree file and report its taxonomy")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("color", help="equitable k-coloring of a tree")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--constrain", type=int, nargs=2, metavar=("P", "Q"))
    p.add_argument("--verify", help="check an externally supplied coloring file (vertex color lines)")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_color)

    p = sub.add_parser("balance", help="exact balance of a sequence or a tree's degrees")
    p.add_argument("--seq", help="comma or space separated positive integers")
    p.add_argument("--in", dest="infile")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_balance)

    p = sub.add_parser("enumerate", help=f"all labeled trees, n <= {ENUMERATION_LIMIT}")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_enumerate)

    p = sub.add_parser("experiment", help="Monte Carlo experiments")
    p.add_argument("--kind", choices=sorted(_EXPERIMENTS), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InternalInvariant as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        if exc.dump:
            print("offending input for bug report:", file=sys.stderr)
            print(exc.dump, file=sys.stderr)
        return 1
    except ArborError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
