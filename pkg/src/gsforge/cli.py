"""``gsforge`` command-line entry point."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from gsforge import graphs
from gsforge.benchmark import BenchmarkConfig, aggregate, records_to_csv, run_benchmark
from gsforge.circle import recognize
from gsforge.graphs import Graph, connected_components, format_graph, parse_graph
from gsforge.orbits import (
    OrbitBudgetExceeded,
    map_out_rgs_orbit,
    orbit_report,
)
from gsforge.synthesis import (
    OPTIMIZERS,
    BudgetExceeded,
    OptimizerOptions,
    SynthesisError,
    synthesize,
    verify_circuit,
)

EXIT_INPUT = 2
EXIT_FAILED = 3

_ORDERED = {
    "rgs_natural": lambda n, l: graphs.rgs_natural_ordering(n),
    "rgs_ordering": lambda n, l: graphs.rgs_ordering(n),
    "rgs_many_leaves_ordering": graphs.rgs_many_leaves_ordering,
    "rgs_encoded_ordering": graphs.rgs_encoded_ordering,
}
FAMILIES = ("path", "cycle", "complete", "star", "rgs", "rgs_many_leaves", "wheel", "bw3",
            *_ORDERED)


class CliError(Exception):
    pass


def family_graph(kind: str, n: int, leaves: int = 1) -> Graph:
    if kind in _ORDERED:
        return _ORDERED[kind](n, leaves)
    return graphs.make_family(kind, n, leaves)


def _load_graph(args) -> Graph:
    if getattr(args, "family", None):
        if args.n is None and args.family != "bw3":
            raise CliError("--family needs --n")
        return family_graph(args.family, args.n or 0, args.leaves)
    if not args.file:
        raise CliError("give a graph file (or '-' for stdin) or --family")
    try:
        if args.file == "-":
            text = sys.stdin.read()
        else:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise CliError(str(exc)) from None
    return parse_graph(text)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _options(args) -> OptimizerOptions:
    return OptimizerOptions(
        backsub_global=args.backsub,
        exhaust_free_pa=args.exhaust_free_pa,
        lc_rounds=args.lc_rounds,
        prune_per_level=args.prune,
        emitter_cutoff=args.emitter_cutoff,
        future_cutoff=args.future_cutoff,
        recurse_further=args.recurse_further,
        variant_sweep=args.variant_sweep,
    )


# ---------------------------------------------------------------- commands

def _synthesize_parts(g: Graph, ordering, args):
    """Whole-graph run, or one run per component when the graph is disconnected."""
    opts = _options(args)
    comps = connected_components(g)
    if len(comps) == 1 or ordering is not None:
        res = synthesize(g, ordering, args.optimizer, opts)
        return [(list(range(1, g.n + 1)) if ordering is None else list(ordering), res)]
    parts = []
    for comp in comps:
        keep = sorted(comp)
        sub, _ = g.induced(keep)
        parts.append((keep, synthesize(sub, None, args.optimizer, opts)))
    return parts


def cmd_synthesize(args) -> int:
    g = _load_graph(args)
    ordering = None
    if args.ordering:
        try:
            ordering = [int(x) for x in args.ordering.replace(",", " ").split()]
        except ValueError:
            raise CliError("--ordering takes comma-separated vertex labels") from None
    parts = _synthesize_parts(g, ordering, args)
    circuits = []
    for labels, res in parts:
        sub = g.induced(labels)[0] if len(parts) > 1 else g
        sub_order = None if len(parts) > 1 else ordering
        if not verify_circuit(res.circuit, sub, sub_order):
            print(json.dumps({"error": "verification failed"}), file=sys.stderr)
            return EXIT_FAILED
        d = res.circuit.to_dict()
        if len(parts) > 1:
            d["vertices"] = labels  # local photon label i is input vertex labels[i-1]
        circuits.append(d)
    summary = {
        "optimizer": args.optimizer,
        "emitter_cnots": sum(r.emitter_cnots for _, r in parts),
        "n_emitters": max(r.num_emitters for _, r in parts),
        "components": len(parts),
        "verified": True,
    }
    if args.format == "text":
        text = "\n".join(r.circuit.to_text() for _, r in parts) + "\n" + json.dumps(summary) + "\n"
    else:
        body = circuits[0] if len(circuits) == 1 else {"components": circuits}
        text = json.dumps({"circuit": body, "summary": summary}, indent=2) + "\n"
    _emit(text, args.out)
    if args.out:
        print(json.dumps(summary))
    return 0


def cmd_benchmark(args) -> int:
    sizes = _parse_sizes(args.n_p)
    cfg = BenchmarkConfig(
        n_p=sizes, samples=args.samples, p=args.p, seed=args.seed,
        optimizers=[o.strip() for o in args.optimizers.split(",") if o.strip()],
        options=vars(_options(args)), timing=args.timing,
    )
    records = run_benchmark(cfg)
    csv_text = records_to_csv(records, cfg.optimizers, cfg.timing)
    summary = aggregate(records, cfg.optimizers)
    if args.format == "json":
        _emit(json.dumps(summary, indent=2) + "\n", args.out)
    else:
        _emit(csv_text, args.out)
    if args.summary:
        with open(args.summary, "w", encoding="utf-8") as fh:
            json.dump(summary, fh, indent=2)
            fh.write("\n")
    elif args.out and args.format != "json":
        print(json.dumps(summary))
    return 0


def _parse_sizes(spec: str) -> list[int]:
    out: list[int] = []
    for part in spec.split(","):
        part = part.strip()
        if ":" in part:
            lo, hi = part.split(":", 1)
            out += list(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise CliError("--n-p is empty")
    return out


def cmd_orbit(args) -> int:
    g = _load_graph(args)
    keep = not args.non_isomorphic
    if args.count:
        rep = orbit_report(g, enumerate_members=False)
        summary = rep.summary()
        summary["n_members"] = None
    else:
        if args.family == "rgs" and not keep:
            members = map_out_rgs_orbit(args.n)
            rep = orbit_report(g, enumerate_members=False, count=not args.no_count)
            rep.members = members
        else:
            rep = orbit_report(g, keep_isomorphs=keep, count=not args.no_count)
        summary = rep.summary()
    summary["iso_policy"] = "keep" if keep else "discard"
    if args.format == "json":
        payload = {"summary": summary,
                   "members": [h.edges() for h in rep.members]}
        text = json.dumps(payload) + "\n"
    else:
        blocks = [format_graph(h).rstrip("\n") for h in rep.members]
        text = "".join(f"# member {i + 1}\n{b}\n\n" for i, b in enumerate(blocks))
        text += json.dumps(summary) + "\n"
    _emit(text, args.out)
    return 0


def cmd_recognize(args) -> int:
    g = _load_graph(args)
    _emit(json.dumps(recognize(g).to_dict()) + "\n", args.out)
    return 0


def cmd_families(args) -> int:
    g = family_graph(args.family, args.n or 0, args.leaves)
    _emit(format_graph(g), args.out)
    return 0


# ---------------------------------------------------------------- parser

def _add_graph_source(p: argparse.ArgumentParser, file_required: bool = False) -> None:
    p.add_argument("file", nargs=None if file_required else "?",
                   help="graph file ('-' reads stdin)")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--n", type=int)
    p.add_argument("--leaves", type=int, default=1)


def _add_optimizer_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--backsub", action="store_true", help="global back-substitution each step")
    p.add_argument("--exhaust-free-pa", action="store_true")
    p.add_argument("--lc-rounds", type=int, default=0)
    p.add_argument("--prune", type=int, default=None, help="brute force: states kept per level")
    p.add_argument("--emitter-cutoff", type=int, default=None)
    p.add_argument("--future-cutoff", type=int, default=4)
    p.add_argument("--recurse-further", action="store_true")
    p.add_argument("--variant-sweep", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gsforge",
                                 description="Emitter-based graph-state circuit synthesis "
                                             "and local-complementation tools.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synthesize", help="synthesize and verify a generation circuit")
    _add_graph_source(p)
    p.add_argument("--ordering", help="emission order, e.g. 3,1,2")
    p.add_argument("--optimizer", choices=sorted(OPTIMIZERS), default="h1")
    _add_optimizer_flags(p)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("benchmark", help="random-graph reduction statistics")
    p.add_argument("--n-p", default="7", help="sizes: 7 or 6:12 or 7,15,20")
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--p", type=float, default=0.5, help="edge probability")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--optimizers", default="naive,h1")
    p.add_argument("--optimizer", dest="optimizers", help=argparse.SUPPRESS)
    _add_optimizer_flags(p)
    p.add_argument("--timing", action="store_true", help="add wall-time columns")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.add_argument("--summary", help="also write the aggregate JSON here")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("orbit", help="LC orbit members and counts")
    _add_graph_source(p)
    p.add_argument("--non-isomorphic", action="store_true")
    p.add_argument("--count", action="store_true", help="counts only, no enumeration")
    p.add_argument("--no-count", action="store_true", help="skip e, k and l")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("recognize", help="circle-graph recognition")
    _add_graph_source(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("families", help="write a named family graph")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--leaves", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_families)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError) as exc:
        print(f"gsforge: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (BudgetExceeded, OrbitBudgetExceeded) as exc:
        print(f"gsforge: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except SynthesisError as exc:
        print(f"gsforge: synthesis failed: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
