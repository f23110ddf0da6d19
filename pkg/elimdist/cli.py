"""
cli.py - elimdist: Command Line

    python -m elimdist check g.el triangle_free
    python -m elimdist dist g.el f.fol --variant prop --k 2 --method fpt --p 4
    python -m elimdist depth-of-set g.el --set 0,3,5
    python -m elimdist unbreakable g.el --p 3 --q 2
    python -m elimdist gen setcover --n 2 --m 2 --k 1 --out sc
    python -m elimdist msol triangle_free --k 1 --variant depth
    python -m elimdist family-verify fam.txt

FORMULA arguments take a ".fol" path or a catalog name.

Results go to stdout; with --verbose, progress lines go to stderr.
Exit codes: 0 true / success, 1 false, 2 usage or input error.
"""

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import config
from .distance import DistanceQuery, Variant, solve
from .elimination import depth
from .errors import ElimDistError, PreconditionError
from .formula import CATALOG, Formula, catalog_formula, load_formula, render_formula
from .fpt import Counters, default_p, solve_unbreakable
from .graph import is_unbreakable, load_graph, random_graph, random_unbreakable, to_mask, to_sorted, write_edge_list
from .hardness import hard_formula, random_setcover, setcover_to_graph, write_setcover
from .modelcheck import Structure, models
from .msol import emit_msol, render_msol
from .separation import build_family, load_family, verify_family, write_family


# =============================================================================
# Helpers
# =============================================================================

class Status:
    """One overwritten stderr line: '  [tag] message ... detail, 1.2s'."""

    def __init__(self, tag: str, enabled: bool):
        self.tag = tag
        self.enabled = enabled
        self.start = time.time()

    def update(self, message: str, detail: str = "", final: bool = False):
        if not self.enabled:
            return
        elapsed = time.time() - self.start
        sys.stderr.write(f"\r  [{self.tag}] {message} ... {detail}, {elapsed:.1f}s")
        if final:
            sys.stderr.write("\n")
        sys.stderr.flush()

    def progress(self, stage: str, counters: Counters):
        self.update(stage, f"{counters.tasks} members, {counters.nodes} nodes")


def read_formula(source: str) -> Formula:
    if Path(source).exists():
        return load_formula(source)
    if source in CATALOG:
        return catalog_formula(source)
    raise PreconditionError(f"{source!r} is neither a formula file nor a catalog name {sorted(CATALOG)}")


def parse_vertices(text: str) -> list[int]:
    if not text.strip():
        return []
    try:
        return [int(tok) for tok in text.split(",")]
    except ValueError:
        raise PreconditionError(f"expected comma-separated vertex ids, got {text!r}")


def _bool(value: bool) -> int:
    print("true" if value else "false")
    return 0 if value else 1


@dataclass
class RunReport:
    command: str
    variant: str
    method: str
    k: int | None
    p: int | None = None
    value: int | None = None
    verdict: bool | None = None
    witness: dict | None = None
    counters: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def to_json(self) -> str:
        return json.dumps(self.__dict__, indent=2, sort_keys=True)


# =============================================================================
# Commands
# =============================================================================

def cmd_check(args) -> int:
    g = load_graph(args.graph)
    f = read_formula(args.formula)
    return _bool(models(Structure(g, tuple(parse_vertices(args.assign))), f))


def cmd_dist(args) -> int:
    g = load_graph(args.graph)
    f = read_formula(args.formula)
    variant = Variant(args.variant)
    status = Status("dist", args.verbose)
    start = time.perf_counter()
    counters = Counters()
    p = None
    if args.method == "fpt":
        if args.k is None:
            raise PreconditionError("--method fpt needs --k")
        if args.cap is not None:
            raise PreconditionError("--cap applies to --method exact only")
        p = args.p if args.p is not None else default_p(args.k)
        verdict, witness = solve_unbreakable(
            g, f, args.k, p, variant,
            verify_unbreakable=args.verify_unbreakable, jobs=args.jobs,
            progress=status.progress, counters=counters, seed=args.seed,
        )
        value = None
    else:
        result = solve(DistanceQuery(g, f, variant, args.k), with_witness=bool(args.witness), cap=args.cap)
        value, verdict, witness = result.value, result.verdict, result.witness
    elapsed = time.perf_counter() - start
    status.update(f"{variant.value} {args.method}", f"{counters.nodes} nodes", final=True)

    if args.witness:
        payload = witness.to_json() if witness is not None else None
        Path(args.witness).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    if args.counters:
        report = RunReport(
            command="dist", variant=variant.value, method=args.method, k=args.k, p=p,
            value=value, verdict=verdict,
            witness=witness.to_json() if witness is not None else None,
            counters=counters.to_dict(), wall_time=round(elapsed, 3),
        )
        print(report.to_json())
    elif value is not None:
        print(value)
    else:
        print("true" if verdict else "false")
    if value is not None:
        return 0
    return 0 if verdict else 1


def cmd_depth_of_set(args) -> int:
    g = load_graph(args.graph)
    x = parse_vertices(args.set)
    for v in x:
        if v not in g:
            raise PreconditionError(f"vertex {v} is not in the graph")
    print(depth(g, to_mask(x)))
    return 0


def cmd_unbreakable(args) -> int:
    g = load_graph(args.graph)
    ok, sep = is_unbreakable(g, args.p, args.q)
    if sep is not None and args.verbose:
        print(f"  separation A={to_sorted(sep.a)} B={to_sorted(sep.b)} order={sep.order}", file=sys.stderr)
    return _bool(ok)


def cmd_gen(args) -> int:
    rng = random.Random(args.seed)
    out = Path(args.out)
    if args.kind == "setcover":
        inst = random_setcover(args.n, args.m, args.k, rng, density=args.density)
        targets = {
            out.with_suffix(".sc"): lambda path: write_setcover(inst, path),
            out.with_suffix(".el"): lambda path: write_edge_list(setcover_to_graph(inst), path),
            out.with_suffix(".fol"): lambda path: path.write_text(render_formula(hard_formula()) + "\n", encoding="utf-8"),
        }
    elif args.kind == "family":
        fam = build_family(args.n, args.a, args.b, method=args.method, seed=args.seed)
        targets = {out: lambda path: write_family(fam, path)}
    else:
        if args.unbreakable:
            g = random_unbreakable(args.n, args.p, args.k, rng, density=args.density)
        else:
            g = random_graph(args.n, args.density, rng)
        targets = {out.with_suffix(".el"): lambda path: write_edge_list(g, path)}
    for path, write in targets.items():
        write(path)
        print(f"Created: {path}")
    return 0


def cmd_msol(args) -> int:
    f = read_formula(args.formula)
    print(render_msol(emit_msol(f, args.k, Variant(args.variant))))
    return 0


def cmd_family_verify(args) -> int:
    fam = load_family(args.family)
    status = Status("family", args.verbose)
    ok = verify_family(fam)
    status.update(f"n={fam.universe_size} a={fam.a} b={fam.b}", f"{len(fam)} members", final=True)
    return _bool(ok)


# =============================================================================
# Parser
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="elimdist",
        description="Elimination distances to first-order properties",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__.split("\n\n", 1)[1],
    )
    parser.add_argument("--verbose", action="store_true", help="Progress lines on stderr")
    parser.add_argument("--seed", type=int, default=config.DEFAULT_SEED, help="Seed for every random choice")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="Model-check a formula on a graph")
    p.add_argument("graph")
    p.add_argument("formula")
    p.add_argument("--assign", default="", help="Vertices for the free variables, e.g. 0,3")
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("dist", help="Elimination distance, or a '<= k' verdict")
    p.add_argument("graph")
    p.add_argument("formula")
    p.add_argument("--variant", choices=[v.value for v in Variant], default="conn")
    p.add_argument("--k", type=int, help="Decide ed <= k instead of computing ed")
    p.add_argument("--method", choices=["exact", "fpt"], default="exact")
    p.add_argument("--p", type=int, help="Unbreakability parameter for --method fpt (default 2^k)")
    p.add_argument("--witness", help="Write the witness JSON here")
    p.add_argument("--cap", type=int, help="Vertex cap for exact mode")
    p.add_argument("--jobs", type=int, default=1, help="Worker processes for --method fpt")
    p.add_argument("--verify-unbreakable", action="store_true", help="Check the (p,k)-unbreakable promise first")
    p.add_argument("--counters", action="store_true", help="Print a JSON run report")
    p.set_defaults(handler=cmd_dist)

    p = sub.add_parser("depth-of-set", help="Depth of a vertex set")
    p.add_argument("graph")
    p.add_argument("--set", required=True, help="Comma-separated vertex ids")
    p.set_defaults(handler=cmd_depth_of_set)

    p = sub.add_parser("unbreakable", help="Decide (p,q)-unbreakability")
    p.add_argument("graph")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(handler=cmd_unbreakable)

    p = sub.add_parser("gen", help="Write fixtures: setcover, family, fixture")
    p.add_argument("kind", choices=["setcover", "family", "fixture"])
    p.add_argument("--out", required=True, help="Output path (suffixes are added for setcover and fixture)")
    p.add_argument("--n", type=int, default=12)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--a", type=int, default=2)
    p.add_argument("--b", type=int, default=2)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--method", choices=["auto", "greedy", "code"], default="auto")
    p.add_argument("--unbreakable", action="store_true", help="Resample until (p,k)-unbreakable")
    p.set_defaults(handler=cmd_gen)

    p = sub.add_parser("msol", help="Print the MSOL sentence for ed <= k")
    p.add_argument("formula")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--variant", choices=[v.value for v in Variant], default="conn")
    p.set_defaults(handler=cmd_msol)

    p = sub.add_parser("family-verify", help="Exhaustively check a separating family file")
    p.add_argument("family")
    p.set_defaults(handler=cmd_family_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (ElimDistError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2
