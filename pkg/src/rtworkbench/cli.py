"""Command-line front end: ``rt-workbench <subcommand> ...``.

Exit codes: 0 all checks pass, 1 malformed input, 2 violation found,
3 search budget exceeded.  Every run that writes files also writes
``manifest.json`` with the arguments and SHA-256 digests of inputs and
outputs; ``replay`` re-runs a manifest and compares digests.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bounds import assemble_above_window, assemble_critical_point, be_window_params, window_summary
from .certify import (
    BudgetExceeded,
    Certificate,
    check_codegree_bound,
    exact_mis,
    find_k4,
    find_triangle_in,
    local_max_cut,
    mis_bounds,
    odd_girth,
    shearer_bound,
)
from .construct import BEParams, NiceGraph, build_be_graph, construction_record, expected_cross_density, halves, verify_nice
from .densify import DensifyParams, densify
from .drc import DRCParams, check_chernoff, check_dispersion, drc_round, find_half_density_pair
from .errors import InputError
from .graph import Bipartition, BitGraph, VertexSet, graph_from_dict, graph_to_dict

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION, EXIT_BUDGET = 0, 1, 2, 3
MIS_EXACT_LIMIT = 40


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), sort_keys=False)


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def worker_count() -> int:
    """Sweep workers: RT_WORKBENCH_THREADS if set, else the CPU count."""
    raw = os.environ.get("RT_WORKBENCH_THREADS", "")
    if not raw:
        return os.cpu_count() or 1
    try:
        cap = int(raw)
    except ValueError:
        raise InputError(f"RT_WORKBENCH_THREADS must be an integer, got {raw!r}")
    return max(1, cap)


def strip_out(argv: list[str]) -> list[str]:
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
        elif tok == "--out":
            skip = True
        elif not tok.startswith("--out="):
            out.append(tok)
    return out


class Run:
    """Collects output files of one invocation and writes the manifest."""

    def __init__(self, args: argparse.Namespace, argv: list[str]):
        self.args = args
        # the output directory is left out so manifests do not depend on where they were written
        self.argv = strip_out(argv)
        self.out = Path(args.out) if args.out else None
        self.inputs: dict[str, str] = {}
        self.outputs: dict[str, str] = {}

    def read_input(self, path: str) -> str:
        p = Path(path)
        try:
            text = p.read_text()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}")
        self.inputs[path] = hashlib.sha256(text.encode()).hexdigest()
        return text

    def write(self, name: str, text: str) -> None:
        if self.out is None:
            return
        self.out.mkdir(parents=True, exist_ok=True)
        path = self.out / name
        path.write_text(text)
        self.outputs[name] = _sha256(path)

    def finish(self) -> None:
        if self.out is None or not self.outputs:
            return
        params = {k: v for k, v in sorted(vars(self.args).items()) if k not in ("func", "out")}
        manifest = {
            "command": self.args.command,
            "argv": self.argv,
            "params": params,
            "seed": self.args.seed,
            "version": __version__,
            "inputs": dict(sorted(self.inputs.items())),
            "outputs": dict(sorted(self.outputs.items())),
        }
        (self.out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def load_graph(run: Run, path: str) -> tuple[BitGraph, VertexSet | None, dict | None]:
    """Read a graph JSON file or a construction record holding one."""
    try:
        data = json.loads(run.read_input(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    params = data.get("params") if isinstance(data.get("params"), dict) else None
    if "graph" in data:
        data = data["graph"]
    g, left = graph_from_dict(data)
    return g, left, params


def _nice(g: BitGraph, left: VertexSet | None) -> NiceGraph:
    if left is None:
        raise InputError("this command needs a graph with a 'left' side")
    return NiceGraph(g, Bipartition(left, left.complement()))


# -- subcommands -----------------------------------------------------------------


def cmd_construct(args, run: Run) -> int:
    params = BEParams(args.n, args.h, args.epsilon, args.seed, args.paired)
    g = build_be_graph(params)
    rec = construction_record(g)
    run.write("graph.json", _dumps(rec) + "\n")
    print(_dumps({"params": rec["params"], "summary": rec["summary"]}))
    return EXIT_OK


def cmd_densify(args, run: Run) -> int:
    g, left, _ = load_graph(run, args.graph)
    nice = _nice(g, left)
    out, rec = densify(nice, DensifyParams(args.d, args.trials, args.seed))
    body = {"record": rec.to_dict(), "graph": graph_to_dict(out.graph, out.X), "summary": out.summary()}
    run.write("densified.json", _dumps(body) + "\n")
    print(_dumps({"record": rec.to_dict() | {"U1": len(rec.U1), "U2": len(rec.U2)}, "summary": body["summary"]}))
    return EXIT_OK


def cmd_certify(args, run: Run) -> int:
    g, left, _ = load_graph(run, args.graph)
    results: list[dict] = []
    status = EXIT_OK

    def record(name: str, cert: Certificate) -> None:
        nonlocal status
        results.append({"check": name, **cert.to_dict()})
        if cert.found:
            status = max(status, EXIT_VIOLATION)

    if args.k4:
        record("k4", find_k4(g))
    if args.triangles:
        nice = _nice(g, left)
        for name, side in (("triangle_left", nice.X), ("triangle_right", nice.Y)):
            record(name, find_triangle_in(g, side))
    if args.codegree is not None:
        record("codegree", check_codegree_bound(g, args.codegree))
    if args.min_degree is not None:
        md = g.min_degree()
        ok = md >= args.min_degree
        results.append({"check": "min_degree", "kind": "NoWitness" if ok else "DegreeViolation", "vertices": [] if ok else
                        [int(v) for v in (g.degrees < args.min_degree).nonzero()[0][:1]],
                        "context": {"min_degree": md, "floor": args.min_degree}})
        if not ok:
            status = max(status, EXIT_VIOLATION)
    if args.mis_exact:
        res = exact_mis(g, args.mis_budget)
        if isinstance(res, BudgetExceeded):
            results.append({"check": "mis", "kind": "BudgetExceeded", "vertices": res.witness.to_list(),
                            "context": {"nodes": res.nodes, "lower_bound": res.lower_bound}})
            if status == EXIT_OK:
                status = EXIT_BUDGET
        else:
            results.append({"check": "mis", "kind": "IndependentSet", "vertices": res.witness.to_list(),
                            "context": {"alpha": res.alpha, "nodes": res.nodes, "exact": True}})
    text = _dumps({"results": results, "exit": status})
    run.write("certificate.json", text + "\n")
    print(text)
    return status


def cmd_mis(args, run: Run) -> int:
    g, _, _ = load_graph(run, args.graph)
    if args.heuristic:
        ind, upper = mis_bounds(g)
        body = {"exact": False, "lower_bound": len(ind), "upper_bound": upper, "witness": ind.to_list()}
        status = EXIT_OK
    else:
        res = exact_mis(g, args.budget)
        if isinstance(res, BudgetExceeded):
            ind, upper = mis_bounds(g)
            lower = max(res.lower_bound, len(ind))
            wit = res.witness if res.lower_bound >= len(ind) else ind
            body = {"exact": False, "budget_exceeded": True, "nodes": res.nodes, "lower_bound": lower,
                    "upper_bound": upper, "witness": wit.to_list()}
            status = EXIT_BUDGET
        else:
            body = {"exact": True, "alpha": res.alpha, "nodes": res.nodes, "witness": res.witness.to_list()}
            status = EXIT_OK
    run.write("mis.json", _dumps(body) + "\n")
    print(_dumps(body))
    return status


def cmd_maxcut(args, run: Run) -> int:
    g, _, _ = load_graph(run, args.graph)
    res = local_max_cut(g, args.seed)
    body = {"crossing": res.crossing, "edges": g.num_edges, "locally_optimal": res.locally_optimal,
            "moves": res.moves, "left": res.cut.left.to_list()}
    run.write("maxcut.json", _dumps(body) + "\n")
    print(_dumps(body))
    return EXIT_OK


def cmd_oddgirth(args, run: Run) -> int:
    g, _, _ = load_graph(run, args.graph)
    og = odd_girth(g)
    body: dict = {"odd_girth": None if og == math.inf else int(og), "bipartite": og == math.inf}
    if og == math.inf or og >= 5:
        body["shearer_bound"] = shearer_bound(g.n, og)
    run.write("oddgirth.json", _dumps(body) + "\n")
    print(_dumps(body))
    return EXIT_OK


def asymptotic_drc_constants(n: int) -> dict:
    """Constants the asymptotic argument uses, shown next to the desk values."""
    C = 2000
    K = 4 * C * C + 20 * C + 16
    ln = math.log(n)
    lln = math.log(ln) if ln > 1 else float("nan")
    gamma = lln / (200 * K * ln)
    return {"C": C, "K": K, "gamma": gamma, "t": 200 * K * ln * ln / lln, "epsilon": 10 * gamma}


def cmd_drc(args, run: Run) -> int:
    g, left, _ = load_graph(run, args.graph)
    if args.use_split:
        nice = _nice(g, left)
        A, B = nice.X, nice.Y
        pair_info = {"source": "split"}
    else:
        pair = find_half_density_pair(g, args.gamma, args.seed)
        pair_info = {"source": "peel+cut", "found": pair.found, **pair.stats}
        if not pair.found or not len(pair.A) or not len(pair.B):
            line = _dumps({"pair": pair_info, "outcome": "Fail"})
            run.write("drc.jsonl", line + "\n")
            print(line)
            return EXIT_OK
        A, B = pair.A, pair.B
    lines = [_dumps({"pair": pair_info, "desk": {"t": args.t, "epsilon": args.epsilon, "gamma": args.gamma, "C": args.cee},
                     "asymptotic_constants": asymptotic_drc_constants(g.n)})]
    status = EXIT_OK
    for k in range(args.seeds):
        p = DRCParams(args.t, args.epsilon, args.gamma, args.cee, args.seed + k)
        out = drc_round(g, A, B, p)
        ok = out.validate(g)
        if not ok:
            status = EXIT_VIOLATION
        stats = {key: v for key, v in out.stats.items() if key != "T"}
        lines.append(_dumps({"seed": args.seed + k, "kind": out.kind, "size": len(out.witness),
                             "witness": list(out.witness), "valid": ok, "stats": stats}))
    text = "\n".join(lines) + "\n"
    run.write("drc.jsonl", text)
    sys.stdout.write(text)
    return status


def cmd_dispersion(args, run: Run) -> int:
    body: dict = {}
    status = EXIT_OK
    if args.n is not None:
        chk = check_dispersion(args.cee, args.epsilon, args.n)
        body["dispersion"] = {"C": args.cee, "epsilon": args.epsilon, "n": args.n, "m": chk.m,
                              "log_lhs": chk.log_lhs, "log_rhs": chk.log_rhs, "holds": chk.holds}
        if not chk.holds:
            status = EXIT_VIOLATION
    if args.chernoff_t is not None:
        ch = check_chernoff(args.chernoff_t, args.epsilon)
        body["chernoff"] = {"t": args.chernoff_t, "epsilon": args.epsilon, "m": ch.m,
                            "exact": float(ch.exact), "bound": ch.bound, "holds": ch.holds}
        if not ch.holds:
            status = EXIT_VIOLATION
    if not body:
        raise InputError("give --n for the dispersion check and/or --chernoff-t")
    run.write("dispersion.json", _dumps(body) + "\n")
    print(_dumps(body))
    return status


def cmd_bounds(args, run: Run) -> int:
    if args.kind == "summary":
        rep = window_summary(args.n, args.m or 0, args.alpha or 0)
    elif args.kind == "window":
        rep = be_window_params(args.n)
    elif args.kind == "critical":
        rep = assemble_critical_point(args.n)
    else:
        if args.m is None:
            raise InputError("--kind above needs --m")
        rep = assemble_above_window(args.n, args.m)
    if args.csv:
        text = rep.to_csv()
        run.write("bounds.csv", text)
        sys.stdout.write(text)
    else:
        text = rep.to_json()
        run.write("bounds.json", text + "\n")
        print(text)
    return EXIT_OK


# -- sweep -------------------------------------------------------------------------

SWEEP_FIELDS = [
    "cell", "n", "h", "epsilon", "seed", "d", "e_before", "e_after", "e_G0", "lemma_rhs", "averaging_floor",
    "min_degree", "cross_density", "predicted_cross_density", "nice_before", "nice_after", "mis_before", "mis_after",
    "independence_bound",
]


def parse_range(text: str, kind=float) -> list:
    """Comma list, or ``lo..hi:step`` with exact rational stepping."""
    out: list = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, rest = part.split("..", 1)
            hi, _, step = rest.partition(":")
            lo_f, hi_f = Fraction(lo), Fraction(hi)
            step_f = Fraction(step) if step else Fraction(1)
            if step_f <= 0:
                raise InputError(f"range step must be positive in {part!r}")
            if not step and kind is float and lo_f.denominator * hi_f.denominator != 1:
                # 0.1..0.5 steps by the finer of the two decimals
                step_f = Fraction(1, max(10 ** (len(x.split(".")[1]) if "." in x else 0) for x in (lo, hi)))
            x = lo_f
            while x <= hi_f:
                out.append(kind(x) if kind is int else float(x))
                x += step_f
        else:
            try:
                out.append(kind(part))
            except ValueError:
                raise InputError(f"cannot parse {part!r}")
    if not out:
        raise InputError(f"empty range {text!r}")
    return out


def sweep_cell(cell: tuple) -> dict:
    idx, n, h, eps, seed, d, trials = cell
    nice = build_be_graph(BEParams(n, h, eps, seed))
    summary = nice.summary()
    row = {"cell": idx, "n": n, "h": h, "epsilon": eps, "seed": seed, "d": d,
           "min_degree": summary["min_degree"], "cross_density": summary["cross_density"],
           "predicted_cross_density": expected_cross_density(h, eps),
           "nice_before": not verify_nice(nice).found,
           "independence_bound": 2 * n * math.exp(-eps * math.sqrt(h) / 4)}
    out, rec = densify(nice, DensifyParams(d, trials, seed))
    row.update({"e_before": rec.e_before, "e_after": rec.e_after, "e_G0": rec.e_G0,
                "lemma_rhs": float(rec.lemma_rhs), "averaging_floor": float(rec.averaging_floor),
                "nice_after": not verify_nice(out).found})
    if n <= MIS_EXACT_LIMIT:
        row["mis_before"] = exact_mis(nice.graph).alpha
        row["mis_after"] = exact_mis(out.graph).alpha
    else:
        row["mis_before"] = row["mis_after"] = ""
    return row


def cmd_sweep(args, run: Run) -> int:
    ns = parse_range(args.n, int)
    hs = parse_range(args.h, int)
    epss = parse_range(args.epsilon)
    ds = parse_range(args.d, int)
    cells = []
    for n in ns:
        for h in hs:
            for eps in epss:
                for d in ds:
                    for k in range(args.seeds):
                        cells.append((len(cells), n, h, eps, args.seed + k, d, args.trials))
    workers = worker_count()
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(sweep_cell, cells))
    else:
        rows = [sweep_cell(c) for c in cells]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SWEEP_FIELDS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    run.write("sweep.csv", buf.getvalue())
    sys.stdout.write(buf.getvalue())
    return EXIT_OK


def cmd_replay(args, run: Run) -> int:
    try:
        manifest = json.loads(Path(args.manifest).read_text())
        argv = list(manifest["argv"])
        expected = manifest["outputs"]
        inputs = manifest.get("inputs", {})
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read manifest {args.manifest}: {exc}")
    target = args.out or str(Path(args.manifest).parent / "replay")
    cleaned = strip_out(argv)
    for path, digest in inputs.items():
        try:
            now = hashlib.sha256(Path(path).read_text().encode()).hexdigest()
        except OSError:
            now = None
        if now != digest:
            raise InputError(f"input {path} is missing or changed since the manifest was written")
    code = main(["--out", target] + cleaned, capture=True)
    got = {}
    for name in expected:
        p = Path(target) / name
        got[name] = _sha256(p) if p.exists() else None
    same = got == expected
    print(_dumps({"replayed": cleaned, "exit": code, "identical": same, "outputs": got}))
    return EXIT_OK if same else EXIT_VIOLATION


# -- parser --------------------------------------------------------------------------


def _global_flags(parser: argparse.ArgumentParser, default) -> None:
    parser.add_argument("--seed", type=int, default=0 if default is None else default,
                        help="root seed for all random streams")
    parser.add_argument("--out", default=default, help="directory for output files and manifest.json")
    fmt = parser.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", default=False if default is None else default,
                     help="JSON output (default)")
    fmt.add_argument("--csv", action="store_true", default=False if default is None else default,
                     help="CSV output where supported")


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand; the copies on
    # subparsers default to SUPPRESS so they never clobber the top-level values
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="rt-workbench", description=__doc__.splitlines()[0])
    _global_flags(p, None)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("construct", parents=[common], help="build a geometric nice graph from sphere points")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--h", type=int, required=True)
    s.add_argument("--epsilon", type=float, required=True)
    s.add_argument("--paired", action="store_true", help="use one point per index for both sides")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("densify", parents=[common], help="splice a complete bipartite layer into a nice graph")
    s.add_argument("--graph", required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--trials", type=int, default=16)
    s.set_defaults(func=cmd_densify)

    s = sub.add_parser("certify", parents=[common], help="run exact certifiers on a graph")
    s.add_argument("--graph", required=True)
    s.add_argument("--k4", action="store_true")
    s.add_argument("--triangles", action="store_true", help="triangle-free check of both sides")
    s.add_argument("--mis-exact", action="store_true")
    s.add_argument("--mis-budget", type=int, default=10_000_000)
    s.add_argument("--codegree", type=int, metavar="ALPHA")
    s.add_argument("--min-degree", type=int, metavar="FLOOR")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("mis", parents=[common], help="maximum independent set")
    s.add_argument("--graph", required=True)
    s.add_argument("--budget", type=int, default=10_000_000)
    s.add_argument("--heuristic", action="store_true", help="bounds only: greedy plus swaps and clique cover")
    s.set_defaults(func=cmd_mis)

    s = sub.add_parser("maxcut", parents=[common], help="locally optimal cut")
    s.add_argument("--graph", required=True)
    s.set_defaults(func=cmd_maxcut)

    s = sub.add_parser("oddgirth", parents=[common], help="odd girth and the matching independence bound")
    s.add_argument("--graph", required=True)
    s.set_defaults(func=cmd_oddgirth)

    s = sub.add_parser("drc", parents=[common], help="dependent random choice rounds")
    s.add_argument("--graph", required=True)
    s.add_argument("--t", type=int, default=20)
    s.add_argument("--epsilon", type=float, default=0.05)
    s.add_argument("--gamma", type=float, default=0.01)
    s.add_argument("--cee", type=float, default=1.0, help="degree-slack constant C")
    s.add_argument("--seeds", type=int, default=10)
    s.add_argument("--use-split", action="store_true", help="take A, B from the graph's sides")
    s.set_defaults(func=cmd_drc)

    s = sub.add_parser("dispersion", parents=[common], help="exact binomial tail checks")
    s.add_argument("--cee", type=float, default=1.0)
    s.add_argument("--epsilon", type=float, required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--chernoff-t", type=int)
    s.set_defaults(func=cmd_dispersion)

    s = sub.add_parser("bounds", parents=[common], help="closed-form bound calculator")
    s.add_argument("--kind", choices=["summary", "window", "critical", "above"], default="summary")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int)
    s.add_argument("--alpha", type=int)
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("sweep", parents=[common], help="construct + densify + certify over a parameter grid")
    s.add_argument("--n", required=True, help="comma list or lo..hi:step")
    s.add_argument("--h", required=True)
    s.add_argument("--epsilon", required=True)
    s.add_argument("--d", default="0")
    s.add_argument("--seeds", type=int, default=1)
    s.add_argument("--trials", type=int, default=8)
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("replay", parents=[common], help="re-run a manifest and compare output digests")
    s.add_argument("--manifest", required=True)
    s.set_defaults(func=cmd_replay)
    return p


def main(argv: list[str] | None = None, capture: bool = False) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    run = Run(args, argv)
    out = sys.stdout
    if capture:
        sys.stdout = io.StringIO()
    try:
        code = args.func(args, run)
        run.finish()
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_INPUT
    finally:
        sys.stdout = out
    return code


if __name__ == "__main__":
    sys.exit(main())
