"""Command-line entry point: ``ncstflip <subcommand> ...``.

Every run writes a header line ``# {"tool": ..., "version": ..., "subcommand": ..., "seed": ...}``
first, then the payload. Tables are CSV; trailing summaries are a single
``# summary {...}`` JSON line. See FORMATS.md for the full layout.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from collections import Counter

from . import __version__
from .errors import NcstFlipError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Out:
    def __init__(self, stream, subcommand: str, seed):
        self.stream = stream
        self._csv = csv.writer(stream, lineterminator="\n")
        header = {"tool": "ncstflip", "version": __version__, "subcommand": subcommand, "seed": seed}
        self.line("# " + json.dumps(header))

    def line(self, text: str = "") -> None:
        self.stream.write(text + "\n")

    def row(self, *fields) -> None:
        self._csv.writerow(fields)

    def summary(self, obj) -> None:
        self.line("# summary " + json.dumps(obj, sort_keys=True))


def _n_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ncstflip", description="2-Dyck paths, non-crossing spanning trees and their chains")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    common.add_argument("-o", "--output", help="write to this file instead of stdout")
    common.add_argument("--cap", type=int, default=None, help="override the size cap for this run")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("count", parents=[common], help="Fuss-Catalan number C_{k,n}")
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--method", choices=["closed", "recurrence"], default="closed")

    s = sub.add_parser("enumerate", parents=[common], help="list all paths or trees of size n")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--kind", choices=["paths", "trees"], default="paths")

    s = sub.add_parser("bijection", parents=[common], help="map a path to its tree or back")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--path")
    g.add_argument("--tree", help='edge list such as "0-1,0-2"')

    s = sub.add_parser("walk", parents=[common], help="simulate one chain")
    s.add_argument("--chain", choices=["am", "fm"], required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--emit", choices=["trace", "histogram"], default="trace")

    s = sub.add_parser("path", parents=[common], help="canonical flip path for one adjacent move")
    s.add_argument("--from", dest="source", required=True)
    s.add_argument("--to", dest="target", required=True)

    s = sub.add_parser("congestion", parents=[common], help="per-transition usage of all canonical paths")
    s.add_argument("--n", type=int, required=True)

    s = sub.add_parser("spectrum", parents=[common], help="spectral gap of a chain")
    s.add_argument("--chain", choices=["am", "fm"], required=True)
    s.add_argument("--n", type=int, required=True)

    s = sub.add_parser("mix", parents=[common], help="total-variation curve and mixing time")
    s.add_argument("--chain", choices=["am", "fm"], required=True)
    s.add_argument("--n", type=int, required=True)

    s = sub.add_parser("couple", parents=[common], help="coalescence times of the monotone coupling")
    s.add_argument("--n-list", type=_n_list, required=True)
    s.add_argument("--seeds", type=int, default=200)

    s = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    s.add_argument("--max-n", type=int, default=4)
    return p


# -- subcommands ---------------------------------------------------------------

def _count(args, out):
    from .fuss_dyck import fuss_catalan, fuss_catalan_recurrence

    if args.k < 1 or args.n < 0:
        raise NcstFlipError("need k >= 1 and n >= 0")
    fn = fuss_catalan if args.method == "closed" else fuss_catalan_recurrence
    out.line(str(fn(args.k, args.n)))


def _enumerate(args, out):
    from .bijection import path_to_tree
    from .fuss_dyck import enumerate_paths

    for p in enumerate_paths(args.n, cap=args.cap):
        out.line(str(path_to_tree(p)) if args.kind == "trees" else p.steps)


def _bijection(args, out):
    from .bijection import path_to_tree, tree_to_path
    from .fuss_dyck import parse_path
    from .ncst import parse_tree

    if args.path is not None:
        out.line(str(path_to_tree(parse_path(args.path))))
    else:
        out.line(tree_to_path(parse_tree(args.tree)).steps)


def _walk(args, out):
    from .bijection import path_to_tree
    from .chains import RngStream, am_step, fm_step
    from .fuss_dyck import top_path

    rng = RngStream(args.seed)
    state = top_path(args.n)
    step = am_step
    if args.chain == "fm":
        state, step = path_to_tree(state), fm_step
    counts = Counter()
    if args.emit == "trace":
        out.row("t", "state")
        out.row(0, state)
    for t in range(1, args.steps + 1):
        state = step(state, rng)
        if args.emit == "trace":
            out.row(t, state)
        else:
            counts[str(state)] += 1
    if args.emit == "histogram":
        out.row("state", "count")
        for key in sorted(counts):
            out.row(key, counts[key])


def _path(args, out):
    from .canonical import build_path, encode
    from .fuss_dyck import parse_path

    path = build_path(parse_path(args.source), parse_path(args.target))
    c = path.classification
    steps = [
        {
            "index": st.index,
            "tree": str(st.after),
            "removed": list(st.removed),
            "added": list(st.added),
            "tag": st.tag,
            "depth": st.depth,
            "encoding": list(encode(path, k).astuple()),
        }
        for k, st in enumerate(path.steps)
    ]
    out.line(json.dumps({
        "from": path.start.steps,
        "to": path.end.steps,
        "start_tree": str(path.states()[0]),
        "direction": c.direction.value,
        "move_type": c.move_type.value,
        "omitted": list(path.omitted),
        "steps": steps,
    }, indent=2))


def _congestion(args, out):
    from .canonical import congestion_census

    rep = congestion_census(args.n, cap=args.cap)
    out.row("z", "z_prime", "count")
    for (z, z2), count in sorted(rep.usage.items()):
        out.row(z, z2, count)
    out.summary(rep.summary())


def _spectrum(args, out):
    from .spectral import absolute_gap, spectral_gap, transition_matrix

    m = transition_matrix(args.chain, args.n, cap=args.cap)
    single = m.size < 2    # one state: the gap is undefined, reported as null
    gap = None if single else spectral_gap(m)
    out.line(json.dumps({
        "chain": m.chain_kind,
        "n": args.n,
        "states": m.size,
        "gap": gap,
        "abs_gap": None if single else absolute_gap(m),
        "relaxation": None if single else 1.0 / gap,
    }, sort_keys=True))


def _mix(args, out):
    from .spectral import transition_matrix, tv_mixing_time

    rep = tv_mixing_time(transition_matrix(args.chain, args.n), cap=args.cap)
    out.row("t", "d")
    for t, d in rep.d_curve:
        out.row(t, f"{d:.12g}")
    out.summary(rep.summary())


def _couple(args, out):
    from .spectral import coalescence_experiment, fit_loglog

    out.row("n", "replicate", "time")
    ns, means = [], []
    for n in args.n_list:
        stats = coalescence_experiment(n, args.seeds, seed=args.seed, cap=args.cap)
        for k, t in enumerate(stats.times):
            out.row(n, k, t)
        ns.append(n)
        means.append(stats.mean)
    summary = {"n": ns, "mean": means}
    if len([n for n in ns if n > 1]) >= 2:
        pts = [(n, m) for n, m in zip(ns, means) if n > 1]
        summary["fit"] = fit_loglog([a for a, _ in pts], [b for _, b in pts])
    out.summary(summary)


def _verify(args, out):
    from .verify import run_checks

    results = run_checks(args.max_n)
    out.row("check", "ok", "detail")
    for r in results:
        out.row(r.name, int(r.ok), r.detail)
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAIL


HANDLERS = {
    "count": _count,
    "enumerate": _enumerate,
    "bijection": _bijection,
    "walk": _walk,
    "path": _path,
    "congestion": _congestion,
    "spectrum": _spectrum,
    "mix": _mix,
    "couple": _couple,
    "verify": _verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    stream = open(args.output, "w") if args.output else sys.stdout
    try:
        out = _Out(stream, args.command, args.seed)
        code = HANDLERS[args.command](args, out)
    except NcstFlipError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        if stream is not sys.stdout:
            stream.close()
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
