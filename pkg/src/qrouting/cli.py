"""Command-line surface.

Subcommands: gen, analyze, route, exact, certify, simulate. JSON is the
canonical output; identical inputs and seeds produce byte-identical files.
Exit codes are part of the contract: 0 ok, 2 usage, 3 disconnected input,
4 enumeration/size limit, 5 internal verification failure, 6 randomized
retries exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import (
    BadParamsError,
    BadSizesError,
    DisconnectedError,
    QRoutingError,
    RetriesExhaustedError,
    TooLargeError,
    TooManyQubitsError,
    UnknownFamilyError,
)
from .graphs import Graph, from_edgelist, from_json, generate, is_connected
from .routing import Permutation, Schedule, parse_permutation, verify_schedule

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DISCONNECTED = 3
EXIT_LIMIT = 4
EXIT_VERIFY = 5
EXIT_RETRIES = 6


@dataclass
class RunConfig:
    """Resolved options shared by the subcommands."""

    seed: int | None = None
    alpha: float = 4.0
    limit: int | None = None
    fmt: str = "json"
    out: str | None = None


def _emit(payload: dict, cfg: RunConfig) -> None:
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=_coerce)
    if cfg.out:
        Path(cfg.out).write_text(text + "\n")
    else:
        print(text)


def _coerce(obj):
    if isinstance(obj, Fraction):
        return [obj.numerator, obj.denominator]
    if isinstance(obj, frozenset):
        return sorted(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError(f"not JSON-serializable: {type(obj)}")


def _load_graph(path: str) -> Graph:
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return from_json(text)
    return from_edgelist(text)


def _load_perm(path: str, n: int | None = None) -> Permutation:
    return parse_permutation(Path(path).read_text(), n)


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args: argparse.Namespace, cfg: RunConfig) -> int:
    params: dict = {}
    if args.family == "grid":
        params = {"l1": args.l1, "l2": args.l2}
        if args.l1 is None or args.l2 is None:
            raise BadParamsError("grid needs --l1 and --l2")
    elif args.family == "gnp":
        if args.p is None or args.seed is None:
            raise BadParamsError("gnp needs --p and --seed")
        params = {"n": args.n, "p": args.p, "seed": args.seed}
    else:
        if args.n is None:
            raise BadParamsError(f"{args.family} needs --n")
        params = {"n": args.n}
    g = generate(args.family, **params)
    if args.format == "edgelist":
        text = g.to_edgelist()
    else:
        text = g.to_json() + "\n"
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace, cfg: RunConfig) -> int:
    from .bounds import bounds_report

    g = _load_graph(args.graph)
    if not is_connected(g):
        print("error: graph is disconnected", file=sys.stderr)
        return EXIT_DISCONNECTED
    try:
        report = bounds_report(g, alpha=cfg.alpha, limit=cfg.limit, seed=cfg.seed)
    except TooLargeError as exc:
        partial = {
            "version": __version__,
            "alpha": cfg.alpha,
            "seed": cfg.seed,
            "n": g.n,
            "limit_exceeded": True,
            "detail": str(exc),
        }
        _emit(partial, cfg)
        return EXIT_LIMIT
    report["limit_exceeded"] = False
    _emit(report, cfg)
    return EXIT_OK


def cmd_route(args: argparse.Namespace, cfg: RunConfig) -> int:
    g = _load_graph(args.graph)
    if not is_connected(g):
        print("error: graph is disconnected", file=sys.stderr)
        return EXIT_DISCONNECTED
    pi = (
        _load_perm(args.perm, g.n)
        if args.perm
        else Permutation.identity(g.n)
    )
    seed = cfg.seed if cfg.seed is not None else 0
    if args.alg == "odd_even":
        from .routing import route_odd_even

        schedule = route_odd_even(g.n, pi)
    elif args.alg == "complete":
        from .routing import route_complete

        schedule = route_complete(g.n, pi)
    elif args.alg == "spanning_tree":
        from .routing import route_spanning_tree

        schedule = route_spanning_tree(g, pi)
    elif args.alg == "random_walk":
        from .walks import route_general

        schedule = route_general(g, pi, seed)
    elif args.alg == "fast_partition":
        from .routing import route_fast_partition

        if not args.cut:
            raise BadParamsError("fast_partition needs --cut v1,v2,...")
        x = [int(v) for v in args.cut.split(",")]
        fs = route_fast_partition(g, x, pi)
        payload = {
            "algorithm": args.alg,
            "seed": seed,
            "version": __version__,
            "cut_rounds": fs.cut_rounds,
            "cut_matchings": [[list(e) for e in m] for m in fs.cut_matchings],
            "free_phases": [list(p) for p in fs.free_phases],
        }
        _emit(payload, cfg)
        return EXIT_OK
    else:
        raise BadParamsError(f"unknown algorithm {args.alg!r}")
    check = verify_schedule(g, pi, schedule)
    if not check.valid:
        print(f"error: internal verification failed: {check.failure}", file=sys.stderr)
        return EXIT_VERIFY
    payload = {
        "algorithm": args.alg,
        "seed": seed,
        "version": __version__,
        "depth": schedule.depth,
        "rounds": [[list(e) for e in r] for r in schedule.rounds],
    }
    _emit(payload, cfg)
    print(f"depth {schedule.depth}", file=sys.stderr)
    return EXIT_OK


def cmd_exact(args: argparse.Namespace, cfg: RunConfig) -> int:
    from .exact import exact_rt, exact_rt_pi

    g = _load_graph(args.graph)
    if not is_connected(g):
        print("error: graph is disconnected", file=sys.stderr)
        return EXIT_DISCONNECTED
    if args.worst:
        res = exact_rt(g)
        payload = {
            "version": __version__,
            "depth": res.depth,
            "worst_pi": list(res.worst_pi.mapping),
            "explored": res.explored,
        }
    else:
        if not args.perm:
            raise BadParamsError("exact needs --perm or --worst")
        pi = _load_perm(args.perm, g.n)
        res = exact_rt_pi(g, pi)
        payload = {
            "version": __version__,
            "depth": res.depth,
            "witness_rounds": [
                [list(e) for e in r] for r in res.witness_schedule.rounds
            ],
            "explored": res.explored,
        }
    _emit(payload, cfg)
    return EXIT_OK


def cmd_certify(args: argparse.Namespace, cfg: RunConfig) -> int:
    from .bounds import qrt_diameter_lb, qrt_vertex_lb
    from .exact import exact_rt_pi

    g = _load_graph(args.graph)
    if not is_connected(g):
        print("error: graph is disconnected", file=sys.stderr)
        return EXIT_DISCONNECTED
    pi = _load_perm(args.perm, g.n)
    schedule = Schedule.from_json(Path(args.schedule).read_text())
    check = verify_schedule(g, pi, schedule)
    verdict: dict = {
        "version": __version__,
        "valid": check.valid,
        "depth": check.depth,
        "failure": check.failure,
    }
    if check.valid:
        try:
            opt = exact_rt_pi(g, pi)
            verdict["exact_optimum"] = opt.depth
            verdict["optimal"] = check.depth == opt.depth
        except TooLargeError:
            verdict["exact_optimum"] = None
        lbs = {"diameter_lb": qrt_diameter_lb(g)}
        try:
            lbs["vertex_lb"] = qrt_vertex_lb(g, cfg.limit)
        except TooLargeError:
            pass
        verdict["lower_bounds"] = lbs
        # worst-case bounds; a light permutation may legitimately sit below them
        verdict["depth_ge_lower_bounds"] = all(
            check.depth >= float(v) for v in lbs.values()
        )
    _emit(verdict, cfg)
    if not check.valid:
        return EXIT_VERIFY
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace, cfg: RunConfig) -> int:
    from . import protocols

    seed = cfg.seed if cfg.seed is not None else 0
    if args.protocol == "w_transfer":
        res = protocols.w_transfer(args.s)
        payload = {
            "protocol": "w_transfer",
            "s": res.s,
            "fidelity": res.fidelity,
            "elapsed": res.elapsed,
            "encoded_ok": res.encoded_ok,
        }
        trace_rows = None
    elif args.protocol == "fast_cz":
        res = protocols.fast_cz(args.boundary)
        payload = {
            "protocol": "fast_cz",
            "boundary": res.boundary_size,
            "elapsed": res.elapsed,
            "gate_fidelity": res.gate_fidelity,
            "phase_11": res.phase_11,
            "term_normalized": res.term_normalized,
        }
        trace_rows = None
    elif args.protocol == "algorithm1":
        res = protocols.run_algorithm1(2 * args.k * args.delta, args.delta, args.k)
        payload = {
            "protocol": "algorithm1",
            "x_size": res.x_size,
            "delta_size": res.delta_size,
            "k": res.k,
            "depth": res.depth,
            "trace": list(res.trace),
            "delta_s_combined": res.delta_s_combined,
            "ste_ok": res.ste_ok,
            "saturated": list(res.saturated),
        }
        trace_rows = [(i, s) for i, s in enumerate(res.trace)]
    elif args.protocol == "barbell":
        res = protocols.barbell_route_sim(args.n, seed=seed)
        payload = {
            "protocol": "barbell",
            "n": res.n,
            "total_time": res.total_time,
            "fidelity": res.fidelity,
            "mode": res.mode,
            "transfers": res.transfers,
        }
        trace_rows = None
    else:
        raise BadParamsError(f"unknown protocol {args.protocol!r}")
    payload["seed"] = seed
    payload["version"] = __version__
    _emit(payload, cfg)
    if args.csv and trace_rows is not None:
        lines = ["round,entropy_bits"] + [f"{i},{s}" for i, s in trace_rows]
        Path(args.csv).write_text("\n".join(lines) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument wiring


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qrouting", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--alpha", type=float, default=4.0)
    common.add_argument("--limit", type=int, default=None,
                        help="enumeration limit override")
    common.add_argument("--out", default=None, help="output path (stdout default)")

    g = sub.add_parser("gen", parents=[common], help="generate a named graph family")
    g.add_argument("--family", required=True)
    g.add_argument("--n", type=int, default=None)
    g.add_argument("--p", type=float, default=None)
    g.add_argument("--l1", type=int, default=None)
    g.add_argument("--l2", type=int, default=None)
    g.add_argument("--format", choices=["edgelist", "json"], default="edgelist")
    g.set_defaults(fn=cmd_gen)

    a = sub.add_parser("analyze", parents=[common], help="full bounds report")
    a.add_argument("--graph", required=True)
    a.set_defaults(fn=cmd_analyze)

    r = sub.add_parser("route", parents=[common], help="construct a verified schedule")
    r.add_argument("--graph", required=True)
    r.add_argument("--perm", default=None)
    r.add_argument(
        "--alg",
        required=True,
        choices=["odd_even", "complete", "spanning_tree", "random_walk", "fast_partition"],
    )
    r.add_argument("--cut", default=None, help="comma-separated X for fast_partition")
    r.set_defaults(fn=cmd_route)

    e = sub.add_parser("exact", parents=[common], help="brute-force optimum")
    e.add_argument("--graph", required=True)
    e.add_argument("--perm", default=None)
    e.add_argument("--worst", action="store_true")
    e.set_defaults(fn=cmd_exact)

    c = sub.add_parser("certify", parents=[common], help="check a schedule file")
    c.add_argument("--graph", required=True)
    c.add_argument("--perm", required=True)
    c.add_argument("--schedule", required=True)
    c.set_defaults(fn=cmd_certify)

    s = sub.add_parser("simulate", parents=[common], help="run a protocol simulation")
    s.add_argument("--protocol", required=True,
                   choices=["w_transfer", "fast_cz", "algorithm1", "barbell"])
    s.add_argument("--s", type=int, default=1)
    s.add_argument("--boundary", type=int, default=1)
    s.add_argument("--delta", type=int, default=1)
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--csv", default=None, help="write the entropy trace as CSV")
    s.set_defaults(fn=cmd_simulate)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(
        seed=args.seed,
        alpha=args.alpha,
        limit=args.limit,
        out=args.out,
    )
    try:
        return args.fn(args, cfg)
    except (BadParamsError, BadSizesError, UnknownFamilyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DisconnectedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DISCONNECTED
    except (TooLargeError, TooManyQubitsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except RetriesExhaustedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RETRIES
    except AssertionError as exc:
        print(f"error: internal verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except QRoutingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
