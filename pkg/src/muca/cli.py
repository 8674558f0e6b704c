"""``muca`` command-line front end.

Exit codes: 0 on success, 1 on usage or input errors, 2 when a node or time
limit stopped a solve before optimality was proven.
"""

from __future__ import annotations

import argparse
import sys

from .bench import BenchConfig, emit_csv, run_bench
from .bounds import BoundSkipped, Method, Subproblem, avg_price_bound, lp_bound, parse_methods, projection_bound
from .greedy import greedy_allocate
from .instances import (
    GenParams,
    adversarial_pair,
    from_graph,
    gen_random,
    normalized_counterexample,
    parse_edge_list,
)
from .model import InstanceError, format_price, read_instance, serialize_instance
from .ordering import Criterion
from .search import SolveConfig, brute_force, solve

EXIT_OK, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(t) for t in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None
    return lo, hi


def _criterion(text: str) -> Criterion:
    try:
        return Criterion.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _methods(text: str) -> frozenset[Method]:
    try:
        return parse_methods(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    if args.kind == "graph":
        with open(args.edges, encoding="utf-8") as fh:
            graph, caps = parse_edge_list(fh.read())
        _emit(serialize_instance(from_graph(graph, caps)), args.output)
    elif args.kind == "adversarial":
        first, second = adversarial_pair(args.caps, args.criterion)
        if args.output:
            _emit(serialize_instance(first), f"{args.output}-I.muca")
            _emit(serialize_instance(second), f"{args.output}-II.muca")
        else:
            sys.stdout.write("# problem I\n" + serialize_instance(first))
            sys.stdout.write("# problem II\n" + serialize_instance(second))
    elif args.kind == "counterexample":
        _emit(serialize_instance(normalized_counterexample(args.k)), args.output)
    else:
        if args.goods is None or args.bids is None:
            raise InstanceError("gen needs --goods and --bids")
        params = GenParams(
            goods=args.goods,
            bids=args.bids,
            cap_range=args.cap,
            req_prob=args.req_prob,
            qty_range=(1, args.qty_max),
            price_scale=args.price_scale,
            seed=args.seed,
        )
        _emit(serialize_instance(gen_random(params)), args.output)
    return EXIT_OK


def _print_scores(inst, ranking) -> None:
    for i in ranking.order:
        print(f"SCORE {i} {ranking.scores[i]!r}")


def cmd_solve(args) -> int:
    inst = read_instance(args.instance)
    cfg = SolveConfig(
        criterion=args.criterion,
        bound_methods=args.bounds,
        seed_incumbent=not args.no_seed,
        node_limit=args.node_limit,
        time_limit=args.time_limit,
    )
    res = solve(inst, cfg)
    print(f"VALUE {format_price(res.best.value, inst.scale)}")
    print("WINNERS " + " ".join(map(str, res.best.winners)))
    print(f"OPTIMAL {'true' if res.proven_optimal else 'false'}")
    print(f"NODES {res.nodes_visited}")
    print(f"NODE_FRACTION {res.node_fraction!r}")
    print(f"TIME_MS {res.time_total * 1e3:.3f}")
    print(f"TIME_TO_BEST_MS {res.time_to_best * 1e3:.3f}")
    print(f"NODES_TO_BEST {res.nodes_to_best}")
    return EXIT_OK if res.proven_optimal else EXIT_LIMIT


def cmd_greedy(args) -> int:
    inst = read_instance(args.instance)
    res = greedy_allocate(inst, args.criterion)
    print(f"VALUE {format_price(res.solution.value, inst.scale)}")
    print("WINNERS " + " ".join(map(str, res.solution.winners)))
    if args.explain:
        _print_scores(inst, res.order_used)
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst = read_instance(args.instance)
    sol = brute_force(inst)
    print(f"VALUE {format_price(sol.value, inst.scale)}")
    print("WINNERS " + " ".join(map(str, sol.winners)))
    return EXIT_OK


def cmd_bound(args) -> int:
    inst = read_instance(args.instance)
    sub = Subproblem.root(inst)
    methods = args.methods or frozenset({Method.AVG, Method.PROJ, Method.LP})
    values = []
    if Method.AVG in methods:
        r = avg_price_bound(sub)
        values.append(r.value)
        print(f"avg {r.value!r}")
    if Method.PROJ in methods:
        for j in range(inst.n):
            try:
                r = projection_bound(sub, j)
            except BoundSkipped:
                print(f"proj[{j}] skipped")
                continue
            values.append(r.value)
            print(f"proj[{j}] {r.value!r}")
    if Method.LP in methods:
        try:
            r = lp_bound(sub)
        except BoundSkipped:
            print("lp skipped")
        else:
            values.append(r.value)
            print(f"lp {r.value!r} integral={'true' if r.lp_integral else 'false'}")
            if args.explain:
                print("lp_x " + " ".join(f"{x:.6g}" for x in r.lp_x))
    print(f"min {min(values)!r}" if values else "min inf")
    return EXIT_OK


def cmd_bench(args) -> int:
    cfg = BenchConfig(
        goods_list=args.goods,
        bids_list=args.bids,
        trials=args.trials,
        base_seed=args.seed,
        solver=SolveConfig(criterion=args.criterion, bound_methods=args.bounds, seed_incumbent=not args.no_seed),
        time_limit=args.time_limit,
        jobs=args.jobs,
    )
    rows = run_bench(cfg)
    _emit(emit_csv(rows), args.output)
    return EXIT_LIMIT if any(r.flagged for r in rows) else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="muca", description="Winner determination for multi-unit combinatorial auctions.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate an instance")
    gen.add_argument("--goods", type=int)
    gen.add_argument("--bids", type=int)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--req-prob", type=float, default=0.2)
    gen.add_argument("--qty-max", type=int, default=3)
    gen.add_argument("--cap", type=_range, default=(1, 5), metavar="LO:HI")
    gen.add_argument("--price-scale", type=int, default=2)
    gen.add_argument("-o", "--output")
    gen.set_defaults(func=cmd_gen, kind=None)
    kinds = gen.add_subparsers(dest="kind")
    g = kinds.add_parser("graph", help="independent-set reduction of an edge list")
    g.add_argument("--edges", required=True)
    g.add_argument("-o", "--output")
    a = kinds.add_parser("adversarial", help="the two-auction worst case for greedy ranking")
    a.add_argument("--caps", type=_int_list, required=True)
    a.add_argument("--criterion", type=_criterion, help="pick the unit bid this criterion ranks first")
    a.add_argument("-o", "--output", help="write PREFIX-I.muca and PREFIX-II.muca")
    c = kinds.add_parser("counterexample", help="worst case for the normalized square-root criterion")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("-o", "--output")

    s = sub.add_parser("solve", help="exact branch-and-bound solve")
    s.add_argument("--criterion", type=_criterion, default=Criterion())
    s.add_argument("--bounds", type=_methods, default=frozenset({Method.AVG}), help="avg,proj,lp or none")
    s.add_argument("--no-seed", action="store_true")
    s.add_argument("--node-limit", type=int)
    s.add_argument("--time-limit", type=float, help="seconds")
    s.add_argument("instance")
    s.set_defaults(func=cmd_solve)

    gr = sub.add_parser("greedy", help="greedy allocation")
    gr.add_argument("--criterion", type=_criterion, default=Criterion())
    gr.add_argument("--explain", action="store_true")
    gr.add_argument("instance")
    gr.set_defaults(func=cmd_greedy)

    b = sub.add_parser("bound", help="upper bounds on the root problem")
    b.add_argument("--methods", type=_methods, default=frozenset({Method.AVG, Method.PROJ, Method.LP}))
    b.add_argument("--explain", action="store_true")
    b.add_argument("instance")
    b.set_defaults(func=cmd_bound)

    be = sub.add_parser("bench", help="batch experiments to CSV")
    be.add_argument("--goods", type=_int_list, required=True)
    be.add_argument("--bids", type=_int_list, required=True)
    be.add_argument("--trials", type=int, default=10)
    be.add_argument("--seed", type=int, default=0)
    be.add_argument("--criterion", type=_criterion, default=Criterion())
    be.add_argument("--bounds", type=_methods, default=frozenset({Method.AVG}))
    be.add_argument("--no-seed", action="store_true")
    be.add_argument("--time-limit", type=float, help="seconds per solve")
    be.add_argument("--jobs", type=int, default=1)
    be.add_argument("-o", "--output")
    be.set_defaults(func=cmd_bench)

    o = sub.add_parser("oracle", help="exhaustive optimum (at most 25 bids)")
    o.add_argument("instance")
    o.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InstanceError, ValueError, OSError) as exc:
        print(f"muca: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
