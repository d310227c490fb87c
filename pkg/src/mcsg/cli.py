"""Command-line front end: solving, generation, benchmarking, rendering.

Exit codes: 0 success, 1 usage error, 2 solver refusal, 3 internal
invariant violation.  Every solution is validated against the spanning
check before it is written.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import approx3, collinear, exact2, gadgets, mst, oracle
from .core import (
    FormatError,
    Instance,
    RefusalError,
    Solution,
    as_edges,
    is_csg,
    load_instance,
    make_solution,
    generate_collinear,
    generate_random,
    instance_to_json,
    solution_to_json,
)
from .render import RenderStyle, render_svg

EXIT_OK, EXIT_USAGE, EXIT_REFUSED, EXIT_INVARIANT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit 2; usage errors are 1 here
        self.print_usage(sys.stderr)
        raise SystemExit_Usage(message)


class SystemExit_Usage(Exception):
    pass


def _read_instance(path: str) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        return load_instance(fh)


def _is_collinear(inst: Instance) -> bool:
    try:
        collinear.collinear_order(inst)
        return True
    except RefusalError:
        return False


def solve_dispatch(inst: Instance, mode: str = "auto", *, m_limit: int = 9,
                   rho: float = 1.21, k_guard: int = 6,
                   budget: oracle.OracleBudget | None = None) -> Solution:
    """Pick a solver: exact for k <= 2, DP for collinear inputs, A2 for k = 3,
    the pairing approximation otherwise."""
    if mode == "auto":
        if inst.k <= 2:
            mode = "exact2"
        elif _is_collinear(inst) and inst.k <= k_guard:
            mode = "dp"
        elif inst.k == 3:
            mode = "a2"
        else:
            mode = "pairing"
    if mode == "exact2":
        if inst.k == 1:
            members = inst.color_class(1)
            local = mst.euclidean_mst(inst.xy[members])
            edges = members[local] if local.size else as_edges(())
            return make_solution(inst, edges, "exact2", ratio_bound=1.0)
        if inst.k != 2:
            raise FormatError("mode exact2 needs k <= 2 (use 'exact2' subcommand with --pair)")
        return exact2.solve_pair(exact2.project_pair(inst, 1, 2), m_limit=m_limit)
    if mode == "dp":
        return collinear.dp_solve(inst, k_guard=k_guard)
    if mode == "a1":
        return approx3.approx_a1(inst, m_limit=m_limit, config=approx3.ApproxConfig(rho))
    if mode == "a2":
        return approx3.approx_a2(inst, m_limit=m_limit, config=approx3.ApproxConfig(rho))
    if mode == "pairing":
        blocks = [(c,) if c + 1 > inst.k else (c, c + 1) for c in range(1, inst.k + 1, 2)]
        return approx3.approx_pairing(inst, blocks, m_limit=m_limit)
    if mode == "oracle":
        return oracle.brute_force(inst, budget)
    raise FormatError(f"unknown mode: {mode}")


def _emit_solution(inst: Instance, sol: Solution, output: str | None,
                   svg: str | None = None) -> None:
    if not is_csg(inst, sol.edges):
        raise InternalInvariantError("produced edge set is not a colored spanning graph")
    text = solution_to_json(sol)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text)
    if svg:
        with open(svg, "wb") as fh:
            fh.write(render_svg(inst, sol, RenderStyle()))


class InternalInvariantError(RuntimeError):
    pass


def _build_parser() -> _Parser:
    p = _Parser(prog="mcsg", description="Minimum colored spanning graph toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="dispatch to the best applicable solver")
    sp.add_argument("--input", required=True)
    sp.add_argument("--output")
    sp.add_argument("--mode", default="auto",
                    choices=["auto", "exact2", "a1", "a2", "dp", "pairing", "oracle"])
    sp.add_argument("--m-limit", type=int, default=9)
    sp.add_argument("--rho", type=float, default=1.21)
    sp.add_argument("--k-guard", type=int, default=6)
    sp.add_argument("--svg", help="also write a rendering of the solution")

    sp = sub.add_parser("exact2", help="exact solver for one color pair")
    sp.add_argument("--input", required=True)
    sp.add_argument("--pair", default="1,2")
    sp.add_argument("--merge-groups")
    sp.add_argument("--m-limit", type=int, default=9)
    sp.add_argument("--output")

    sp = sub.add_parser("approx", help="approximation algorithms for k = 3")
    sp.add_argument("--input", required=True)
    sp.add_argument("--algorithm", required=True, choices=["a1", "a2"])
    sp.add_argument("--rho", type=float, default=1.21)
    sp.add_argument("--m-limit", type=int, default=9)
    sp.add_argument("--output")
    sp.add_argument("--svg", help="also write a rendering of the solution")

    sp = sub.add_parser("collinear", help="exact DP for collinear instances")
    sp.add_argument("--input", required=True)
    sp.add_argument("--k-guard", type=int, default=6)
    sp.add_argument("--stats", action="store_true",
                    help="print per-cut state counts")
    sp.add_argument("--output")
    sp.add_argument("--svg", help="also write a rendering of the solution")

    sp = sub.add_parser("oracle", help="brute-force ground truth")
    sp.add_argument("--input", required=True)
    sp.add_argument("--max-edges", type=int, default=22)
    sp.add_argument("--star", action="store_true",
                    help="restrict to star-normal-form candidates (collinear)")
    sp.add_argument("--output")
    sp.add_argument("--svg", help="also write a rendering of the solution")

    sp = sub.add_parser("prune", help="print the forced edges per color")
    sp.add_argument("--input", required=True)

    sp = sub.add_parser("gen", help="instance generators")
    gen_sub = sp.add_subparsers(dest="family", required=True)
    for fam in ("random", "collinear"):
        gp = gen_sub.add_parser(fam)
        gp.add_argument("--n", type=int, required=True)
        gp.add_argument("--k", type=int, default=3)
        gp.add_argument("--fraction", type=float, default=0.5)
        gp.add_argument("--seed", type=int, default=0)
        gp.add_argument("--output", required=True)
    gp = gen_sub.add_parser("gadget")
    gp.add_argument("--cnf", required=True)
    gp.add_argument("--out", required=True)
    gp.add_argument("--witness", help="file with one 0/1 per variable")
    gp.add_argument("--witness-out")

    sp = sub.add_parser("bench", help="ratio benchmark against the oracle")
    sp.add_argument("--family", default="random", choices=["random", "collinear", "allblack"])
    sp.add_argument("--algos", default="a1,a2")
    sp.add_argument("--seeds", type=int, default=50)
    sp.add_argument("--n-max", type=int, default=6)
    sp.add_argument("--k", type=int, default=3)
    sp.add_argument("--fraction", type=float, default=0.5)
    sp.add_argument("--rho", type=float, default=1.21)
    sp.add_argument("--out", required=True)

    sp = sub.add_parser("render", help="draw an instance (and solution) as SVG")
    sp.add_argument("--input", required=True)
    sp.add_argument("--solution")
    sp.add_argument("--output", required=True)
    return p


def _cmd_solve(args) -> int:
    inst = _read_instance(args.input)
    sol = solve_dispatch(inst, args.mode, m_limit=args.m_limit, rho=args.rho,
                         k_guard=args.k_guard)
    _emit_solution(inst, sol, args.output, args.svg)
    return EXIT_OK


def _cmd_exact2(args) -> int:
    inst = _read_instance(args.input)
    c1, c2 = (int(x) for x in args.pair.split(","))
    merge = ()
    if args.merge_groups:
        with open(args.merge_groups, "r", encoding="utf-8") as fh:
            merge = tuple(frozenset(int(i) for i in grp) for grp in json.load(fh))
    proj = exact2.project_pair(inst, c1, c2, merge)
    sol = exact2.solve_pair(proj, m_limit=args.m_limit)
    if not exact2.spans_projection(proj, sol.edges):
        raise InternalInvariantError("pair solution does not span its projection")
    text = solution_to_json(sol)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text)
    return EXIT_OK


def _cmd_approx(args) -> int:
    inst = _read_instance(args.input)
    config = approx3.ApproxConfig(steiner_ratio_bound=args.rho)
    fn = approx3.approx_a1 if args.algorithm == "a1" else approx3.approx_a2
    sol = fn(inst, m_limit=args.m_limit, config=config)
    _emit_solution(inst, sol, args.output, args.svg)
    return EXIT_OK


def _cmd_collinear(args) -> int:
    inst = _read_instance(args.input)
    sol, stats = collinear.dp_solve_with_stats(inst, k_guard=args.k_guard,
                                               collect_stats=args.stats)
    if args.stats and stats is not None:
        for i, (n_states, max_pi) in enumerate(
            zip(stats.per_cut_states, stats.per_cut_max_pi_per_color), start=1
        ):
            print(f"cut {i}: states={n_states} max_partitions_per_color={max_pi}",
                  file=sys.stderr)
    _emit_solution(inst, sol, args.output, args.svg)
    return EXIT_OK


def _cmd_oracle(args) -> int:
    inst = _read_instance(args.input)
    budget = oracle.OracleBudget(max_candidate_edges=args.max_edges)
    sol = oracle.brute_force(inst, budget, star_restricted=args.star)
    _emit_solution(inst, sol, args.output, args.svg)
    return EXIT_OK


def _cmd_prune(args) -> int:
    inst = _read_instance(args.input)
    for c in range(1, inst.k + 1):
        forest = mst.forced_edges(inst, c)
        pairs = " ".join(f"({a},{b})" for a, b in forest.edges)
        print(f"color {c}: {forest.edges.shape[0]} forced edges "
              f"({forest.n_components} components) {pairs}")
    return EXIT_OK


def _cmd_gen(args) -> int:
    if args.family == "random":
        inst = generate_random(args.n, args.k, args.fraction, args.seed)
    elif args.family == "collinear":
        inst = generate_collinear(args.n, args.k, args.fraction, args.seed)
    else:
        return _cmd_gen_gadget(args)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(instance_to_json(inst))
    return EXIT_OK


def _cmd_gen_gadget(args) -> int:
    with open(args.cnf, "r", encoding="utf-8") as fh:
        cnf = gadgets.parse_cnf(fh.read())
    g = gadgets.build_gadget(cnf)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(instance_to_json(g.instance))
    print(json.dumps({"r": g.r, "active_points": int(g.active_points.size),
                      "epsilon": g.epsilon, "delta": g.delta, "W": g.W}))
    if args.witness:
        with open(args.witness, "r", encoding="utf-8") as fh:
            bits = [tok not in ("0", "false", "False") for tok in fh.read().split()]
        sol = gadgets.build_witness(g, bits)
        if not is_csg(g.instance, sol.edges):
            raise InternalInvariantError("witness is not a colored spanning graph")
        with open(args.witness_out or "witness.json", "w", encoding="utf-8") as fh:
            fh.write(solution_to_json(sol))
    return EXIT_OK


def _cmd_bench(args) -> int:
    report = oracle.ratio_bench(
        args.family,
        [a.strip() for a in args.algos.split(",") if a.strip()],
        args.seeds,
        n_max=args.n_max,
        k=args.k,
        fraction=args.fraction,
        rho=args.rho,
    )
    report.write_csv(args.out)
    for algo in sorted({r.algo for r in report.rows}):
        print(f"{algo}: max ratio {report.max_ratio(algo):.6f} "
              f"mean {report.mean_ratio(algo):.6f} bound {report.bounds.get(algo)}")
    bad = report.violations()
    if bad:
        print(f"{len(bad)} bound violations", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def _cmd_render(args) -> int:
    inst = _read_instance(args.input)
    sol = None
    if args.solution:
        from .core import solution_from_json

        with open(args.solution, "r", encoding="utf-8") as fh:
            sol = solution_from_json(fh)
    data = render_svg(inst, sol, RenderStyle())
    with open(args.output, "wb") as fh:
        fh.write(data)
    return EXIT_OK


_COMMANDS = {
    "solve": _cmd_solve,
    "exact2": _cmd_exact2,
    "approx": _cmd_approx,
    "collinear": _cmd_collinear,
    "oracle": _cmd_oracle,
    "prune": _cmd_prune,
    "gen": _cmd_gen,
    "bench": _cmd_bench,
    "render": _cmd_render,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except SystemExit_Usage as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RefusalError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (InternalInvariantError, AssertionError, RuntimeError) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    raise SystemExit(main())
