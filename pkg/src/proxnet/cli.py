"""Command-line interface: composable subcommands over the CSV/JSON formats."""
from __future__ import annotations

import argparse
import json
import math
import sys

from .attack import AttackStrategy, critical_fraction, robustness_index, run_attack, save_curve
from .community import grid_like_ratio, louvain, modularity, sparsity_index
from .experiments import ExperimentConfig, run_experiment
from .graph import Graph, average_degree, load_edges, save_edges
from .mesh import load_mesh, save_mesh, synthesize_mesh
from .nullmodels import (RelocationSpec, RewireSpec, relocate_to_lattice,
                         rewire_degree_preserving)
from .points import (PointSet, lattice_points, load_points, place_inverse,
                     place_population, place_uniform, save_points)
from .proximity import build_gg, build_rng


def _load_graph(points_path, edges_path) -> Graph:
    ps = load_points(points_path)
    return Graph.from_edges(ps.points, load_edges(edges_path))


def _cmd_generate(args) -> int:
    if args.what == "mesh":
        mesh = synthesize_mesh(rows=args.rows, cols=args.cols,
                               total_population=args.total_pop,
                               decay_rate=args.decay, seed=args.seed,
                               concentration=args.concentration,
                               cell_size=args.cell_size)
        save_mesh(mesh, args.out)
        print(f"wrote mesh {mesh.rows}x{mesh.cols} to {args.out}")
        return 0
    mesh = load_mesh(args.mesh) if args.mesh else None
    if args.placement == "lattice":
        side = math.isqrt(args.n)
        if side * side != args.n:
            raise ValueError(f"--n {args.n} is not a perfect square")
        spacing = args.spacing if args.spacing else (
            mesh.cell_size if mesh is not None else 1.0)
        ps = lattice_points(side, spacing)
    elif args.placement == "uni":
        if args.seed is None:
            raise ValueError("--placement uni needs --seed")
        if args.region:
            region = tuple(float(v) for v in args.region.split(","))
            if len(region) != 4:
                raise ValueError("--region must be x0,y0,x1,y1")
        elif mesh is not None:
            region = mesh.frame()
        else:
            raise ValueError("--placement uni needs --mesh or --region")
        snap = mesh.cell_size if (args.snap and mesh is not None) else None
        ps = place_uniform(region, args.n, args.seed, snap_cell_size=snap)
    else:
        if mesh is None:
            raise ValueError(f"--placement {args.placement} needs --mesh")
        fn = place_population if args.placement == "pop" else place_inverse
        ps = fn(mesh, args.n, args.seed)
    save_points(ps, args.out)
    print(f"wrote {ps.n} points to {args.out}")
    return 0


def _cmd_build(args) -> int:
    ps = load_points(args.points)
    builder = build_rng if args.kind == "rng" else build_gg
    g = builder(ps, method=args.method)
    save_edges(g, args.out)
    print(f"wrote {g.edge_total} {args.kind} edges to {args.out}")
    return 0


def _cmd_attack(args) -> int:
    g = _load_graph(args.points, args.edges)
    curve = run_attack(g, AttackStrategy(args.attack, seed=args.seed))
    save_curve(curve, args.out)
    print(f"R={robustness_index(curve)} qc={critical_fraction(curve)}")
    return 0


def _cmd_analyze(args) -> int:
    g = _load_graph(args.points, args.edges)
    part = louvain(g, args.seed)
    result = {
        "Q": modularity(g, part),
        "SI": sparsity_index(g),
        "grid_like_ratio": grid_like_ratio(g),
        "avg_degree": average_degree(g),
        "community_count": part.n_communities,
    }
    text = json.dumps(result, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def _cmd_nullmodel(args) -> int:
    g = _load_graph(args.points, args.edges)
    if args.model == "rewire":
        out, report = rewire_degree_preserving(
            g, RewireSpec(seed=args.seed, swaps_per_edge=args.swaps_per_edge))
        save_edges(out, args.out)
        print(f"rewired: accepted {report.accepted} of {report.attempted} swaps")
        report_data = {"attempted": report.attempted, "accepted": report.accepted,
                       "rejected": report.rejected}
    else:
        side = math.isqrt(g.n)
        if side * side != g.n:
            raise ValueError(f"graph has {g.n} nodes, not a perfect square")
        out, rr = relocate_to_lattice(
            g, RelocationSpec(side=side, seed=args.seed, spacing=args.spacing))
        save_edges(out, args.out)
        if args.points_out:
            save_points(PointSet(out.coords.copy()), args.points_out)
        print(f"relocated: dropped {rr.dropped_stubs} stubs, "
              f"{rr.long_link_count} long links")
        report_data = {"dropped_stubs": rr.dropped_stubs,
                       "long_link_count": rr.long_link_count,
                       "max_link_length": rr.max_link_length}
    if args.report:
        with open(args.report, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(report_data, fh, sort_keys=True)
            fh.write("\n")
    return 0


def _cmd_experiment(args) -> int:
    with open(args.config, encoding="utf-8") as fh:
        config = ExperimentConfig.from_json(fh.read())
    records, failures = run_experiment(config, args.out)
    print(f"wrote {len(records)} result rows to {args.out}/results.csv"
          + (f" ({len(failures)} cells failed)" if failures else ""))
    return 1 if failures and not records else 0


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="proxnet",
                                description="proximity networks: build, attack, measure")
    sub = p.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="make a mesh or a point set")
    gsub = gen.add_subparsers(dest="what", required=True)
    gm = gsub.add_parser("mesh", help="synthesize a population mesh")
    gm.add_argument("--rows", type=int, required=True)
    gm.add_argument("--cols", type=int, required=True)
    gm.add_argument("--total-pop", type=int, required=True)
    gm.add_argument("--decay", type=float, required=True)
    gm.add_argument("--seed", type=int, required=True)
    gm.add_argument("--concentration", type=int, default=0)
    gm.add_argument("--cell-size", type=float, default=500.0)
    gm.add_argument("--out", required=True)
    gm.set_defaults(func=_cmd_generate)
    gp = gsub.add_parser("points", help="place nodes")
    gp.add_argument("--placement", choices=["pop", "inv", "uni", "lattice"],
                    required=True)
    gp.add_argument("--n", type=int, required=True)
    gp.add_argument("--seed", type=int)
    gp.add_argument("--mesh")
    gp.add_argument("--region", help="x0,y0,x1,y1 for uni without a mesh")
    gp.add_argument("--spacing", type=float, help="lattice spacing override")
    gp.add_argument("--snap", action="store_true",
                    help="snap uniform points to mesh cell centers")
    gp.add_argument("--out", required=True)
    gp.set_defaults(func=_cmd_generate)

    bld = sub.add_parser("build", help="build a proximity graph over points")
    bld.add_argument("--points", required=True)
    bld.add_argument("--kind", choices=["rng", "gg"], required=True)
    bld.add_argument("--method", choices=["auto", "literal", "delaunay"],
                     default="auto")
    bld.add_argument("--out", required=True)
    bld.set_defaults(func=_cmd_build)

    atk = sub.add_parser("attack", help="run a node-removal attack")
    atk.add_argument("--points", required=True)
    atk.add_argument("--edges", required=True)
    atk.add_argument("--attack", choices=["rb", "id", "rf"], required=True)
    atk.add_argument("--seed", type=int)
    atk.add_argument("--out", required=True)
    atk.set_defaults(func=_cmd_attack)

    ana = sub.add_parser("analyze", help="community and link-structure metrics")
    ana.add_argument("--points", required=True)
    ana.add_argument("--edges", required=True)
    ana.add_argument("--seed", type=int, required=True)
    ana.add_argument("--out")
    ana.set_defaults(func=_cmd_analyze)

    nm = sub.add_parser("nullmodel", help="rewire or relocate a graph")
    nm.add_argument("--points", required=True)
    nm.add_argument("--edges", required=True)
    nm.add_argument("--model", choices=["rewire", "relocate"], required=True)
    nm.add_argument("--seed", type=int, required=True)
    nm.add_argument("--swaps-per-edge", type=int, default=10)
    nm.add_argument("--spacing", type=float, default=1.0)
    nm.add_argument("--out", required=True)
    nm.add_argument("--points-out")
    nm.add_argument("--report")
    nm.set_defaults(func=_cmd_nullmodel)

    exp = sub.add_parser("experiment", help="run a config-driven sweep")
    exp.add_argument("--config", required=True)
    exp.add_argument("--out", required=True)
    exp.set_defaults(func=_cmd_experiment)
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
