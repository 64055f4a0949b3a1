"""Command-line interface.

Verbs mirror the library layers: ``graph export``, ``space
bandlimited|gsis|bounds|uncertainty``, ``kernel make``, ``sample
subset|dynamic``, ``reconstruct direct|krylov``, ``experiment
damped-cosine`` and ``model-compare``.  Graphs come from an edge-list file
(``--graph``) or a circulant construction (``--circulant N --q 1,3``); all
outputs are CSV matrices plus JSON metadata under ``--out``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io
from .errors import GsisError
from .experiments import (
    ExperimentConfig,
    ingest_signals_csv,
    run_circulant_experiment,
    run_model_comparison,
)
from .graphs import (
    SHIFT_KINDS,
    Graph,
    ShiftSet,
    build_circulant,
    build_standard_shifts,
    read_edge_list,
)
from .kernels import KERNEL_FAMILIES, make_kernel
from .sampling import (
    Observation,
    dynamic_sampler,
    reconstruct_direct,
    reconstruct_krylov,
    subset_sampler,
)
from .spaces import (
    bandlimited_space,
    canonical_generator,
    frame_bounds,
    gsis_from_generators,
    riesz_bounds,
    uncertainty_check,
)
from .spectral import diagonalize_simultaneously


def _parse_int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip() != ""]


def _parse_range(text: str) -> list[int]:
    """Accept 'a:b' (inclusive), a comma list, or a single integer."""
    if ":" in text:
        lo, hi = text.split(":", 1)
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise argparse.ArgumentTypeError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return _parse_int_list(text)


def _add_graph_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--graph", metavar="FILE", help="edge-list file (header 'N <count>')")
    parser.add_argument("--circulant", type=int, metavar="N", help="circulant graph order")
    parser.add_argument("--q", type=_parse_int_list, metavar="LIST", help="circulant offsets, e.g. 1,3")
    parser.add_argument(
        "--shift-kind",
        choices=SHIFT_KINDS,
        default="laplacian",
        help="shift built on an edge-list graph (default laplacian)",
    )


def _build_graph_shifts(args: argparse.Namespace) -> tuple[Graph, ShiftSet]:
    if args.graph is not None and args.circulant is not None:
        raise SystemExit("use either --graph or --circulant, not both")
    if args.circulant is not None:
        if not args.q:
            raise SystemExit("--circulant requires --q with at least one offset")
        return build_circulant(args.circulant, args.q)
    if args.graph is None:
        raise SystemExit("a graph is required: pass --graph FILE or --circulant N --q LIST")
    graph = read_edge_list(args.graph)
    shift = build_standard_shifts(graph, args.shift_kind)
    return graph, ShiftSet((shift,))


def _load_generators(args: argparse.Namespace, n: int) -> list[np.ndarray]:
    vertices = getattr(args, "delta_gen", None)
    if vertices is None:
        delta = getattr(args, "delta", None)
        vertices = delta if isinstance(delta, list) else None
    gens: list[np.ndarray] = []
    for vertex in vertices or []:
        g = np.zeros(n)
        g[vertex] = 1.0
        gens.append(g)
    if getattr(args, "generator", None):
        rows = io.load_matrix_csv(args.generator)
        gens.extend(np.asarray(row, dtype=float) for row in rows)
    if not gens:
        raise SystemExit("a generator is required: pass --delta VERTS or --generator FILE")
    return gens


def _load_scheme(args: argparse.Namespace, shifts: ShiftSet, decomp):
    if args.w is not None:
        return subset_sampler(shifts.n_vertices, args.w)
    if args.i0 is not None:
        if args.k is None:
            raise SystemExit("dynamic sampling needs --k snapshots")
        return dynamic_sampler(decomp, shifts[0].matrix, args.i0, args.k)
    raise SystemExit("a sampling scheme is required: pass --w LIST or --i0 V --k K")


def _print_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _cmd_graph_export(args) -> int:
    graph, shifts = _build_graph_shifts(args)
    out = Path(args.out)
    files = []
    for k, shift in enumerate(shifts):
        files.append(io.save_matrix_csv(out / f"shift_{k}.csv", shift.matrix))
    decomp = diagonalize_simultaneously(shifts, seed=args.seed)
    files.extend(io.save_decomposition(decomp, out))
    print(
        f"wrote {len(files)} files to {out} "
        f"(n_vertices={graph.n_vertices}, n_shifts={shifts.n_shifts}, "
        f"assumption1={decomp.assumption1_holds})"
    )
    return 0


def _cmd_space(args) -> int:
    graph, shifts = _build_graph_shifts(args)
    decomp = diagonalize_simultaneously(shifts, seed=args.seed)
    out = Path(args.out)
    if args.space_cmd == "bandlimited":
        space = bandlimited_space(decomp, args.omega)
        io.save_space(space, out)
        print(f"wrote bandlimited space of dim {space.dim} to {out}")
        return 0
    if args.space_cmd == "gsis":
        gens = _load_generators(args, graph.n_vertices)
        space = gsis_from_generators(shifts, decomp, gens)
        io.save_space(space, out)
        print(f"wrote {space.provenance} space of dim {space.dim} to {out}")
        return 0
    if args.space_cmd == "bounds":
        if args.generator:
            rows = io.load_matrix_csv(args.generator)
            phi0 = np.asarray(rows[0], dtype=float)
            omega = args.omega
            if omega is None:
                space = gsis_from_generators(shifts, decomp, [phi0])
                omega = list(space.omega)
            gen = canonical_generator(decomp, omega, seed=args.seed)
            t_mat = gen.combined_shift
        else:
            if args.omega is None:
                raise SystemExit("space bounds needs --omega (or --generator)")
            omega = args.omega
            gen = canonical_generator(decomp, omega, seed=args.seed)
            phi0, t_mat = gen.generator, gen.combined_shift
        r_lo, r_hi = riesz_bounds(decomp, t_mat, phi0, omega)
        f_lo, f_hi = frame_bounds(decomp, phi0, args.frame_level)
        payload = {
            "omega": sorted(int(k) for k in omega),
            "riesz_bounds": [r_lo, r_hi],
            "frame_bounds": [f_lo, f_hi],
            "frame_level": args.frame_level,
        }
        io.save_json(out / "bounds.json", payload)
        _print_json(payload)
        return 0
    if args.space_cmd == "uncertainty":
        gens = _load_generators(args, graph.n_vertices)
        report = uncertainty_check(decomp, gens[0])
        payload = {
            "support_size": report.support_size,
            "space_dim": report.space_dim,
            "localization": report.localization,
            "localization_mode": report.localization_mode,
            "lower_bound": report.lower_bound,
            "holds": report.holds,
        }
        io.save_json(out / "uncertainty.json", payload)
        _print_json(payload)
        return 0
    raise SystemExit(f"unknown space command {args.space_cmd!r}")


def _cmd_kernel_make(args) -> int:
    graph, shifts = _build_graph_shifts(args)
    decomp = diagonalize_simultaneously(shifts, seed=args.seed)
    params: dict[str, float] = {}
    for item in args.param or []:
        if "=" not in item:
            raise SystemExit(f"--param expects name=value, got {item!r}")
        name, value = item.split("=", 1)
        params[name.strip()] = float(value)
    base = shifts[args.base_index]
    kernel = make_kernel(decomp, base, args.family, **params)
    out = Path(args.out)
    io.save_kernel(kernel, out)
    print(
        f"wrote {args.family} kernel to {out} "
        f"(rank {len(kernel.omega)} of {graph.n_vertices})"
    )
    return 0


def _cmd_sample(args) -> int:
    graph, shifts = _build_graph_shifts(args)
    out = Path(args.out)
    if args.sample_cmd == "subset":
        scheme = subset_sampler(graph.n_vertices, args.w)
    else:
        decomp = diagonalize_simultaneously(shifts, seed=args.seed)
        scheme = dynamic_sampler(decomp, shifts[0].matrix, args.i0, args.k)
    io.save_scheme(scheme, out)
    print(f"wrote {scheme.provenance} scheme ({scheme.n_samples} samples) to {out}")
    return 0


def _cmd_reconstruct(args) -> int:
    graph, shifts = _build_graph_shifts(args)
    decomp = diagonalize_simultaneously(shifts, seed=args.seed)
    scheme = _load_scheme(args, shifts, decomp)
    y = np.asarray(io.load_matrix_csv(args.y), dtype=float).reshape(-1)
    out = Path(args.out)
    if args.reconstruct_cmd == "direct":
        if args.omega is None:
            raise SystemExit("reconstruct direct needs --omega")
        x = reconstruct_direct(decomp, args.omega, scheme, y)
        io.save_matrix_csv(out / "reconstruction_signal.csv", x)
        io.save_observation(Observation(y, scheme), out)
        print(f"wrote direct reconstruction to {out}")
        return 0
    gens = _load_generators(args, graph.n_vertices)
    result = reconstruct_krylov(
        shifts,
        gens,
        scheme,
        y,
        delta=args.delta,
        max_level=args.max_level,
        require_injective=not args.allow_degenerate,
        drop_rel=args.tol,
    )
    io.save_reconstruction(result, out)
    io.save_observation(Observation(y, scheme), out)
    print(
        f"wrote reconstruction to {out} "
        f"(depth {result.depth}, dim {result.dims_trace[-1]}, "
        f"residual {result.residual_trace[-1]:.3e})"
    )
    return 0


def _cmd_experiment(args) -> int:
    config = ExperimentConfig(
        n_vertices=args.n,
        offsets=tuple(args.q),
        amplitude=args.amp,
        decay=args.decay,
        frequency=args.freq,
        sigma=args.sigma,
        trials=args.trials,
        p_values=tuple(args.p_range),
        levels=tuple(args.level_range),
        seed=args.seed,
        delta=args.delta,
    )
    table = run_circulant_experiment(config)
    files = io.save_metrics(table, args.out)
    print(f"wrote {', '.join(f.name for f in files)} to {args.out}")
    return 0


def _cmd_model_compare(args) -> int:
    graph, shifts = _build_graph_shifts(args)
    decomp = diagonalize_simultaneously(shifts, seed=args.seed)
    dataset = ingest_signals_csv(args.signals, graph)
    if not dataset:
        raise SystemExit(f"{args.signals}: no signals found")
    rule, _, k_text = args.generators.partition(":")
    if rule not in ("adaptive", "nonadaptive") or not k_text.isdigit():
        raise SystemExit("--generators expects adaptive:K or nonadaptive:K")
    comp = run_model_comparison(
        shifts, decomp, dataset, rule=rule, n_generators=int(k_text), levels=args.levels
    )
    files = io.save_model_comparison(comp, args.out)
    print(f"wrote {', '.join(f.name for f in files)} to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gsis",
        description="Shift-invariant graph signal spaces: spectra, sampling, reconstruction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_graph = sub.add_parser("graph", help="graph and shift utilities")
    graph_sub = p_graph.add_subparsers(dest="graph_cmd", required=True)
    p_export = graph_sub.add_parser("export", help="export shifts and decomposition")
    _add_graph_arguments(p_export)
    p_export.add_argument("--seed", type=int, default=0)
    p_export.add_argument("--out", default="gsis-out")
    p_export.set_defaults(func=_cmd_graph_export)

    p_space = sub.add_parser("space", help="build spaces and their stability constants")
    space_sub = p_space.add_subparsers(dest="space_cmd", required=True)
    for name in ("bandlimited", "gsis", "bounds", "uncertainty"):
        sp = space_sub.add_parser(name)
        _add_graph_arguments(sp)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", default="gsis-out")
        if name in ("bandlimited", "bounds"):
            sp.add_argument("--omega", type=_parse_range, default=None, metavar="LIST")
        if name in ("gsis", "bounds", "uncertainty"):
            sp.add_argument("--generator", metavar="FILE", default=None)
            sp.add_argument("--delta", type=_parse_int_list, default=None, metavar="VERTS")
        if name == "bounds":
            sp.add_argument("--frame-level", type=int, default=8, help="shifted-generator levels in the frame family")
        sp.set_defaults(func=_cmd_space)

    p_kernel = sub.add_parser("kernel", help="shift-invariant kernels")
    kernel_sub = p_kernel.add_subparsers(dest="kernel_cmd", required=True)
    p_make = kernel_sub.add_parser("make")
    _add_graph_arguments(p_make)
    p_make.add_argument("--family", choices=KERNEL_FAMILIES, required=True)
    p_make.add_argument("--param", action="append", metavar="NAME=VALUE")
    p_make.add_argument("--base-index", type=int, default=0, help="shift used as kernel base")
    p_make.add_argument("--seed", type=int, default=0)
    p_make.add_argument("--out", default="gsis-out")
    p_make.set_defaults(func=_cmd_kernel_make)

    p_sample = sub.add_parser("sample", help="sampling schemes")
    sample_sub = p_sample.add_subparsers(dest="sample_cmd", required=True)
    p_subset = sample_sub.add_parser("subset")
    _add_graph_arguments(p_subset)
    p_subset.add_argument("--w", type=_parse_range, required=True, metavar="LIST")
    p_subset.add_argument("--seed", type=int, default=0)
    p_subset.add_argument("--out", default="gsis-out")
    p_subset.set_defaults(func=_cmd_sample)
    p_dynamic = sample_sub.add_parser("dynamic")
    _add_graph_arguments(p_dynamic)
    p_dynamic.add_argument("--i0", type=int, required=True)
    p_dynamic.add_argument("--k", type=int, required=True)
    p_dynamic.add_argument("--seed", type=int, default=0)
    p_dynamic.add_argument("--out", default="gsis-out")
    p_dynamic.set_defaults(func=_cmd_sample)

    p_rec = sub.add_parser("reconstruct", help="reconstruct signals from samples")
    rec_sub = p_rec.add_subparsers(dest="reconstruct_cmd", required=True)
    for name in ("direct", "krylov"):
        rp = rec_sub.add_parser(name)
        _add_graph_arguments(rp)
        rp.add_argument("--y", required=True, metavar="FILE", help="observed values CSV")
        rp.add_argument("--w", type=_parse_range, default=None, metavar="LIST")
        rp.add_argument("--i0", type=int, default=None)
        rp.add_argument("--k", type=int, default=None)
        rp.add_argument("--seed", type=int, default=0)
        rp.add_argument("--out", default="gsis-out")
        if name == "direct":
            rp.add_argument("--omega", type=_parse_range, default=None, metavar="LIST")
        else:
            rp.add_argument("--generator", metavar="FILE", default=None)
            rp.add_argument("--delta-gen", dest="delta_gen", type=_parse_int_list, default=None)
            rp.add_argument("--delta", type=float, default=0.0, help="residual stopping threshold")
            rp.add_argument("--tol", type=float, default=1e-10, help="dependence drop tolerance")
            rp.add_argument("--max-level", type=int, default=None)
            rp.add_argument(
                "--allow-degenerate",
                action="store_true",
                help="drop directions invisible to the scheme instead of failing",
            )
        rp.set_defaults(func=_cmd_reconstruct)

    p_exp = sub.add_parser("experiment", help="reconstruction error sweeps")
    exp_sub = p_exp.add_subparsers(dest="experiment_cmd", required=True)
    p_dc = exp_sub.add_parser("damped-cosine")
    p_dc.add_argument("--n", type=int, default=100)
    p_dc.add_argument("--q", type=_parse_int_list, default=[1, 3])
    p_dc.add_argument("--amp", type=float, default=1.0)
    p_dc.add_argument("--decay", type=float, default=0.25)
    p_dc.add_argument("--freq", type=float, default=1.2566370614359172)
    p_dc.add_argument("--sigma", type=float, default=0.1)
    p_dc.add_argument("--trials", type=int, default=100)
    p_dc.add_argument("--p-range", dest="p_range", type=_parse_range, default=list(range(1, 46)))
    p_dc.add_argument(
        "--level-range", dest="level_range", type=_parse_range, default=list(range(1, 19))
    )
    p_dc.add_argument("--seed", type=int, default=0)
    p_dc.add_argument("--delta", type=float, default=0.0)
    p_dc.add_argument("--out", default="gsis-out")
    p_dc.set_defaults(func=_cmd_experiment)

    p_mc = sub.add_parser("model-compare", help="generated spans vs bandlimited spaces")
    _add_graph_arguments(p_mc)
    p_mc.add_argument("--signals", required=True, metavar="FILE")
    p_mc.add_argument("--generators", default="adaptive:3", metavar="RULE:K")
    p_mc.add_argument("--levels", type=_parse_range, default=list(range(0, 9)))
    p_mc.add_argument("--seed", type=int, default=0)
    p_mc.add_argument("--out", default="gsis-out")
    p_mc.set_defaults(func=_cmd_model_compare)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GsisError, ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
