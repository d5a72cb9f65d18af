"""Command line front end.

Subcommands: sample, link, spectrum, certify, verify, sweep.  Every
command emits an enveloped JSON payload (to --out or stdout) whose
sha256 covers the parameters, seed and results but not timestamps or
thread counts, so identical invocations hash identically.  Exit codes:
0 certified/verified, 1 negative verdict, 2 usage or input error.

Heavy imports happen inside main() after BLAS thread pinning; module
level must stay stdlib-only for that to work.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

_BLAS_VARS = (
    "OPENBLAS_NUM_THREADS",
    "OMP_NUM_THREADS",
    "MKL_NUM_THREADS",
    "NUMEXPR_NUM_THREADS",
    "VECLIB_MAXIMUM_THREADS",
)


def _pin_blas_threads() -> None:
    # numeric kernels must not depend on machine core count; callers
    # can still override by exporting the variables beforehand
    for var in _BLAS_VARS:
        os.environ.setdefault(var, "1")


def _int_grid(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("empty integer list")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zuklab",
        description="spectra, links and certificates for random group presentations",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=int, default=0, help="master RNG seed")
        p.add_argument("--out", type=Path, default=None, help="output file")
        p.add_argument("--tol", type=float, default=None, help="solver tolerance")
        p.add_argument("--threads", type=int, default=1, help="trial parallelism")
        p.add_argument("--trials", type=int, default=None, help="number of trials")

    p_sample = sub.add_parser("sample", help="sample a random presentation")
    add_common(p_sample)
    p_sample.add_argument(
        "--model",
        required=True,
        choices=["density", "binomial", "bprime", "mplus"],
    )
    p_sample.add_argument("--k", type=int, default=None, help="alphabet rank")
    p_sample.add_argument("--l", type=int, default=None, help="relator length")
    p_sample.add_argument("--d", type=float, default=None, help="density")
    p_sample.add_argument("--rho", type=float, default=None, help="inclusion probability")
    p_sample.add_argument("--m", type=int, default=None, help="positive alphabet size")
    p_sample.add_argument("--alpha", type=float, default=None, help="rho = C/m^alpha")
    p_sample.add_argument("--c", type=float, default=None, help="rho = C/m^alpha")
    p_sample.set_defaults(func=cmd_sample)

    p_link = sub.add_parser("link", help="build the labeled link of a presentation")
    add_common(p_link)
    p_link.add_argument("--in", dest="infile", type=Path, required=True)
    p_link.set_defaults(func=cmd_link)

    p_spec = sub.add_parser("spectrum", help="random walk spectrum of a graph or link")
    add_common(p_spec)
    p_spec.add_argument("--in", dest="infile", type=Path, required=True)
    p_spec.add_argument("--mode", choices=["auto", "dense", "iterative"], default="auto")
    p_spec.add_argument("--no-plot", action="store_true")
    p_spec.set_defaults(func=cmd_spectrum)

    p_cert = sub.add_parser("certify", help="certificate for a presentation or formula bounds")
    add_common(p_cert)
    p_cert.add_argument("--in", dest="infile", type=Path, default=None)
    p_cert.add_argument(
        "--model",
        default=None,
        choices=["density", "binomial", "bprime", "mplus"],
        help="sample instead of reading --in",
    )
    p_cert.add_argument("--k", type=int, default=None)
    p_cert.add_argument("--l", type=int, default=None)
    p_cert.add_argument("--d", type=float, default=None)
    p_cert.add_argument("--rho", type=float, default=None)
    p_cert.add_argument("--m", type=int, default=None)
    p_cert.add_argument("--alpha", type=float, default=None)
    p_cert.add_argument("--c", type=float, default=None)
    p_cert.add_argument("--n", type=int, default=2, help="ambient dimension")
    p_cert.add_argument("--mode", choices=["auto", "dense", "iterative"], default="auto")
    p_cert.add_argument(
        "--emit-bounds",
        action="store_true",
        help="evaluate exponent and dimension bounds from parameters only",
    )
    p_cert.set_defaults(func=cmd_certify)

    p_verify = sub.add_parser("verify", help="run a lemma verification harness")
    add_common(p_verify)
    p_verify.add_argument(
        "--lemma",
        required=True,
        choices=["union", "deletion", "er", "degree", "cos", "mplus-link", "angle"],
    )
    p_verify.add_argument("--n", type=int, default=None, help="vertex or side count")
    p_verify.add_argument("--rho", type=float, default=None)
    p_verify.add_argument("--alpha", type=float, default=None)
    p_verify.add_argument("--c", type=float, default=None)
    p_verify.add_argument("--m", type=_int_grid, default=None, help="comma separated m grid")
    p_verify.add_argument("--k-graphs", type=int, default=None)
    p_verify.add_argument("--eps", type=float, default=None, help="degree band half-width")
    p_verify.add_argument("--degree", type=int, default=None)
    p_verify.add_argument("--p-dense", type=float, default=None)
    p_verify.add_argument("--p-sparse", type=float, default=None)
    p_verify.add_argument("--q", type=float, default=None, help="cell keep probability")
    p_verify.add_argument("--parts", type=_int_grid, default=None, help="tripartite part sizes")
    p_verify.add_argument("--gamma-below", type=float, default=None)
    p_verify.add_argument("--gamma-method", choices=["auto", "svd", "links"], default=None)
    p_verify.add_argument("--trials-per-m", type=int, default=None)
    p_verify.add_argument("--no-plot", action="store_true")
    p_verify.set_defaults(func=cmd_verify)

    p_sweep = sub.add_parser("sweep", help="grid sweep of link spectra against the bound")
    add_common(p_sweep)
    p_sweep.add_argument("--model", required=True, choices=["mplus"])
    p_sweep.add_argument("--alpha", type=float, default=1.6)
    p_sweep.add_argument("--c", type=float, default=1.0)
    p_sweep.add_argument("--m", type=_int_grid, required=True, help="comma separated m grid")
    p_sweep.add_argument("--trials-per-m", type=int, default=None)
    p_sweep.add_argument("--no-plot", action="store_true")
    p_sweep.set_defaults(func=cmd_sweep)

    return parser


def _emit(payload: dict, out: Path | None, threads: int | None = None) -> str:
    """Write or print the enveloped payload; returns the payload hash."""
    from .reporting import envelope, write_json_report

    if out is None:
        env = envelope(payload, threads=threads)
        print(json.dumps(env, sort_keys=True, indent=2))
        return env["sha256"]
    sha = write_json_report(out, payload, threads=threads)
    print(f"wrote {out} (sha256 {sha[:16]})")
    return sha


def _load_presentation(path: Path):
    from .random_groups import presentation_from_json

    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read presentation {path}: {exc}") from exc
    if isinstance(data, dict) and "payload" in data:
        data = data["payload"]
    if isinstance(data, dict) and "presentation" in data:
        data = data["presentation"]
    return presentation_from_json(data)


def _model_params(args):
    from .random_groups import ModelParams

    rho = args.rho
    if rho is None and args.model == "mplus" and None not in (args.alpha, args.c, args.m):
        rho = args.c / args.m**args.alpha
    return ModelParams(
        model=args.model,
        seed=args.seed,
        k=args.k,
        l=args.l,
        d=args.d,
        rho=rho,
        m=args.m,
        alpha=args.alpha,
        C=args.c,
    )


def cmd_sample(args) -> int:
    from .random_groups import sample_from_params
    from .reporting import RunConfig

    params = _model_params(args)
    pres = sample_from_params(params)
    run = RunConfig("sample", params.to_dict(), args.seed)
    payload = {
        "run": run.to_dict(),
        "presentation": pres.to_json_dict(),
        "relator_count": len(pres.relators),
    }
    _emit(payload, args.out)
    return 0


def cmd_link(args) -> int:
    from .link_builder import build_link
    from .reporting import RunConfig

    pres = _load_presentation(args.infile)
    dec = build_link(pres)
    run = RunConfig("link", {"in": str(args.infile)}, args.seed)
    payload = {
        "run": run.to_dict(),
        "m": dec.m,
        "labels": list(dec.labels),
        "isolated": list(dec.isolated),
        "edge_counts": {
            "L1": dec.L1.edge_count,
            "L2": dec.L2.edge_count,
            "L3": dec.L3.edge_count,
            "full": dec.full.edge_count,
        },
        "total_multiplicity": dec.full.total_multiplicity(),
        "layers": {
            "L1": [list(e) for e in dec.L1.edges],
            "L2": [list(e) for e in dec.L2.edges],
            "L3": [list(e) for e in dec.L3.edges],
        },
        "full_edges": [list(e) for e in dec.full.edges],
    }
    _emit(payload, args.out)
    return 0


def cmd_spectrum(args) -> int:
    from .graph_core import from_edge_list, random_walk_spectrum
    from .link_builder import build_link
    from .reporting import RunConfig, render_spectrum_figure

    text = Path(args.infile).read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        g = build_link(_load_presentation(args.infile)).full
        source = "link"
    else:
        g = from_edge_list(text)
        source = "edge-list"
    rep = random_walk_spectrum(g, mode=args.mode, tol=args.tol)
    run = RunConfig(
        "spectrum",
        {"in": str(args.infile), "mode": args.mode, "tol": args.tol, "source": source},
        args.seed,
    )
    payload = {"run": run.to_dict(), "report": rep.to_dict()}
    _emit(payload, args.out)
    if args.out is not None and not args.no_plot:
        png = Path(args.out).with_suffix(".png")
        render_spectrum_figure(rep.to_dict(), png)
        print(f"wrote {png}")
    return 0


def cmd_certify(args) -> int:
    from .certify import certify_presentation, emit_bounds, emit_bounds_mplus
    from .reporting import RunConfig

    if args.emit_bounds:
        if None not in (args.k, args.l, args.d):
            cert = emit_bounds(args.k, args.l, args.d)
            flags = {"k": args.k, "l": args.l, "d": args.d}
        elif None not in (args.alpha, args.c, args.m):
            cert = emit_bounds_mplus(args.alpha, args.c, args.m)
            flags = {"alpha": args.alpha, "C": args.c, "m": args.m}
        else:
            raise ValueError("--emit-bounds needs --k/--l/--d or --alpha/--c/--m")
        run = RunConfig("certify", {"emit_bounds": True, **flags}, None)
        payload = {"run": run.to_dict(), "certificate": cert.to_dict()}
        _emit(payload, args.out)
        if cert.p_range is not None:
            lo, hi = cert.p_range
            print(f"p range [{lo:.6g}, {hi:.6g}]")
        if cert.confdim_lower is not None or cert.confdim_upper is not None:
            print(f"confdim bounds [{cert.confdim_lower}, {cert.confdim_upper}]")
        print(f"verdict {cert.verdict}")
        return 0 if cert.verdict == "PASS" else 1

    if args.infile is not None:
        pres = _load_presentation(args.infile)
        source_params = {"in": str(args.infile)}
    elif args.model is not None:
        from .random_groups import sample_from_params

        params = _model_params(args)
        pres = sample_from_params(params)
        source_params = params.to_dict()
    else:
        raise ValueError("certify needs --in or --model")
    cert = certify_presentation(
        pres,
        n=args.n,
        mode=args.mode,
        tol=args.tol,
        params=source_params,
        seed=args.seed,
    )
    run = RunConfig("certify", {**source_params, "n": args.n, "mode": args.mode}, args.seed)
    payload = {"run": run.to_dict(), "certificate": cert.to_dict()}
    _emit(payload, args.out)
    print(f"verdict {cert.verdict}: {cert.reason}")
    return 0 if cert.verdict == "PASS" else 1


def _verify_kwargs(args) -> dict:
    kwargs: dict = {}

    def put(key, value):
        if value is not None:
            kwargs[key] = value

    lemma = args.lemma
    if lemma == "union":
        put("vertex_count", args.n)
        put("k_graphs", args.k_graphs)
        put("degree_band_eps", args.eps)
        put("degree", args.degree)
    elif lemma == "deletion":
        put("vertex_count", args.n)
        put("p_dense", args.p_dense)
        put("p_sparse", args.p_sparse)
    elif lemma == "er":
        put("n", args.n)
        put("rho", args.rho)
    elif lemma == "degree":
        put("n", args.n)
        put("rho", args.rho)
        put("alpha_label", args.alpha)
    elif lemma == "cos":
        pass
    elif lemma == "mplus-link":
        put("m_grid", args.m)
        put("alpha", args.alpha)
        put("C", args.c)
        put("trials_per_m", args.trials_per_m)
    elif lemma == "angle":
        if args.parts is not None:
            if len(args.parts) != 3:
                raise ValueError("--parts needs exactly three sizes")
            kwargs["sizes"] = args.parts
        put("q", args.q)
        put("require_gamma_below", args.gamma_below)
        put("gamma_method", args.gamma_method)
        put("iterate_tol", args.tol)
    if lemma != "mplus-link":
        put("trials", args.trials)
    kwargs["seed"] = args.seed
    kwargs["threads"] = args.threads
    return kwargs


def cmd_verify(args) -> int:
    from . import verify_harness
    from .reporting import RunConfig, render_verify_figure, write_csv

    functions = {
        "union": verify_harness.verify_union_lemma,
        "deletion": verify_harness.verify_deletion_lemma,
        "er": verify_harness.verify_er_spectral,
        "degree": verify_harness.verify_degree_concentration,
        "cos": verify_harness.verify_cos_equals_lambda,
        "mplus-link": verify_harness.verify_mplus_link,
        "angle": verify_harness.verify_angle_convergence,
    }
    kwargs = _verify_kwargs(args)
    report = functions[args.lemma](**kwargs)
    run_params = {"lemma": args.lemma, **report.params}
    run = RunConfig("verify", run_params, args.seed, args.threads)
    payload = {"run": run.to_dict(), "report": report.to_dict()}
    _emit(payload, args.out, threads=args.threads)
    if args.out is not None:
        write_csv(Path(args.out).with_suffix(".csv"), report.csv_rows())
        if not args.no_plot:
            png = Path(args.out).with_suffix(".png")
            render_verify_figure(report.to_dict(), png)
            print(f"wrote {png}")
    print(
        f"lemma {report.lemma}: fraction_holding {report.fraction_holding:.4f}"
        f" skipped {report.n_skipped} passed {report.passed}"
    )
    return 0 if report.passed else 1


def cmd_sweep(args) -> int:
    from .reporting import RunConfig, render_sweep_figure, write_csv
    from .verify_harness import verify_mplus_link

    kwargs = {"m_grid": args.m, "alpha": args.alpha, "C": args.c}
    if args.trials_per_m is not None:
        kwargs["trials_per_m"] = args.trials_per_m
    report = verify_mplus_link(seed=args.seed, threads=args.threads, **kwargs)
    rows = report.notes["per_m"]
    out = args.out if args.out is not None else Path("sweep.csv")
    header = ["m", "mean_lambda2", "bound", "pass_fraction", "connected_fraction"]
    csv_rows = [header] + [[r[h] for h in header] for r in rows]
    write_csv(out, csv_rows)
    print(f"wrote {out}")
    run = RunConfig("sweep", {"model": args.model, **report.params}, args.seed, args.threads)
    payload = {"run": run.to_dict(), "report": report.to_dict()}
    from .reporting import write_json_report

    sha = write_json_report(Path(out).with_suffix(".json"), payload, threads=args.threads)
    print(f"wrote {Path(out).with_suffix('.json')} (sha256 {sha[:16]})")
    if not args.no_plot:
        png = Path(out).with_suffix(".png")
        render_sweep_figure(rows, png)
        print(f"wrote {png}")
    slope = report.notes["slope"]
    expected = report.notes["expected_slope"]
    if slope is not None:
        print(f"slope {slope:.4f} (expected {expected:.4f})")
    return 0 if report.passed else 1


def main(argv: list[str] | None = None) -> int:
    _pin_blas_threads()
    parser = build_parser()
    args = parser.parse_args(argv)
    from .graph_core import IterationError
    from .random_groups import DeskScaleError
    from .zuk_engine import ConvergenceError

    try:
        return args.func(args)
    except (IterationError, ConvergenceError) as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return 1
    except (ValueError, DeskScaleError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
