"""Command-line entry point.

Exit codes: 0 on success, 1 on I/O or graph-parse errors, 2 when a parameter
violates a precondition (for example y <= 1 for estimate-tutte).
"""
from __future__ import annotations

import argparse
import json
import secrets
import sys
from fractions import Fraction

from . import diagnostics, exact, generators, sampler
from .graph import GraphFormatError, edge_indices, format_graph, kappa_full, min_degree, read_graph


def _jsonable(v):
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else {"exact": str(v), "float": float(v)}
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def dump(report) -> str:
    return json.dumps(_jsonable(report), sort_keys=True, indent=2) + "\n"


def _edges_arg(text):
    if text is None or text.strip() == "":
        return []
    return [int(tok) for tok in text.split(",")]


def _n_grid(text):
    return [int(tok) for tok in text.split(",")]


def _seed(args):
    return args.seed if args.seed is not None else secrets.randbits(63)


def _sampler_cfg(args, seed):
    return sampler.SamplerConfig(epsilon=args.epsilon, t_override=args.t, variance_bound=args.variance_bound,
                                 seed=seed, fail_prob_amplification=args.repeat, threads=args.threads,
                                 subdense_c=args.subdense_c)


def cmd_estimate_tutte(args):
    g = read_graph(args.graph)
    run = sampler.estimate_tutte(g, args.x, args.y, _sampler_cfg(args, _seed(args)))
    return dict(run.to_dict(), x=args.x, y=args.y)


def cmd_estimate_z(args):
    g = read_graph(args.graph)
    run = sampler.estimate_z(g, exact.RCConfig(args.p, args.Q), _sampler_cfg(args, _seed(args)))
    return dict(run.to_dict(), p=args.p, Q=args.Q)


def cmd_estimate_lambda(args):
    g = read_graph(args.graph)
    a = _edges_arg(args.edges)
    run = sampler.estimate_lambda(g, exact.RCConfig(args.p, args.Q), a, _sampler_cfg(args, _seed(args)))
    return dict(run.to_dict(), p=args.p, Q=args.Q, edges=a, epsilon=args.epsilon)


def cmd_exact(args):
    g = read_graph(args.graph)
    report = {"n": g.n, "m": g.m}
    if args.x is not None or args.y is not None:
        if args.x is None or args.y is None:
            raise ValueError("exact Tutte evaluation needs both --x and --y")
        report["tutte"] = exact.tutte_statesum(g, exact.as_number(args.x), exact.as_number(args.y))
        report.update(x=args.x, y=args.y)
    if args.p is not None or args.Q is not None:
        if args.p is None or args.Q is None:
            raise ValueError("exact partition function needs both --p and --Q")
        cfg = exact.RCConfig(args.p, args.Q)
        report["z"] = exact.z_exact(g, cfg)
        report.update(p=args.p, Q=args.Q)
        if args.edges is not None:
            a = _edges_arg(args.edges)
            report["edges"] = a
            report["mu"] = exact.mu_exact(g, cfg, a)
            report["lambda"] = exact.lambda_exact(g, cfg, a)
    if args.chromatic is not None:
        report["chromatic"] = exact.chromatic_eval(g, args.chromatic)
        report["lambda_colors"] = args.chromatic
    if len(report) == 2:
        raise ValueError("exact needs --x/--y, --p/--Q or --chromatic")
    return report


def cmd_generate(args):
    seed = _seed(args)
    if args.family == "plg":
        if args.alpha is None or args.beta is None:
            raise ValueError("plg needs --alpha and --beta")
        g, meta = generators.gen_plg(generators.PLGSpec(args.alpha, args.beta), seed, simple=args.simple)
        meta = {"family": "plg", "params": {"alpha": args.alpha, "beta": args.beta, "simple": args.simple},
                "dropped_copy": meta["dropped_copy"], "max_degree": meta["max_degree"]}
    else:
        if args.n is None:
            raise ValueError(f"{args.family} needs --n")
        param = {"eps": args.eps, "subdense": args.c, "superdense": args.f}[args.family]
        if param is None:
            flag = {"eps": "--eps", "subdense": "--c", "superdense": "--f"}[args.family]
            raise ValueError(f"{args.family} needs {flag}")
        spec = generators.FamilySpec(args.family, args.n, param)
        g = generators.gen_family(spec, seed)
        meta = {"family": args.family, "params": spec.describe()}
    meta.update(seed=seed, n=g.n, m=g.m, min_degree=min_degree(g) if g.n else None,
                connected=kappa_full(g) == 1)
    text = format_graph(g)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        with open(args.out + ".json", "w") as fh:
            fh.write(dump(meta))
        return meta
    sys.stderr.write(dump(meta))
    return text


def cmd_diagnose(args):
    kind = args.kind
    if kind == "gstar":
        _, rep = diagnostics.build_gstar(read_graph(args.graph), args.c, args.d0)
        return rep.to_dict()
    if kind == "second-moment":
        seed = _seed(args)
        rep = diagnostics.second_moment(read_graph(args.graph), args.p, args.Q, args.t, seed, c=args.c,
                                        threads=args.threads)
        return rep.to_dict()
    if kind == "superdense-sweep":
        seed = _seed(args)
        rows = diagnostics.superdense_convergence(args.f, args.p, args.Q, _n_grid(args.n_grid), args.t, seed,
                                                  threads=args.threads)
        if args.format == "csv":
            return diagnostics.convergence_csv(rows)
        return {"seed": seed, "f": args.f, "p": args.p, "Q": args.Q, "t": args.t,
                "rows": [vars(r) for r in rows]}
    if kind == "matching":
        mz = diagnostics.matching_model_z(args.n, exact.as_number(args.p), exact.as_number(args.Q))
        return {"n": args.n, "p": args.p, "Q": args.Q, "z": mz.z, "reference": mz.reference, "ratio": mz.ratio}
    if kind == "plg":
        spec = generators.PLGSpec(args.alpha, args.beta)
        n_pred, m_pred = generators.plg_asymptotics(spec)
        mr = generators.molloy_reed_q(spec)
        return {"alpha": args.alpha, "beta": args.beta, "max_degree": spec.max_degree,
                "degree_counts": spec.degree_counts, "n": spec.n, "total_copies": spec.total_copies,
                "n_pred": n_pred, "m_pred": m_pred, "molloy_reed_finite": mr.finite_sum,
                "molloy_reed_closed_form": mr.closed_form}
    raise ValueError(f"unknown diagnostic {kind!r}")


def _add_sampling(p):
    p.add_argument("--graph", required=True)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--t", type=int, default=None, help="sample count (overrides the variance bound)")
    p.add_argument("--variance-bound", type=float, default=None, dest="variance_bound")
    p.add_argument("--subdense-c", type=float, default=None, dest="subdense_c")
    p.add_argument("--repeat", type=int, default=1, help="odd number of runs for median amplification")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--format", choices=["json", "csv"], default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tuttemc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate-tutte", help="Monte Carlo estimate of T_G(x, y), x, y > 1")
    _add_sampling(p)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.set_defaults(func=cmd_estimate_tutte)

    for name, func in (("estimate-z", cmd_estimate_z), ("estimate-lambda", cmd_estimate_lambda)):
        p = sub.add_parser(name)
        _add_sampling(p)
        p.add_argument("--p", type=float, required=True)
        p.add_argument("--Q", type=float, required=True)
        if name == "estimate-lambda":
            p.add_argument("--edges", default="", help='comma-separated edge indices, e.g. "0,2,5"')
        p.set_defaults(func=func)

    p = sub.add_parser("exact", help="exact evaluation by enumeration (small graphs)")
    p.add_argument("--graph", required=True)
    # kept as strings so "3/2" stays an exact rational
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--p")
    p.add_argument("--Q")
    p.add_argument("--edges", default=None)
    p.add_argument("--chromatic", type=int, default=None)
    p.add_argument("--format", choices=["json"], default="json")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("generate", help="generate a graph family member")
    p.add_argument("--family", choices=["plg", "eps", "subdense", "superdense"], required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--simple", action="store_true", help="drop loops and merge parallel edges (plg only)")
    p.add_argument("--eps", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--f", help='superdense f(n): "3", "n^0.5" or "n/log n"')
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("diagnose", help="empirical checks of the variance bounds")
    p.add_argument("kind", choices=["gstar", "second-moment", "superdense-sweep", "matching", "plg"])
    p.add_argument("--graph")
    p.add_argument("--c", type=float)
    p.add_argument("--d0", type=float)
    p.add_argument("--p", default="0.5")
    p.add_argument("--Q", default="2")
    p.add_argument("--t", type=int, default=1000)
    p.add_argument("--f", default="0")
    p.add_argument("--n-grid", default="50,100,200", dest="n_grid")
    p.add_argument("--n", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_diagnose)
    return parser


def _coerce_diagnose(args):
    if args.command != "diagnose":
        return
    if args.kind != "matching":
        args.p, args.Q = float(args.p), float(args.Q)
    needs = {"gstar": ("graph", "c"), "second-moment": ("graph",), "matching": ("n",), "plg": ("alpha", "beta")}
    for name in needs.get(args.kind, ()):
        if getattr(args, name) is None:
            raise ValueError(f"diagnose {args.kind} needs --{name}")


def run(argv=None) -> tuple[int, str]:
    """Parse argv, execute, and return (exit code, stdout text or error message)."""
    args = build_parser().parse_args(argv)
    try:
        _coerce_diagnose(args)
        out = args.func(args)
    except (OSError, GraphFormatError) as exc:
        return 1, f"error: {exc}\n"
    except (ValueError, ArithmeticError) as exc:
        return 2, f"error: {type(exc).__name__}: {exc}\n"
    return 0, out if isinstance(out, str) else dump(out)


def main(argv=None):
    code, text = run(argv)
    (sys.stdout if code == 0 else sys.stderr).write(text)
    sys.exit(code)


if __name__ == "__main__":
    main()
