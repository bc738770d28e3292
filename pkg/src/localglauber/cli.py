"""Command-line harness: reproducible experiment runs with CSV/JSON output.

Subcommands:
    sample    run the chain and write the final coloring (JSON) plus an
              optional per-round trace (CSV)
    exact     build the exact transition matrix of a tiny instance and run
              detailed-balance / stationarity / absorption / irreducibility
              checks, TV curves, and exact mixing times
    couple    run the coupled-step contraction experiment with lemma checks
    analyze   sweep the closed-form bounds over alpha and emit CSV tables

Exit codes: 0 success / all checks pass, 1 usage error, 2 infeasible
parameters, 3 resource cap exceeded, 4 a mandatory exact check failed.

Options can come from a config file (--config, "key = value" lines, keys
named like the long flags); explicit flags override file values. Every run
is a pure function of (config, seed): reruns produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import analysis, coupling, dynamics, exact
from .errors import (
    InfeasibleError,
    ParameterError,
    ParseError,
    ResourceLimitError,
    ValidationError,
)
from .graph import GENERATOR_FAMILIES, Graph, generate, parse_edge_list

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_RESOURCE = 3
EXIT_CHECK_FAILED = 4


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse uses 2 for usage errors; remap to the documented code.
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        merged = _merge_config(args)
        return args.func(merged)
    except (ParameterError, ParseError, ValidationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleError as e:
        print(f"infeasible: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ResourceLimitError as e:
        print(f"resource cap: {e}", file=sys.stderr)
        return EXIT_RESOURCE


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="localglauber", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command")

    def add_common(p, graph=True):
        p.add_argument("--config", help="config file with 'key = value' lines; flags override")
        if graph:
            src = p.add_argument_group("instance")
            src.add_argument("--graph", help="edge-list file ('u v' per line)")
            src.add_argument("--gen", choices=GENERATOR_FAMILIES, help="generator family")
            src.add_argument("--gen-args", help="generator parameters, e.g. n=8 or n=50,p=0.08")
            src.add_argument("--q", type=int, help="number of colors")
            src.add_argument("--alpha", type=float, help="colors as alpha * max_degree (exclusive with --q)")
        p.add_argument("--gamma", help="marking probability in (0,1), or 'auto' for the optimizer")
        p.add_argument("--seed", type=int, help=f"RNG seed (default {dynamics.DEFAULT_SEED})")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), help="output format where applicable")

    p = sub.add_parser("sample", help="run the chain and emit the final coloring")
    add_common(p)
    p.add_argument("--rounds", type=int, help="rounds to run (default: mixing bound when delta > 0)")
    p.add_argument("--eps", help="accuracy target for the default round count (default 0.25)")
    p.add_argument("--init", choices=("zeros", "random", "greedy"), help="initial coloring (default zeros)")
    p.add_argument("--trace", help="optional per-round summary CSV path")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("exact", help="exact checks, TV curve, and mixing times on a tiny instance")
    add_common(p)
    p.add_argument("--eps", help="mixing-time eps, comma separated for a sweep (default 0.25)")
    p.add_argument("--max-rounds", type=int, help="cap on TV-curve length (default 2000)")
    p.add_argument("--tv-out", help="optional TV curve CSV path")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("couple", help="contraction experiment over coupled steps")
    add_common(p)
    p.add_argument("--trials", type=int, help="number of coupled trials (default 10000)")
    p.add_argument("--pair-sampler", choices=coupling.PAIR_SAMPLERS, help="adjacent-pair sampler")
    p.set_defaults(func=cmd_couple)

    p = sub.add_parser("analyze", help="bound sweep and gamma* table")
    add_common(p, graph=False)
    p.add_argument("--alphas", help="comma-separated alpha grid (default 2,2.1,2.5,3,4)")
    p.add_argument("--delta-max", type=int, help="reference max degree for the bounds (default 2)")
    p.add_argument("--mix-n", type=int, help="node count for the mixing-bound column (default 100)")
    p.add_argument("--eps", help="eps for the mixing-bound column (default 0.01)")
    p.add_argument("--table-out", help="optional gamma* table CSV path")
    p.set_defaults(func=cmd_analyze)

    return parser


def _merge_config(args) -> argparse.Namespace:
    """Overlay config-file values under explicitly passed flags."""
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ParameterError(f"{args.config}:{lineno}: expected 'key = value'")
                key, value = (part.strip() for part in line.split("=", 1))
                attr = key.replace("-", "_")
                if not hasattr(args, attr):
                    raise ParameterError(f"{args.config}:{lineno}: unknown key {key!r}")
                if getattr(args, attr) is None:
                    setattr(args, attr, _coerce(value))
    return args


def _coerce(value: str):
    for cast in (int, float):
        try:
            return cast(value)
        except ValueError:
            continue
    return value


def _build_graph(args) -> Graph:
    if args.graph and args.gen:
        raise ParameterError("--graph and --gen are mutually exclusive")
    if args.graph:
        with open(args.graph, "rb") as fh:
            return parse_edge_list(fh.read())
    if args.gen:
        params = {}
        if args.gen_args:
            for item in str(args.gen_args).split(","):
                if "=" not in item:
                    raise ParameterError(f"bad --gen-args item {item!r}, expected K=V")
                k, v = item.split("=", 1)
                params[k.strip()] = _coerce(v.strip())
        seed = args.seed if args.seed is not None else dynamics.DEFAULT_SEED
        return generate(args.gen, seed=seed, **params)
    raise ParameterError("an instance is required: pass --graph FILE or --gen FAMILY")


def _resolve_q(args, g: Graph) -> int:
    if args.q is not None and args.alpha is not None:
        raise ParameterError("--q and --alpha are mutually exclusive")
    if args.q is not None:
        return int(args.q)
    if args.alpha is not None:
        if g.max_degree == 0:
            raise ParameterError("--alpha needs a graph with at least one edge")
        q = float(args.alpha) * g.max_degree
        if abs(q - round(q)) > 1e-6:
            raise ParameterError(f"alpha * max_degree = {q} is not an integer")
        return int(round(q))
    raise ParameterError("pass --q INT or --alpha FLOAT")


def _resolve_gamma(args, g: Graph, q: int):
    """Returns (gamma, optimum-or-None); 'auto' uses the bound optimizer."""
    raw = args.gamma if args.gamma is not None else "auto"
    if str(raw) == "auto":
        if g.max_degree == 0:
            raise ParameterError("gamma=auto needs a graph with at least one edge")
        alpha = q / g.max_degree
        opt = analysis.optimize_gamma(alpha)
        if not opt.feasible:
            raise InfeasibleError(f"no contractive gamma for alpha={_fmt(alpha)}")
        return opt.gamma, opt
    gamma = float(raw)
    return gamma, None


def _seed(args) -> int:
    return args.seed if args.seed is not None else dynamics.DEFAULT_SEED


def _fmt(x) -> str:
    """Floats at 12 significant digits; everything else via str."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (float, np.floating)):
        return f"{x:.12g}"
    return str(x)


def _round12(obj):
    """Recursively round floats to 12 significant digits for JSON output."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        return float(f"{obj:.12g}")
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, dict):
        return {k: _round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round12(v) for v in obj]
    return obj


def _emit(text: str, path) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(obj, path) -> None:
    _emit(json.dumps(_round12(obj), indent=2) + "\n", path)


def _emit_csv(header, rows, path) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    _emit("\n".join(lines) + "\n", path)


def _parse_eps_list(raw, default):
    if raw is None:
        return list(default)
    values = [float(tok) for tok in str(raw).split(",") if tok.strip()]
    if not values or any(not 0.0 < e for e in values):
        raise ParameterError(f"bad eps list {raw!r}")
    return values


# ----------------------------------------------------------------- sample

def cmd_sample(args) -> int:
    g = _build_graph(args)
    q = _resolve_q(args, g)
    gamma, opt = _resolve_gamma(args, g, q)
    seed = _seed(args)
    cfg = dynamics.ChainConfig(q=q, gamma=gamma, seed=seed)
    eps = float(args.eps) if args.eps is not None else 0.25

    if args.rounds is not None:
        rounds = int(args.rounds)
    else:
        if opt is not None:
            delta = opt.delta
        elif g.max_degree > 0 and 2.0 * gamma * g.max_degree / q < 1.0:
            delta = analysis.delta_wrapup(q / g.max_degree, gamma)
        else:
            delta = 0.0
        if delta <= 0.0:
            raise ParameterError("no positive contraction margin at this gamma; pass --rounds explicitly")
        rounds = analysis.mixing_bound(delta, g.node_count, eps)

    init = args.init or "zeros"
    if init == "zeros":
        x0 = dynamics.zeros_coloring(g)
    elif init == "random":
        rng = np.random.Generator(np.random.Philox(key=np.array([seed & (2**64 - 1), 2**32], dtype=np.uint64)))
        x0 = dynamics.random_coloring(g, q, rng)
    else:
        x0 = dynamics.greedy_coloring(g, q)

    final, trace = dynamics.run_chain_trace(g, cfg, x0, rounds)
    if args.trace:
        _emit_csv(
            ("round", "marked", "accepted", "conflicts", "proper"),
            [(s.round_index, s.marked, s.accepted, s.conflicts, s.proper) for s in trace],
            args.trace,
        )
    if (args.format or "json") == "csv":
        _emit_csv(("node", "color"), list(enumerate(final.tolist())), args.out)
    else:
        _emit_json(
            {
                "nodes": g.node_count,
                "edges": g.edge_count,
                "max_degree": g.max_degree,
                "q": q,
                "gamma": gamma,
                "seed": seed,
                "rounds": rounds,
                "init": init,
                "proper": dynamics.is_proper(g, final),
                "colors": final.tolist(),
            },
            args.out,
        )
    return EXIT_OK


# ------------------------------------------------------------------ exact

def cmd_exact(args) -> int:
    g = _build_graph(args)
    q = _resolve_q(args, g)
    gamma, _ = _resolve_gamma(args, g, q)
    cfg = dynamics.ChainConfig(q=q, gamma=gamma, seed=_seed(args))
    eps_list = _parse_eps_list(args.eps, (0.25,))
    max_rounds = args.max_rounds if args.max_rounds is not None else 2000

    space = exact.StateSpace(g, q)
    P = exact.build_transition_matrix(g, cfg)
    checks = [
        exact.check_row_stochastic(P),
        exact.check_detailed_balance(P, space),
        exact.check_uniform_stationary(P, space),
        exact.check_absorption(P, space),
    ]
    irreducible = exact.check_irreducibility(P, space)

    curve = exact.tv_curve(P, space, max_rounds=max_rounds, stop_tv=min(eps_list))
    mixing = {}
    for eps in eps_list:
        res = exact.exact_mixing_time(P, space, eps, max_rounds=max_rounds, curve=curve)
        mixing[_fmt(eps)] = res.rounds if not res.exceeded else f"exceeded max_rounds={max_rounds}"

    if args.tv_out:
        default_tv = curve.tv_from_start(0)
        _emit_csv(
            ("t", "max_tv", "tv_from_default_start"),
            [(int(t), float(curve.max_tv[t]), float(default_tv[t])) for t in curve.rounds],
            args.tv_out,
        )

    if (args.format or "json") == "csv":
        rows = [(c.name, c.passed, c.max_error) for c in checks]
        rows.append((irreducible.name, irreducible.passed, irreducible.max_error))
        rows.extend((f"mixing_rounds[eps={k}]", "", v) for k, v in mixing.items())
        _emit_csv(("check", "passed", "value"), rows, args.out)
    else:
        report = {
            "nodes": g.node_count,
            "q": q,
            "gamma": gamma,
            "states": space.size,
            "proper_colorings": space.proper_count,
            "checks": {c.name: {"passed": c.passed, "max_error": c.max_error} for c in checks},
            "irreducible_on_proper": {"passed": irreducible.passed, "detail": irreducible.detail},
            "mixing_rounds": mixing,
        }
        _emit_json(report, args.out)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_CHECK_FAILED


# ----------------------------------------------------------------- couple

def cmd_couple(args) -> int:
    g = _build_graph(args)
    q = _resolve_q(args, g)
    gamma, opt = _resolve_gamma(args, g, q)
    cfg = dynamics.ChainConfig(q=q, gamma=gamma, seed=_seed(args))
    trials = args.trials if args.trials is not None else 10_000
    sampler = args.pair_sampler or "uniform_random"

    est = coupling.contraction_experiment(g, cfg, trials, pair_sampler=sampler, check_lemmas=True)
    report = {
        "nodes": g.node_count,
        "q": q,
        "gamma": gamma,
        "seed": cfg.seed,
        "pair_sampler": sampler,
        "trials": est.trials,
        "lemma_violations": est.lemma_failures,
    }
    if trials > 0:
        report.update(
            {
                "mean_phi": est.mean,
                "stderr": est.stderr,
                "max_phi": est.max_phi,
            }
        )
        if g.max_degree > 0:
            alpha = q / g.max_degree
            if 2.0 * gamma / alpha < 1.0:
                delta = analysis.delta_wrapup(alpha, gamma)
                report["delta_theory"] = delta
                report["bound_mean_phi"] = 1.0 - delta
                report["within_bound"] = bool(est.mean <= 1.0 - delta + 3.0 * est.stderr)
    if (args.format or "json") == "csv":
        _emit_csv(tuple(report.keys()), [tuple(report.values())], args.out)
    else:
        _emit_json(report, args.out)
    return EXIT_OK


# ---------------------------------------------------------------- analyze

def cmd_analyze(args) -> int:
    alphas = [float(tok) for tok in str(args.alphas or "2,2.1,2.5,3,4").split(",") if tok.strip()]
    ref_degree = args.delta_max if args.delta_max is not None else 2
    mix_n = args.mix_n if args.mix_n is not None else 100
    eps = float(args.eps) if args.eps is not None else 0.01

    rows = []
    table = []
    for alpha in alphas:
        if args.gamma is not None and str(args.gamma) != "auto":
            gamma, delta = float(args.gamma), analysis.delta_wrapup(alpha, float(args.gamma))
            feasible = delta > 0.0
        else:
            opt = analysis.optimize_gamma(alpha)
            gamma, delta, feasible = opt.gamma, opt.delta, opt.feasible
        # The closed forms are continuous in q, so the sweep may use the
        # real-valued q = alpha * degree even when it is not a color count.
        q = alpha * ref_degree
        pb = analysis.path_bound(ref_degree, q, gamma)
        vb = analysis.v0_bound(ref_degree, q, gamma)
        mix = analysis.mixing_bound(delta, mix_n, eps) if feasible else "infeasible"
        rows.append((alpha, gamma, pb, vb, vb + pb, delta, mix))
        table.append((alpha, gamma, delta, feasible))

    header = ("alpha", "gamma", "path_bound", "v0_bound", "combined", "delta", "mixing_bound_rounds")
    if (args.format or "csv") == "json":
        _emit_json([dict(zip(header, row)) for row in rows], args.out)
    else:
        _emit_csv(header, rows, args.out)
    if args.table_out:
        _emit_csv(("alpha", "gamma_star", "delta_star", "feasible"), table, args.table_out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
