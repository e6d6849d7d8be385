"""Command line entry point: ``rrtlab {gen,count,pendant,exact,eval,exp}``.

Exit status: 0 success, 2 usage or configuration error, 3 sentence is false
(``eval`` only), 4 refused because a budget would be exceeded.  Data goes to
stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from fractions import Fraction

from . import exactprob, subgraph
from .errors import BudgetExceeded, DomainError
from .graphcore import LabeledGraph, RootedPattern
from .logic import (
    DEFAULT_MAX_ASSIGNMENTS,
    LogicSyntaxError,
    build_at_least_diamonds,
    build_complete,
    build_disconnected,
    evaluate,
    parse_sentence,
)
from .pendant import count_pendants, count_windowed
from .treegen import CONVENTIONS, DEFAULT_HISTORY_BUDGET, GrowthConfig, exact_expectation, generate

EXIT_OK, EXIT_USAGE, EXIT_FALSE, EXIT_BUDGET = 0, 2, 3, 4
SEED_ENV = "RRTLAB_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return 0
    try:
        seed = int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be a non-negative integer, got {raw!r}") from None
    if seed < 0:
        raise UsageError(f"{SEED_ENV} must be a non-negative integer, got {raw!r}")
    return seed


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _write_text(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as e:
        raise UsageError(f"cannot write {path}: {e.strerror}") from None


def _load_graph(path: str) -> LabeledGraph:
    return LabeledGraph.from_text(_read_text(path))


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


# ----------------------------------------------------------------------------
# subcommands


def cmd_gen(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    cfg = GrowthConfig(n=args.n, m=args.m, model=args.model, pa_convention=args.convention, seed=seed)
    _write_text(args.output, generate(cfg).to_text())
    return EXIT_OK


def cmd_count(args) -> int:
    g = _load_graph(args.graph)
    if args.stat == "diamonds":
        value = subgraph.count_diamonds(g)
    elif args.stat == "cliques":
        if args.size is None:
            raise UsageError("count --stat cliques needs --size")
        value = subgraph.count_cliques(g, args.size)
    else:
        value = len(g.edges)
    print(value)
    return EXIT_OK


def cmd_pendant(args) -> int:
    t = _load_graph(args.graph)
    p = RootedPattern.parse(args.pattern)
    if args.windowed is not None:
        n0, r = args.windowed
        print(count_windowed(t, p, n0, r))
    else:
        print(count_pendants(t, p))
    return EXIT_OK


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"formula {args.formula} needs {', '.join(missing)}")
    return [getattr(args, n) for n in names]


def _pattern(args) -> RootedPattern:
    (text,) = _need(args, "pattern")
    return RootedPattern.parse(text)


def _exact_value(args) -> tuple[Fraction, dict, dict]:
    """(value, params used, extra JSON fields) for ``exact --formula``."""
    f = args.formula
    extra: dict = {}
    if f == "ua-diamond-expectation":
        (n,) = _need(args, "n")
        return exactprob.ua_diamond_expectation(n), {"n": n}, extra
    if f == "ua-diamond-exhaustive":
        (n,) = _need(args, "n")
        value = exact_expectation(subgraph.count_diamonds, n, 2, "UA", budget=args.max_histories)
        return value, {"n": n, "max_histories": args.max_histories}, extra
    if f == "ua-diamond-limit":
        (eps,) = _need(args, "eps")
        est = exactprob.ua_diamond_limit(eps)
        extra = {"tail_bound": {"num": est.tail_bound.numerator, "den": est.tail_bound.denominator}, "terms": est.terms}
        return est.value, {"eps": str(eps)}, extra
    if f in ("ua-clique-expectation", "ua-clique-upper"):
        n, m = _need(args, "n", "m")
        fn = exactprob.ua_clique_expectation if f == "ua-clique-expectation" else exactprob.ua_clique_upper
        return fn(n, m, max_tuples=args.max_tuples), {"n": n, "m": m, "max_tuples": args.max_tuples}, extra
    if f == "ua-pendant-prob":
        v, n = _need(args, "v", "n")
        return exactprob.ua_pendant_prob_closed(v, n), {"v": v, "n": n}, extra
    if f in ("ua-windowed-expectation", "ua-chebyshev-bound"):
        n0, r, v, n = _need(args, "n0", "r", "v", "n")
        fn = exactprob.ua_windowed_expectation if f == "ua-windowed-expectation" else exactprob.ua_chebyshev_bound
        return fn(n0, r, v, n), {"n0": n0, "r": r, "v": v, "n": n}, extra
    if f == "pa-pendant-prob":
        p = _pattern(args)
        i1, n = _need(args, "i1", "n")
        return exactprob.pa_pendant_prob_closed(p, i1, n), {"pattern": args.pattern, "i1": i1, "n": n}, extra
    if f == "pa-expectation":
        p = _pattern(args)
        (n,) = _need(args, "n")
        extra = {"asymptotic": exactprob.pa_expectation_asymptotic(p, n)}
        value = exactprob.pa_expectation_exact(p, n, max_tuples=args.max_tuples)
        return value, {"pattern": args.pattern, "n": n, "max_tuples": args.max_tuples}, extra
    if f == "beta-three-halves":
        (v,) = _need(args, "v")
        return exactprob.beta_three_halves(v), {"v": v}, extra
    if f == "markov-threshold":
        beta, eps = _need(args, "beta_upper", "eps")
        k = exactprob.markov_threshold(beta, eps, args.statistic, args.m)
        return Fraction(k), {"beta_upper": str(beta), "eps": str(eps), "statistic": args.statistic, "m": args.m}, extra
    raise UsageError(f"unknown formula {f!r}")  # pragma: no cover - argparse restricts choices


def cmd_exact(args) -> int:
    value, params, extra = _exact_value(args)
    if args.json:
        out = {
            "formula": args.formula,
            "params": params,
            "rational": {"num": value.numerator, "den": value.denominator},
            "decimal": float(value),
            **extra,
        }
        print(json.dumps(out))
    else:
        print(f"{value.numerator}/{value.denominator} ({float(value)!r})")
    return EXIT_OK


def _builtin_sentence(name: str, c: int | None):
    if name == "complete":
        return build_complete()
    if name == "disconnected":
        return build_disconnected()
    if name.startswith("diamonds:"):
        try:
            c = int(name.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad diamond count in --builtin {name!r}") from None
        name = "at-least-diamonds"
    if name == "at-least-diamonds":
        if c is None:
            raise UsageError("--builtin at-least-diamonds needs --c")
        return build_at_least_diamonds(c)
    raise UsageError(f"unknown builtin {name!r} (complete, disconnected, diamonds:C)")


def cmd_eval(args) -> int:
    sources = [x for x in (args.builtin, args.sentence, args.sentence_file) if x is not None]
    if len(sources) != 1:
        raise UsageError("eval needs exactly one of --builtin, --sentence, --sentence-file")
    if args.builtin is not None:
        s = _builtin_sentence(args.builtin, args.c)
    else:
        text = args.sentence if args.sentence is not None else _read_text(args.sentence_file)
        s = parse_sentence(text.strip())
    g = _load_graph(args.graph)
    ok = evaluate(s, g, max_assignments=args.max_assignments)
    print("true" if ok else "false")
    return EXIT_OK if ok else EXIT_FALSE


def cmd_exp(args) -> int:
    from .experiment import load_config, run

    spec = load_config(args.config, default_seed=_default_seed())
    overrides = {k: getattr(args, k) for k in ("trials", "seed", "output") if getattr(args, k) is not None}
    if overrides:
        spec = dataclasses.replace(spec, **overrides)
    result = run(spec, log=lambda line: print(line, file=sys.stderr))
    sys.stdout.write(result.to_csv())
    return EXIT_OK


# ----------------------------------------------------------------------------


FORMULAS = (
    "ua-diamond-expectation",
    "ua-diamond-exhaustive",
    "ua-diamond-limit",
    "ua-clique-expectation",
    "ua-clique-upper",
    "ua-pendant-prob",
    "ua-windowed-expectation",
    "ua-chebyshev-bound",
    "pa-pendant-prob",
    "pa-expectation",
    "beta-three-halves",
    "markov-threshold",
)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="rrtlab", description="Random attachment graphs: sampling, counting, exact formulas, logic, experiments.")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    g = sub.add_parser("gen", help="sample a UA or PA graph")
    g.add_argument("--model", type=str.upper, choices=("UA", "PA"), required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, default=1)
    g.add_argument("--seed", type=int, default=None, help=f"default: ${SEED_ENV} or 0")
    g.add_argument("--convention", choices=CONVENTIONS, default="normalized")
    g.add_argument("-o", "--output", default=None)
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("count", help="count subgraphs of a graph file")
    c.add_argument("--graph", required=True)
    c.add_argument("--stat", choices=("diamonds", "cliques", "edges"), default="diamonds")
    c.add_argument("--size", type=int, default=None, help="clique size for --stat cliques")
    c.set_defaults(func=cmd_count)

    p = sub.add_parser("pendant", help="count pendant copies of a rooted pattern in a tree")
    p.add_argument("--graph", required=True)
    p.add_argument("--pattern", required=True, help="parent array, e.g. '0 1 1'")
    p.add_argument("--windowed", type=int, nargs=2, metavar=("N0", "R"), default=None)
    p.set_defaults(func=cmd_pendant)

    e = sub.add_parser("exact", help="evaluate an exact formula")
    e.add_argument("--formula", choices=FORMULAS, required=True)
    for name in ("n", "m", "v", "n0", "r", "i1"):
        e.add_argument(f"--{name}", type=int, default=None)
    e.add_argument("--eps", type=_rational, default=None)
    e.add_argument("--beta-upper", type=_rational, default=None)
    e.add_argument("--statistic", choices=("diamond", "clique"), default="diamond")
    e.add_argument("--pattern", default=None)
    e.add_argument("--max-histories", type=int, default=DEFAULT_HISTORY_BUDGET)
    e.add_argument("--max-tuples", type=int, default=2_000_000)
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_exact)

    v = sub.add_parser("eval", help="check a FO/MSO sentence on a graph file")
    v.add_argument("--graph", "--graph-file", dest="graph", required=True)
    v.add_argument("--builtin", default=None, help="complete | disconnected | diamonds:C | at-least-diamonds (with --c)")
    v.add_argument("--sentence", default=None)
    v.add_argument("--sentence-file", default=None)
    v.add_argument("--c", type=int, default=None)
    v.add_argument("--max-assignments", type=int, default=DEFAULT_MAX_ASSIGNMENTS)
    v.set_defaults(func=cmd_eval)

    x = sub.add_parser("exp", help="run a Monte Carlo experiment from a JSON config")
    x.add_argument("--config", required=True)
    x.add_argument("--trials", type=int, default=None)
    x.add_argument("--seed", type=int, default=None)
    x.add_argument("--output", default=None)
    x.set_defaults(func=cmd_exp)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except BudgetExceeded as e:
        print(f"rrtlab: refused: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, DomainError, LogicSyntaxError, ValueError) as e:
        print(f"rrtlab: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
