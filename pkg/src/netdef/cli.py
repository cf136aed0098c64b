"""Command-line front end: ``netdef <subcommand> [flags]``.

Exit codes: 0 success, 1 a check failed, 2 bad input, 3 a size limit or an
unsupported (n_B, n_A) combination.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from .analysis import poa_trend, price_of_anarchy, trend_svg
from .centralized import optimal_design, threshold_table
from .equilibria import MODES, node_game_equilibria
from .errors import DomainError, InvalidArgument, LimitExceeded, UnsupportedConfiguration
from .game import GameConfig
from .graph import Network, build_generalized_star
from .oracle import brute_force_optimal
from .rationals import format_rational, parse_positive, parse_rational
from .valuefn import ValueFunction, validate_value_function

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3

# Optimal networks for f(x) = x^2, transcribed as printed (decimals kept verbatim).
TABLE2 = {
    12: [("", "3.50", "12-star"), ("3.50", "9.50", "6-star"), ("9.50", "11.25", "4-star"),
         ("11.25", "", "two disconnected components of equal size")],
    30: [("", "3.80", "30-star"), ("3.80", "11", "15-star"), ("11", "26", "10-star"),
         ("26", "49", "6-star"), ("49", "70.20", "5-star"),
         ("70.20", "", "two disconnected components of equal size")],
    50: [("", "3.88", "50-star"), ("3.88", "11.875", "25-star"), ("11.875", "23.25", "17-star"),
         ("23.25", "30.(3)", "13-star"), ("30.(3)", "85", "10-star"), ("85", "195", "5-star"),
         ("195", "", "two disconnected components of equal size")],
}


class UsageError(Exception):
    pass


def _fixture_rows(n: int):
    rows = []
    for lo, hi, label in TABLE2[n]:
        k = int(label.split("-")[0]) if label.endswith("-star") else 0
        rows.append((parse_rational(lo) if lo else Fraction(0),
                     parse_rational(hi) if hi else None, k))
    return rows


# ---------------------------------------------------------------- helpers

def _value_function(args) -> ValueFunction:
    if getattr(args, "f_json", None):
        with open(args.f_json, encoding="utf-8") as fh:
            return ValueFunction.from_dict(json.load(fh))
    fam = args.family
    if fam == "power":
        return ValueFunction.power(args.a)
    if fam == "exp":
        return ValueFunction.exp()
    if args.values_file:
        with open(args.values_file, encoding="utf-8") as fh:
            text = fh.read()
    elif args.values:
        text = args.values
    else:
        raise InvalidArgument("table family needs --values or --values-file")
    items = [t for t in text.replace("\n", ",").split(",") if t.strip()]
    return ValueFunction.table([t.strip() for t in items])


def _jobs_default() -> int:
    raw = os.environ.get("NETDEF_JOBS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _config_line(args, extra: dict | None = None) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items())
           if k not in ("func", "out", "svg") and v is not None}
    cfg.update(extra or {})
    return cfg


def _header(cfg: dict) -> str:
    return "# config: " + json.dumps(cfg, sort_keys=True, default=str) + "\n"


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerows(rows)
    return buf.getvalue()


def _game(args, n: int) -> GameConfig:
    return GameConfig(n, args.nb, args.na, parse_positive(args.c), _value_function(args))


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------- commands

def cmd_validate_f(args) -> int:
    f = _value_function(args)
    report = validate_value_function(f, args.xmax)
    payload = {"config": _config_line(args), "function": f.to_dict(), "report": report.to_dict()}
    _emit(args, _json(payload))
    for name, res in report.failures().items():
        print(f"FAIL {name}: witness {list(res.witness)} ({res.detail})", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_CHECK


def cmd_thresholds(args) -> int:
    if args.nb != 1 or args.na != 1:
        raise UnsupportedConfiguration("threshold tables exist only for n_B = n_A = 1")
    f = _value_function(args)
    table = threshold_table(args.n, f)
    cfg = _config_line(args)

    def edge(q):
        return "" if q is None else format_rational(q)

    if args.format == "csv":
        rows = [["c_low", "c_high", "k", "w_k", "structure"]]
        rows += [[edge(r.c_low), edge(r.c_high), r.k, format_rational(r.w), r.description]
                 for r in table.rows]
        text = _header(cfg) + _csv(rows)
    elif args.format == "json":
        text = _json({"config": cfg, "rows": [
            {"c_low": edge(r.c_low), "c_high": edge(r.c_high), "k": r.k,
             "w_k": format_rational(r.w), "structure": r.description,
             "interval": r.interval_text()} for r in table.rows]})
    else:
        lines = []
        for r in table.rows:
            if r.c_low == 0:
                iv = f"c < {format_rational(r.c_high)}"
            elif r.c_high is None:
                iv = f"c > {format_rational(r.c_low)}"
            else:
                iv = f"c in ({format_rational(r.c_low)}, {format_rational(r.c_high)})"
            lines.append(f"{iv}: {r.description}  [{r.interval_text()}]")
        text = _header(cfg) + "\n".join(lines) + "\n"
    _emit(args, text)
    if args.expect:
        if args.n not in TABLE2:
            raise InvalidArgument(f"no embedded fixture for n = {args.n}; choose from {sorted(TABLE2)}")
        if f != ValueFunction.power(2):
            raise InvalidArgument("the embedded fixture is for f(x) = x^2")
        got = [(r.c_low, r.c_high, r.k) for r in table.rows]
        if got != _fixture_rows(args.n):
            print(f"MISMATCH against table2 n={args.n}", file=sys.stderr)
            return EXIT_CHECK
        print(f"MATCH table2 n={args.n}", file=sys.stderr)
    return EXIT_OK


def cmd_optimal(args) -> int:
    f = _value_function(args)
    out = optimal_design(args.n, parse_positive(args.c), f, args.nb, args.na)
    _emit(args, _json({"config": _config_line(args), "design": out.to_dict()}))
    return EXIT_OK


def cmd_oracle(args) -> int:
    cfg = _game(args, args.n)
    out = brute_force_optimal(cfg, args.search)
    payload = {"config": _config_line(args), "design": out.to_dict()}
    code = EXIT_OK
    if args.compare:
        closed = optimal_design(args.n, cfg.c, cfg.f, cfg.n_B, cfg.n_A)
        match = closed.payoff == out.payoff
        payload["closed_form_payoff"] = format_rational(closed.payoff)
        payload["match"] = match
        print("MATCH" if match else "MISMATCH", file=sys.stderr)
        code = EXIT_OK if match else EXIT_CHECK
    _emit(args, _json(payload))
    return code


def cmd_equilibria(args) -> int:
    if bool(args.star) == bool(args.network):
        raise InvalidArgument("give exactly one of --star n:k or --network FILE")
    core = None
    if args.star:
        try:
            n, k = (int(t) for t in args.star.split(":"))
        except ValueError as exc:
            raise InvalidArgument(f"--star expects n:k, got {args.star!r}") from exc
        star = build_generalized_star(n, k)
        g, core = star.network, sorted(star.core)
    else:
        with open(args.network, encoding="utf-8") as fh:
            g = Network.from_json(fh.read())
    cfg = _game(args, g.n)
    eqs = node_game_equilibria(g, cfg, args.mode)
    conf = _config_line(args)
    if args.format == "json":
        text = _json({"config": conf, "equilibria": eqs.to_dict()})
    elif args.format == "csv":
        rows = [["strategies", "designer_value"] + [f"u{j}" for j in range(g.n)]]
        rows += [[p.bits, format_rational(p.designer_value)]
                 + [format_rational(u) for u in p.utilities] for p in eqs]
        text = _header(conf) + _csv(rows)
    else:
        lines = []
        for p in eqs:
            if core is not None:
                cb = "".join(str(p.strategies[v]) for v in core)
                pb = "".join(str(p.strategies[v]) for v in range(len(core), g.n))
                lines.append(f"core {cb} periphery {pb or '-'} designer {format_rational(p.designer_value)}")
            else:
                lines.append(f"{p.bits} designer {format_rational(p.designer_value)}")
        if not eqs.exists:
            lines.append("no pure equilibrium")
        text = _header(conf) + "\n".join(lines) + "\n"
    _emit(args, text)
    return EXIT_OK


def _parse_ns(text: str) -> list[int]:
    try:
        ns = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise InvalidArgument(f"--n expects integers, got {text!r}") from exc
    if not ns:
        raise InvalidArgument("--n is empty")
    return ns


def cmd_poa(args) -> int:
    f = _value_function(args)
    c = parse_positive(args.c)
    ns = _parse_ns(args.n)
    conf = _config_line(args)
    if not args.trend:
        if len(ns) != 1:
            raise InvalidArgument("give one n, or use --trend")
        rep = price_of_anarchy(GameConfig(ns[0], args.nb, args.na, c, f))
        _emit(args, _json({"config": conf, "poa": rep.to_dict()}))
        return EXIT_OK
    trend = poa_trend(c, ns, args.nb, args.na, f, jobs=args.jobs)
    for w in trend.warnings:
        print(f"warning: {w}", file=sys.stderr)
    if args.format == "json":
        text = _json({"config": conf, "trend": trend.to_dict()})
    else:
        rows = [["n", "numerator", "denominator", "ratio", "ratio_minus_one", "ratio_decimal",
                 "best_member", "below_large_n_regime"]]
        for r in trend.reports:
            ratio = "" if r.ratio is None else format_rational(r.ratio)
            excess = "" if r.ratio is None else format_rational(r.ratio - 1)
            dec = "" if r.ratio is None else f"{float(r.ratio):.6f}"
            rows.append([r.n, format_rational(r.numerator), format_rational(r.denominator),
                         ratio, excess, dec, r.best_member, int(r.below_regime)])
        text = _header(conf) + _csv(rows)
    _emit(args, text)
    svg = args.svg or "poa_trend.svg"
    with open(svg, "w", encoding="utf-8") as fh:
        fh.write(trend_svg(trend))
    print(f"SVG written to {svg}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------- parser

def _add_f(p) -> None:
    p.add_argument("--family", choices=["power", "exp", "table"], default="power")
    p.add_argument("--a", type=int, default=2, help="exponent of the power family")
    p.add_argument("--values", help="comma-separated table f(0),f(1),...")
    p.add_argument("--values-file", help="file with table values, commas or newlines")
    p.add_argument("--f-json", help="value function in JSON form")


def _add_game(p, with_n=True) -> None:
    if with_n:
        p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", required=True, help="cost: integer, decimal or p/q")
    p.add_argument("--nb", type=int, default=1)
    p.add_argument("--na", type=int, default=1)
    _add_f(p)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="netdef", description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0, help="RNG seed, echoed into outputs")
    ap.add_argument("--jobs", type=int, default=_jobs_default(),
                    help="worker processes (default: $NETDEF_JOBS or 1)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate-f", help="check the value-function assumptions on [0, xmax]")
    _add_f(p)
    p.add_argument("--xmax", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_validate_f)

    p = sub.add_parser("thresholds", help="cost thresholds of the centralized optimum")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--nb", type=int, default=1)
    p.add_argument("--na", type=int, default=1)
    _add_f(p)
    p.add_argument("--format", choices=["csv", "text", "json"], default="text")
    p.add_argument("--expect", choices=["table2"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("optimal", help="closed-form optimal design")
    _add_game(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_optimal)

    p = sub.add_parser("oracle", help="brute-force optimal design")
    _add_game(p)
    p.add_argument("--search", choices=["all-graphs", "structured"], default="all-graphs")
    p.add_argument("--compare", action="store_true", help="cross-check against the closed form")
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("equilibria", help="pure equilibria of the node game")
    p.add_argument("--star", help="canonical generalized star n:k")
    p.add_argument("--network", help="network JSON file")
    _add_game(p, with_n=False)
    p.add_argument("--mode", choices=MODES, default="pessimistic")
    p.add_argument("--format", choices=["csv", "text", "json"], default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_equilibria)

    p = sub.add_parser("poa", help="price of anarchy, optionally as a trend in n")
    p.add_argument("--n", required=True, help="n, or a comma-separated list with --trend")
    p.add_argument("--c", required=True)
    p.add_argument("--nb", type=int, default=1)
    p.add_argument("--na", type=int, default=1)
    _add_f(p)
    p.add_argument("--trend", action="store_true")
    p.add_argument("--svg", help="SVG path for --trend (default poa_trend.svg)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_poa)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UnsupportedConfiguration, LimitExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (InvalidArgument, DomainError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
