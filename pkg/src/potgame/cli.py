"""Command-line front end.

Exit codes: 0 success, 2 covert-signaling selection infeasible,
3 bad input.  Errors are written to stderr as a JSON object.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import __version__
from .bimatrix import enumerate_extreme_equilibria
from .errors import PotError
from .game import parse_game, posterior_from_structure
from .numeric import format_rational
from .persuasion import solve_op
from .pot import compute_pot
from .quadratic import convergence_order, quadratic_report, simulate_quadratic
from .tsb import assemble_pbe, check_belief_dominance, check_pbe, equilibrium_to_dict, parse_equilibrium, solve_cs

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_INPUT = 3


class UsageError(Exception):
    pass


def _fmt(v):
    if isinstance(v, Fraction):
        return format_rational(v)
    return v


def _table_value(v) -> str:
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return str(v)
        return f"{v} (≈ {float(v):.6g})"
    if isinstance(v, float):
        return f"{v:.10g}"
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(_table_value(x) for x in v) + ")"
    if v is None:
        return "-"
    return str(v)


def _render_table(rows) -> str:
    rows = [(str(k), _table_value(v)) for k, v in rows]
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows) + "\n"


def _render_csv(header, records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for rec in records:
        w.writerow([repr(x) if isinstance(x, float) else _fmt(x) for x in rec])
    return buf.getvalue()


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _load_game(path):
    try:
        with open(path, "rb") as fh:
            return parse_game(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _tuple_dict(t):
    return {"a": [_fmt(x) for x in t.a], "lambda": [_fmt(x) for x in t.lam], "x": _fmt(t.x), "y": _fmt(t.y)}


def _sol_doc(game, sol, report):
    pi, a, lam = assemble_pbe(game, sol)
    doc = equilibrium_to_dict(game, pi, a, lam, sol.gamma)
    doc["value"] = _fmt(sol.value)
    doc["check"] = report.to_dict()
    return doc


def cmd_solve_op(args, out):
    game = _load_game(args.game)
    sol = solve_op(game)
    lam = posterior_from_structure(game, sol.pi).lam
    doc = equilibrium_to_dict(game, sol.pi, sol.a, lam)
    doc["recommendations"] = [game.actions[k] for k in sol.signals]
    doc["z"] = [[_fmt(x) for x in row] for row in sol.z]
    if args.format == "table":
        out.write(_render_table([
            ("U^OP", sol.value),
            ("receiver value", sol.receiver_value),
            ("recommendations", [game.actions[k] for k in sol.signals]),
        ] + [(f"z[{s}]", row) for s, row in zip(game.states, sol.z)]))
    else:
        out.write(_dump(doc))
    return EXIT_OK


def cmd_solve_cs(args, out):
    game = _load_game(args.game)
    res = solve_cs(game)
    if args.format == "table":
        rows = [(name, value) for name, value in res.values().items()]
        rows += [(f"{name} passes PBE check", rep.ok) for name, rep in res.checks.items()]
        rows += [(f"{name} failed", msg) for name, msg in res.failures.items()]
        out.write(_render_table(rows))
    else:
        doc = {"candidates": [_tuple_dict(t) for t in res.candidates]}
        for name in ("tsb_max", "tsb_min", "pbe_max", "pbe_min"):
            sol = getattr(res, name)
            doc[name] = None if sol is None else _sol_doc(game, sol, res.checks[name])
        bab = res.babbling
        bdoc = equilibrium_to_dict(game, bab.pi, bab.a, bab.lam)
        bdoc["sender_worst"] = _fmt(bab.sender_worst)
        doc["babbling"] = bdoc
        doc["failures"] = res.failures
        out.write(_dump(doc))
    return EXIT_OK if res.tsb_feasible else EXIT_INFEASIBLE


def cmd_pot(args, out):
    game = _load_game(args.game)
    rep = compute_pot(game)
    cert = rep.competitive.as_tuple() if rep.competitive else None
    if args.format == "table":
        rows = [("U^OP", rep.uop)]
        for name, v in rep.cs_values.items():
            rows.append((name, v))
        for name, r in rep.ratios.items():
            rows.append((f"PoT({name})", r))
        if rep.ratio_note:
            rows.append(("note", rep.ratio_note))
        rows.append(("competitive (c,d,e,f)", cert))
        for name, hit in rep.competitive_identities.items():
            rows.append((f"U^CS == {name}", hit))
        out.write(_render_table(rows))
    else:
        out.write(_dump({
            "uop": _fmt(rep.uop),
            "cs_values": {k: _fmt(v) for k, v in rep.cs_values.items()},
            "ratios": {k: _fmt(v) for k, v in rep.ratios.items()},
            "ratio_note": rep.ratio_note,
            "competitive": None if cert is None else [_fmt(x) for x in cert],
            "competitive_identities": rep.competitive_identities,
        }))
    return EXIT_OK if rep.cs.tsb_feasible else EXIT_INFEASIBLE


def cmd_enumerate(args, out):
    game = _load_game(args.game)
    tuples = enumerate_extreme_equilibria(game.U, game.V)
    if args.format == "table":
        out.write(_render_table([(f"#{i}", (t.a, t.lam, t.x, t.y)) for i, t in enumerate(tuples)]))
    elif args.format == "csv":
        header = [f"a_{x}" for x in game.actions] + [f"lambda_{s}" for s in game.states] + ["x", "y"]
        out.write(_render_csv(header, [list(t.a) + list(t.lam) + [t.x, t.y] for t in tuples]))
    else:
        out.write(_dump([_tuple_dict(t) for t in tuples]))
    return EXIT_OK


def cmd_check(args, out):
    game = _load_game(args.game)
    try:
        with open(args.equilibrium, "rb") as fh:
            pi, a, lam = parse_equilibrium(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {args.equilibrium}: {exc.strerror}") from exc
    rep = check_pbe(game, pi, a, lam)
    doc = rep.to_dict()
    doc["belief_dominance_violations"] = check_belief_dominance(game, a, lam)
    if args.format == "table":
        out.write(_render_table(list(doc.items())))
    else:
        out.write(_dump(doc))
    return EXIT_OK


def cmd_quadratic(args, out):
    rep = quadratic_report(args.b, args.n)
    d = rep.to_dict()
    if args.format == "table":
        out.write(_render_table(list(d.items())))
    elif args.format == "csv":
        out.write(_render_csv(["b", "N", "ucs", "uop", "ratio_abs"], [[rep.b, rep.n, rep.ucs, rep.uop, rep.ratio_abs]]))
    else:
        out.write(_dump(d))
    return EXIT_OK


def _parse_grid(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --grid value: {text!r}") from exc


def cmd_quadratic_sweep(args, out):
    conv = convergence_order(_parse_grid(args.grid))
    header = ["b", "N", "ucs", "uop", "ratio_abs"]
    records = []
    for rep in conv.table:
        rec = [rep.b, rep.n, rep.ucs, rep.uop, rep.ratio_abs]
        if args.simulate:
            sim = simulate_quadratic(rep.b, rep.n, args.trials, args.seed)
            rec += [sim.sender_mean, sim.sender_se]
        records.append(rec)
    if args.simulate:
        header += ["sim_sender_mean", "sim_sender_se"]
    if args.format == "csv":
        out.write(_render_csv(header, records))
    elif args.format == "table":
        rows = [("slope_cs", conv.slope_cs), ("slope_op", conv.slope_op)]
        rows += [(f"b={rec[0]:g}", rec[1:]) for rec in records]
        out.write(_render_table(rows))
    else:
        out.write(_dump({
            "slope_cs": conv.slope_cs,
            "slope_op": conv.slope_op,
            "columns": header,
            "rows": records,
        }))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("json", "table", "csv"), default="json")

    parser = argparse.ArgumentParser(prog="potgame", description="Persuasion vs. signaling equilibria and the price of transparency.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, func, help_ in (
        ("solve-op", cmd_solve_op, "sender-preferred persuasion equilibrium"),
        ("solve-cs", cmd_solve_cs, "covert signaling equilibria (TSB max/min, verified, babbling)"),
        ("pot", cmd_pot, "price of transparency report"),
        ("enumerate", cmd_enumerate, "extreme equilibria of the belief game"),
    ):
        p = sub.add_parser(name, parents=[fmt], help=help_)
        p.add_argument("game")
        p.set_defaults(func=func)

    p = sub.add_parser("check", parents=[fmt], help="check a PBE triple against a game")
    p.add_argument("game")
    p.add_argument("equilibrium")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("quadratic", parents=[fmt], help="closed forms of the quadratic game")
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--n", type=int, default=None)
    p.set_defaults(func=cmd_quadratic)

    p = sub.add_parser("quadratic-sweep", parents=[fmt], help="convergence order over a bias grid")
    p.add_argument("--grid", required=True, help="comma-separated biases")
    p.add_argument("--simulate", action="store_true")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_quadratic_sweep)
    return parser


def _error(err, kind, message):
    err.write(json.dumps({"error": kind, "message": message}) + "\n")


def run(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    csv_ok = {"enumerate", "quadratic", "quadratic-sweep"}
    if args.format == "csv" and args.command not in csv_ok:
        _error(err, "UsageError", f"--format csv is not available for {args.command}")
        return EXIT_INPUT
    try:
        return args.func(args, out)
    except UsageError as exc:
        _error(err, "UsageError", str(exc))
        return EXIT_INPUT
    except (PotError, ValueError) as exc:
        _error(err, type(exc).__name__, str(exc))
        return EXIT_INPUT


def main():
    sys.exit(run())
