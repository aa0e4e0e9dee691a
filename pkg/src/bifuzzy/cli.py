"""Command-line front end.

Exit codes: 0 success or positive verdict, 1 negative verdict, 2 usage or
input error, 3 state budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields, replace
from pathlib import Path
from typing import Sequence, TextIO

from bifuzzy.approx import ValueLattice, infimal_closed_controllable, is_controllable_finite, supremal_controllable
from bifuzzy.automaton import as_string, language_degree, marked_degree, parallel_compose
from bifuzzy.errors import BifuzzyError, ParseError, StateBudgetExceeded, ValidationError
from bifuzzy.ncfd import GridSpec, IntervalDegree, NCFD, centroid, embed, format_ncfd, parse_ncfd, rank_geq
from bifuzzy.serialize import (
    automaton_to_dict,
    dumps,
    finitelang_to_dict,
    parse_automaton,
    parse_finitelang,
    parse_ucmap,
    report_to_dict,
)
from bifuzzy.supervisory import DEFAULT_BUDGET, ControllabilityReport, check_controllability, check_nonblocking_supervision
from bifuzzy.traffic import MODES, ROUTINGS, TrafficConfig, compare_controllers, run_simulation

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # report through main() instead of exiting
        raise _UsageError(f"{self.format_usage()}{self.prog}: {message}")


class _UsageError(Exception):
    pass


def _fmt_string(s: Sequence[str]) -> str:
    return ".".join(s) if s else "ε"


def _table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(headers)]
    line = lambda cells: "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()  # noqa: E731
    out = [line(headers), line(["-" * w for w in widths])]
    out.extend(line(r) for r in rows)
    return "\n".join(out)


def render_report(rep: ControllabilityReport) -> str:
    """Aligned text: reachable pairs, one row per (s, σ) test, then the verdict."""
    parts = ["reachable state pairs"]
    parts.append(
        _table(
            ["i", "[s]", "plant state", "spec state"],
            [
                [str(i), _fmt_string(p.witness), "[" + ", ".join(map(str, p.plant_state)) + "]", "[" + ", ".join(map(str, p.spec_state)) + "]"]
                for i, p in enumerate(rep.pairs)
            ],
        )
    )
    parts.append("")
    parts.append("controllability test")
    parts.append(
        _table(
            ["s", "σ", "L_G(sσ)", "L_R(s)", "Σuc(σ)", "L_R(sσ)", "holds"],
            [
                [_fmt_string(r.witness), r.event, str(r.plant_next), str(r.spec_now), str(r.uc), str(r.spec_next), str(r.holds).lower()]
                for r in rep.rows
            ],
        )
    )
    parts.append("")
    parts.append(f"verdict: {rep.verdict}")
    for v in rep.violations:
        parts.append(f"violation: s={_fmt_string(v.witness)} σ={v.event}: {v.lhs} ⋢ {v.rhs}")
    if rep.lm_closure is not None:
        lm = rep.lm_closure
        parts.append(f"Lm-closure: {'holds' if lm.holds else 'fails'}")
        for m in lm.mismatches:
            parts.append(f"closure mismatch: s={_fmt_string(m.witness)}: {m.spec_marked} != {m.expected}")
        parts.append(f"nonblocking supervisor: {'achievable' if rep.nonblocking_achievable else 'not achievable'}")
    return "\n".join(parts) + "\n"


def _degree_arg(text: str, grid: GridSpec) -> NCFD:
    t = text.strip()
    if t.startswith("[") and t.endswith("]"):
        try:
            lo, hi = (float(x) for x in t[1:-1].split(","))
        except ValueError:
            raise ParseError(f"bad interval {text!r}, expected [lo,hi]", "argument") from None
        return embed(IntervalDegree(lo, hi), grid)
    return parse_ncfd(t)


def _load_traffic_config(path: str | None) -> TrafficConfig:
    if path is None:
        return TrafficConfig()
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", path) from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", f"{path}:{exc.lineno}:{exc.colno}") from None
    if not isinstance(doc, dict):
        raise ParseError("expected a JSON object", path)
    known = {f.name for f in fields(TrafficConfig)}
    unknown = sorted(set(doc) - known)
    if unknown:
        raise ParseError(f"unknown config keys {unknown}", path)
    try:
        return TrafficConfig(**doc)
    except TypeError as exc:
        raise ParseError(str(exc), path) from None


def _cmd_check(args, out: TextIO) -> int:
    g = parse_automaton(args.plant)
    r = parse_automaton(args.spec)
    uc = parse_ucmap(args.uc)
    fn = check_nonblocking_supervision if args.nonblocking else check_controllability
    rep = fn(g, r, uc, args.budget)
    if args.json_out:
        Path(args.json_out).write_text(dumps(report_to_dict(rep)), encoding="utf-8")
    out.write(dumps(report_to_dict(rep)) if args.format == "json" else render_report(rep))
    ok = rep.nonblocking_achievable if args.nonblocking else rep.controllable
    return EXIT_OK if ok else EXIT_NEGATIVE


def _cmd_compose(args, out: TextIO) -> int:
    doc = dumps(automaton_to_dict(parallel_compose(parse_automaton(args.first), parse_automaton(args.second))))
    if args.output:
        Path(args.output).write_text(doc, encoding="utf-8")
    else:
        out.write(doc)
    return EXIT_OK


def _cmd_eval(args, out: TextIO) -> int:
    g = parse_automaton(args.automaton)
    s = as_string(args.string)
    out.write(f"L(s) = {format_ncfd(language_degree(g, s))}\n")
    out.write(f"Lm(s) = {format_ncfd(marked_degree(g, s))}\n")
    return EXIT_OK


def _cmd_approx(args, out: TextIO) -> int:
    k = parse_finitelang(args.k)
    m = parse_finitelang(args.m)
    uc = parse_ucmap(args.uc)
    if args.lattice:
        lattice = ValueLattice.generated_by([parse_ncfd(t) for t in args.lattice.split(";") if t.strip()])
    else:
        lattice = ValueLattice.generated_by(list(k.degrees.values()) + list(m.degrees.values()))
    ok, w = is_controllable_finite(k, m, uc)
    doc = {
        "controllable": ok,
        "witness": None if w is None else {"s": ".".join(w.witness), "event": w.event, "lhs": str(w.lhs), "rhs": str(w.rhs)},
        "lattice": [str(x) for x in lattice.elements],
        "supremal": finitelang_to_dict(supremal_controllable(k, m, uc, lattice)),
        "infimal": finitelang_to_dict(infimal_closed_controllable(k, m, uc, lattice)),
    }
    text = dumps(doc)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK


def _cmd_rank(args, out: TextIO) -> int:
    grid = GridSpec(args.grid)
    a = _degree_arg(args.a, grid)
    b = _degree_arg(args.b, grid)
    verdict = rank_geq(a, b)
    out.write(f"centroid(a) = {centroid(a):.6g}\ncentroid(b) = {centroid(b):.6g}\na ⪰ b: {str(verdict).lower()}\n")
    return EXIT_OK if verdict else EXIT_NEGATIVE


def _parse_list(text: str, kind=float) -> list:
    try:
        vals = [kind(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ParseError(f"bad list {text!r}", "argument") from None
    if not vals:
        raise ParseError("empty list", "argument")
    return vals


def _cmd_traffic(args, out: TextIO) -> int:
    base = _load_traffic_config(args.config)
    if args.routing:
        base = replace(base, demand_routing=args.routing)
    if args.duration:
        base = replace(base, duration_s=args.duration)
    if args.action == "compare":
        rates = _parse_list(args.rates)
        seeds = list(range(args.seeds))
        cmp = compare_controllers(base, rates, seeds)
        out.write(cmp.to_csv())
        if args.queue_csv:
            Path(args.queue_csv).write_text(cmp.queue_csv(), encoding="utf-8")
        if args.plot_dir:
            from bifuzzy.plotting import plot_queue_series

            for p in plot_queue_series(cmp, args.plot_dir):
                print(f"wrote {p}", file=sys.stderr)
        return EXIT_OK
    cfg = replace(base, arrival_rate=args.rate if args.rate is not None else base.arrival_rate, seed=args.seed)
    res = run_simulation(cfg, args.mode)
    out.write(dumps(res.to_dict()))
    if args.csv:
        lines = ["cycle,avg_queue"] + [f"{c},{q:.4f}" for c, q in res.per_cycle_queue]
        Path(args.csv).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bifuzzy", description="Bi-fuzzy discrete event systems toolkit.")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="maximum reachable state pairs")
    p.add_argument("--grid", type=float, default=0.05, help="grid step for interval embedding")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="controllability (and optionally Lm-closure) of a spec")
    c.add_argument("plant")
    c.add_argument("spec")
    c.add_argument("uc", help="uncontrollability map JSON")
    c.add_argument("--nonblocking", action="store_true", help="also check Lm-closure")
    c.add_argument("--format", choices=["text", "json"], default="text")
    c.add_argument("--json-out", help="also write the JSON report here")
    c.set_defaults(func=_cmd_check)

    c = sub.add_parser("compose", help="parallel composition of two automata")
    c.add_argument("first")
    c.add_argument("second")
    c.add_argument("-o", "--output")
    c.set_defaults(func=_cmd_compose)

    c = sub.add_parser("eval", help="generated and marked degree of a string")
    c.add_argument("automaton")
    c.add_argument("string", help="dot-separated events; empty string is ε")
    c.set_defaults(func=_cmd_eval)

    c = sub.add_parser("approx", help="supremal / infimal controllable approximations")
    c.add_argument("k")
    c.add_argument("m")
    c.add_argument("uc")
    c.add_argument("--lattice", help="semicolon-separated NCFDs generating the value lattice")
    c.add_argument("-o", "--output")
    c.set_defaults(func=_cmd_approx)

    c = sub.add_parser("rank", help="centroid ranking of two degrees")
    c.add_argument("a", help="NCFD string or [lo,hi] interval")
    c.add_argument("b")
    c.set_defaults(func=_cmd_rank)

    c = sub.add_parser("traffic", help="signal-control simulation")
    c.add_argument("action", nargs="?", choices=["run", "compare"], default="run")
    c.add_argument("--rate", type=float)
    c.add_argument("--mode", choices=MODES, default="bfdes")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--config", help="JSON file overriding simulation parameters")
    c.add_argument("--routing", choices=ROUTINGS)
    c.add_argument("--duration", type=int, help="simulated seconds")
    c.add_argument("--csv", help="write the per-cycle queue CSV here (run)")
    c.add_argument("--rates", default="720,1800,2480", help="comma-separated rates (compare)")
    c.add_argument("--seeds", type=int, default=20, help="number of seeds 0..N-1 (compare)")
    c.add_argument("--queue-csv", help="write per-cycle queue series CSV (compare)")
    c.add_argument("--plot-dir", help="write queue and delay figures here (compare)")
    c.set_defaults(func=_cmd_traffic)
    return p


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        if args.budget < 1:
            raise ParseError("--budget must be >= 1", "argument")
        GridSpec(args.grid)
        return args.func(args, out)
    except StateBudgetExceeded as exc:
        err.write(f"error: {exc}\n")
        return EXIT_BUDGET
    except ValidationError as exc:
        err.write(f"error: {exc.invariant}: {exc}\n")
        return EXIT_USAGE
    except (BifuzzyError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        err.write(f"error: {exc.filename}: {exc.strerror}\n")
        return EXIT_USAGE


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
