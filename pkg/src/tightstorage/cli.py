"""Command-line entry point: build, solve, certify, replay, case, reserve-flex.

Exit codes: 0 success, 1 infeasible or false certificate, 2 bad input,
3 resource limit (node or time limit).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .errors import BadScenario, InvalidParams, NodeLimit, NoSolution, TooLarge
from .formulations.builders import build
from .formulations.model import ModelInstance, relax
from .formulations.params import FAMILIES, StorageParams
from .numeric import format_decimal, format_rational

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3
FORMATS = ("json", "csv", "md", "text")


class InputError(Exception):
    """Bad command-line input; maps to exit code 2."""


# --- input resolution --------------------------------------------------------


def _data_dir() -> Path:
    from .cases.scenario import data_dir
    return data_dir()


def resolve_params_path(spec: str) -> Path:
    """A file path, or the name of a bundled parameter set (``uc``, ``example1.json``)."""
    path = Path(spec)
    if path.is_file():
        return path
    bundled = _data_dir() / "params" / (spec if spec.endswith(".json") else f"{spec}.json")
    if bundled.is_file():
        return bundled
    raise InputError(f"parameter file not found: {spec}")


def _read_json(path: Path) -> dict:
    try:
        return json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def load_params(spec: str) -> tuple[StorageParams, dict]:
    path = resolve_params_path(spec)
    doc = _read_json(path)
    try:
        return StorageParams.from_json(doc.get("storage", doc)), doc
    except (ValueError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _rows_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# --- build -------------------------------------------------------------------


def _render_model(m: ModelInstance, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(m.to_json(), indent=1) + "\n"
    if fmt == "text":
        return m.to_lp_text()
    names = [v.id for v in m.variables]
    rows = [[r.label, r.render(names)] for r in m.constraints]
    if fmt == "csv":
        return _rows_csv(["label", "row"], rows)
    lines = [f"# {m.family.upper()} model, {m.horizon} periods", "",
             f"variables: {len(m.variables)} ({len(m.binaries())} binary), rows: {len(m.constraints)}", "",
             "| Label | Row |", "|---|---|"]
    lines += [f"| {a} | `{b}` |" for a, b in rows]
    return "\n".join(lines) + "\n"


def cmd_build(args) -> int:
    if args.case:
        from .cases import assemble, load_case
        s = load_case(args.case, args.data)
        m = assemble(s, args.family, args.family not in ("bo", "bor", "bir", "bof"), relaxed=args.relax,
                     **_facet_kw(args))
    else:
        if not args.params:
            raise InputError("build needs --params or --case")
        p, _ = load_params(args.params)
        m = build(args.family, p, args.T, initial=args.initial, **_facet_kw(args))
        if args.relax:
            m = relax(m)
    _emit(_render_model(m, args.format), args.out)
    return EXIT_OK


def _facet_kw(args) -> dict:
    return {"facets": args.facets} if getattr(args, "facets", None) and args.family == "tir" else {}


# --- solve -------------------------------------------------------------------


def _render_result(r, fmt: str, source: str) -> str:
    if fmt == "json":
        return r.dumps()
    if fmt == "csv":
        return r.to_csv()
    obj = "-" if r.objective is None else format_decimal(r.objective)
    head = [f"model: {source}", f"status: {r.status}", f"objective: {obj}", f"nodes: {r.nodes_explored}",
            f"mode: {r.mode}"]
    if fmt == "md":
        lines = ["# Solve result", ""] + [f"- {h}" for h in head] + ["", "| Variable | Value | Exact |",
                                                                      "|---|---|---|"]
        lines += [f"| {k} | {format_decimal(v)} | {format_rational(v)} |" for k, v in r.assignment.items()]
        return "\n".join(lines) + "\n"
    width = max((len(k) for k in r.assignment), default=0)
    lines = head + [""] + [f"{k:<{width}}  {format_decimal(v):>12}  {format_rational(v)}"
                           for k, v in r.assignment.items()]
    return "\n".join(lines) + "\n"


def cmd_solve(args) -> int:
    from .solver import INFEASIBLE, OPTIMAL, solve
    from .solver.float_mode import TIME_LIMIT, solve_float
    path = Path(args.model)
    try:
        m = ModelInstance.from_json(_read_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed model file {path}: {exc!r}") from exc
    if args.float:
        r = solve_float(m, time_limit=args.time_limit)
    else:
        r = solve(m, node_limit=args.node_limit)
    _emit(_render_result(r, args.format, str(path)), args.out)
    if r.status == TIME_LIMIT:
        return EXIT_LIMIT
    if r.status == INFEASIBLE or r.status != OPTIMAL:
        return EXIT_FALSE
    return EXIT_OK


# --- certify -----------------------------------------------------------------


def _certify_summary(family: str, results: list, seed, source: str, fmt: str) -> str:
    passed = sum(c.equality for _, c in results)
    if fmt == "json":
        doc = {"family": family, "source": source, "seed": seed, "instances": len(results), "passed": passed,
               "certificates": [c.to_json() for _, c in results]}
        return json.dumps(doc, indent=1) + "\n"
    header = f"hull certification: {family.upper()} | source: {source} | seed: {'none' if seed is None else seed}"
    rows = [[i, str(c.equality).lower(), len(c.tight_lp_vertices), len(c.removed_rows),
             "" if c.witness is None else "yes"] for i, (_, c) in enumerate(results)]
    if fmt == "csv":
        return f"# {header}\n" + _rows_csv(["index", "equality", "tight_vertices", "removed_rows", "witness"], rows)
    if len(results) == 1 and fmt == "text":
        return header + "\n" + results[0][1].render()
    if fmt == "md":
        lines = [f"# {header}", "", f"equality true: {passed}/{len(results)}", "",
                 "| Index | Equality | Tight-LP vertices | Removed rows | Witness |", "|---|---|---|---|---|"]
        lines += ["| " + " | ".join(str(x) for x in row) + " |" for row in rows]
        return "\n".join(lines) + "\n"
    lines = [header, f"equality true: {passed}/{len(results)}"]
    lines += [f"  #{i:<3} equality {eq:<5} vertices {nv:<3} removed {nr}{'  witness' if w else ''}"
              for i, eq, nv, nr, w in rows]
    return "\n".join(lines) + "\n"


def cmd_certify(args) -> int:
    from .hull import certify_hull, certify_random
    kw = _facet_kw(args)
    if args.random is not None:
        if args.params:
            raise InputError("use either --params or --random, not both")
        if args.random < 1:
            raise InputError("--random needs a positive count")
        seed = args.seed if args.seed is not None else 0
        results = certify_random(args.family, args.random, seed, **kw)
        source = f"{args.random} random parameter sets"
    elif args.params:
        p, _ = load_params(args.params)
        seed = None
        results = [(p, certify_hull(p, args.family, **kw))]
        source = str(args.params)
    else:
        raise InputError("certify needs --params or --random N")
    _emit(_certify_summary(args.family, results, seed, source, args.format), args.out)
    return EXIT_OK if all(c.equality for _, c in results) else EXIT_FALSE


# --- replay ------------------------------------------------------------------


def cmd_replay(args) -> int:
    from .hull import replay_appendix_a
    p, _ = load_params(args.params)
    t = replay_appendix_a(p)
    if args.format == "json":
        text = t.dumps()
    elif args.format == "csv":
        names = t.rest.variables
        text = _rows_csv(["lower", "upper", "row", "tag", "status", "cited", "verified"],
                         [[s.lower, s.upper, s.row.render(names), s.tag, s.status, " ".join(s.cited),
                           str(s.verified).lower()] for s in t.steps])
    elif args.format == "md":
        text = "```\n" + t.render() + "```\n"
    else:
        text = t.render()
    _emit(text, args.out)
    return EXIT_OK if t.ok else EXIT_FALSE


# --- case --------------------------------------------------------------------


def cmd_case(args) -> int:
    from .cases import run_case
    from .cases.report import render, write_figures
    from .solver.float_mode import TIME_LIMIT
    rep = run_case(args.case, args.data, mode=args.mode, node_limit=args.node_limit, time_limit=args.time_limit)
    _emit(render(rep, args.format), args.out)
    fig_dir = args.figures or (str(Path(args.out).parent) if args.out else None)
    if fig_dir:
        for path in write_figures(rep, fig_dir):
            print(f"figure: {path}", file=sys.stderr)
    limited = any(r.result.status == TIME_LIMIT and not r.note for r in rep.runs)
    if limited:
        return EXIT_LIMIT
    return EXIT_OK if rep.ok else EXIT_FALSE


# --- reserve flexibility -----------------------------------------------------


def cmd_reserve_flex(args) -> int:
    from .cases import Schedule, reserve_flexibility_report
    from .cases.report import render_flexibility, write_flexibility_figure
    p, doc = load_params(args.params)
    sched = dict(doc.get("_schedule", {}))
    for key, value in (("e_prev", args.e_prev), ("p_charge", args.p_charge), ("p_discharge", args.p_discharge)):
        if value is not None:
            sched[key] = value
    if "e_prev" not in sched:
        raise InputError("schedule needs --e-prev (or a _schedule entry in the parameter file)")
    try:
        schedule = Schedule(sched["e_prev"], sched.get("p_charge", 0), sched.get("p_discharge", 0))
    except (ValueError, TypeError) as exc:
        raise InputError(f"bad schedule: {exc}") from exc
    rep = reserve_flexibility_report(p, schedule)
    _emit(render_flexibility(rep, args.format), args.out)
    fig = args.figure or (str(Path(args.out).with_suffix(".png")) if args.out else None)
    if fig:
        print(f"figure: {write_flexibility_figure(rep, fig)}", file=sys.stderr)
    return EXIT_OK


# --- parser ------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, default_fmt: str = "text") -> None:
    p.add_argument("--format", choices=FORMATS, default=default_fmt, help="output format")
    p.add_argument("--out", help="write output to this file instead of stdout")


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tight-storage",
                                 description="Tight storage MIP formulations: build, solve, certify, replay, cases.")
    sub = ap.add_subparsers(dest="command", required=True)
    facets = dict(choices=("corrected", "printed"), default=None,
                  help="TIR energy-limit facets (default: corrected)")

    b = sub.add_parser("build", help="write a storage model instance")
    b.add_argument("family", choices=FAMILIES)
    b.add_argument("--params", help="parameter file or bundled name")
    b.add_argument("-T", type=int, default=1, help="number of periods")
    b.add_argument("--relax", action="store_true", help="relax binaries to [0, 1]")
    b.add_argument("--initial", choices=("fixed", "variable"), default="fixed")
    b.add_argument("--case", help="assemble a bundled case-study scenario around the storage block")
    b.add_argument("--data", choices=("approximated", "paper-faithful"), default="approximated")
    b.add_argument("--facets", **facets)
    _common(b, "json")
    b.set_defaults(func=cmd_build)

    s = sub.add_parser("solve", help="solve a model file exactly (or in float mode)")
    s.add_argument("model")
    s.add_argument("--node-limit", type=int, default=10**6)
    s.add_argument("--float", action="store_true", help="HiGHS float solve with exact polishing")
    s.add_argument("--time-limit", type=float, default=None)
    _common(s)
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("certify", help="certify the one-period convex hull")
    c.add_argument("family", choices=("bo", "to", "bor", "tor", "bir", "tir"))
    c.add_argument("--params", help="parameter file or bundled name")
    c.add_argument("--random", type=int, metavar="N", help="certify N random valid parameter sets")
    c.add_argument("--seed", type=int, help="seed for --random (default 0)")
    c.add_argument("--facets", **facets)
    _common(c)
    c.set_defaults(func=cmd_certify)

    r = sub.add_parser("replay", help="replay the charging/discharging hull derivation")
    r.add_argument("params", help="parameter file or bundled name")
    _common(r)
    r.set_defaults(func=cmd_replay)

    k = sub.add_parser("case", help="run a case study and report the four-model comparison")
    k.add_argument("case", choices=("uc", "uc-reserves", "tep", "multiperiod"))
    k.add_argument("--data", choices=("approximated", "paper-faithful"), default="approximated")
    k.add_argument("--mode", choices=("exact", "float"), default=None,
                   help="solver path (default: exact up to 24 periods, float beyond)")
    k.add_argument("--node-limit", type=int, default=10**6)
    k.add_argument("--time-limit", type=float, default=None, help="float-mode MIP time limit in seconds")
    k.add_argument("--figures", help="directory for figures (default: next to --out)")
    _common(k, "md")
    k.set_defaults(func=cmd_case)

    f = sub.add_parser("reserve-flex", help="max reserves at a fixed schedule: BOR, BOF and realizable")
    f.add_argument("params", help="parameter file or bundled name")
    f.add_argument("--e-prev")
    f.add_argument("--p-charge")
    f.add_argument("--p-discharge")
    f.add_argument("--figure", help="figure path (default: next to --out)")
    _common(f, "md")
    f.set_defaults(func=cmd_reserve_flex)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    if getattr(args, "T", 1) < 1:
        print("error: -T must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except InvalidParams as exc:
        print("error: parameters violate the tightness requirements:", file=sys.stderr)
        for v in exc.violations:
            print(f"  {v}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, BadScenario) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NodeLimit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except TooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except NoSolution as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FALSE


if __name__ == "__main__":
    sys.exit(main())


__all__ = ["main", "make_parser"]
