"""Report emitters (Markdown, CSV, JSON, text) and matplotlib figures."""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from ..numeric import format_decimal, format_rational  # noqa: E402
from .runners import CASE_TITLE, ExperimentReport, FlexibilityReport  # noqa: E402

FORMATS = ("md", "csv", "json", "text")
PER_PERIOD_MAX = 4  # wider horizons are summarized, not tabulated per period


def _header(rep: ExperimentReport) -> list[str]:
    return [CASE_TITLE.get(rep.case, rep.case),
            f"data: {rep.dataset} | provenance: {rep.provenance} | seed: none | periods: {rep.horizon}"]


def _grid(rep: ExperimentReport) -> list[list[str]]:
    """Header row plus body rows; cells already rendered with one decimal."""
    per_period = rep.rows and rep.horizon <= PER_PERIOD_MAX
    span = rep.horizon if per_period else 1
    head = ["Variable"]
    for run in rep.runs:
        head += [f"{run.label} {t}" for t in range(1, span + 1)] if per_period else [run.label]

    def spread(values: list[str]) -> list[str]:
        out = []
        for v in values:
            out += [v] + [""] * (span - 1)
        return out

    body = []
    if per_period:
        for label, ids in rep.rows:
            row = [label]
            for run in rep.runs:
                if isinstance(ids, str):
                    row += [rep.cell(run, ids)] + [""] * (span - 1)
                else:
                    row += [rep.cell(run, v) for v in ids]
            body.append(row)
    body.append(["Total cost ($)"] + spread([format_decimal(r.objective) if r.objective is not None else "-"
                                             for r in rep.runs]))
    if any(r.certified is not None for r in rep.runs):
        body.append(["Certified optimum ($)"] + spread([format_decimal(r.certified) if r.certified is not None
                                                        else "" for r in rep.runs]))
    body.append(["Status"] + spread([r.result.status for r in rep.runs]))
    body.append(["Explored nodes"] + spread([str(r.result.nodes_explored) for r in rep.runs]))
    body.append(["Periods simultaneous"] + spread([str(r.simultaneity[0]) if r.simultaneity else "-"
                                                   for r in rep.runs]))
    body.append(["Sum pC*pD"] + spread([format_decimal(r.simultaneity[1]) if r.simultaneity else "-"
                                        for r in rep.runs]))
    return [head] + body


def to_markdown(rep: ExperimentReport) -> str:
    title, sub = _header(rep)
    grid = _grid(rep)
    lines = [f"# {title}", "", sub, "", "| " + " | ".join(grid[0]) + " |",
             "|" + "|".join("---" for _ in grid[0]) + "|"]
    lines += ["| " + " | ".join(row) + " |" for row in grid[1:]]
    lines += ["", "## Checks", ""]
    lines += [f"- {c.status} {c.name}: {c.detail}" for c in rep.checks]
    notes = [f"- {r.label}: {r.note}" for r in rep.runs if r.note]
    if notes:
        lines += ["", "## Notes", ""] + notes
    return "\n".join(lines) + "\n"


def to_text(rep: ExperimentReport) -> str:
    title, sub = _header(rep)
    grid = _grid(rep)
    widths = [max(len(row[i]) for row in grid) for i in range(len(grid[0]))]
    fmt = "  ".join(f"{{:<{w}}}" if i == 0 else f"{{:>{w}}}" for i, w in enumerate(widths))
    lines = [title, sub, ""] + [fmt.format(*row) for row in grid] + [""]
    lines += [f"[{c.status}] {c.name}: {c.detail}" for c in rep.checks]
    lines += [f"note {r.label}: {r.note}" for r in rep.runs if r.note]
    return "\n".join(lines) + "\n"


def to_csv(rep: ExperimentReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["# " + " | ".join(_header(rep))])
    w.writerow(["model", "variable", "period", "exact", "rendered"])
    for run in rep.runs:
        a = run.result.assignment or {}
        for label, ids in rep.rows:
            items = [("", ids)] if isinstance(ids, str) else [(str(t), v) for t, v in enumerate(ids, 1)]
            for period, vid in items:
                if vid in a:
                    w.writerow([run.label, label, period, format_rational(a[vid]), format_decimal(a[vid])])
        if run.objective is not None:
            w.writerow([run.label, "Total cost ($)", "", format_rational(run.objective),
                        format_decimal(run.objective)])
        if run.certified is not None:
            w.writerow([run.label, "Certified optimum ($)", "", format_rational(run.certified),
                        format_decimal(run.certified)])
        w.writerow([run.label, "Explored nodes", "", run.result.nodes_explored, run.result.nodes_explored])
        if run.simultaneity:
            p, s = run.simultaneity
            w.writerow([run.label, "Periods simultaneous", "", p, p])
            w.writerow([run.label, "Sum pC*pD", "", format_rational(s), format_decimal(s)])
    for c in rep.checks:
        w.writerow(["check", c.name, "", c.status, c.detail])
    return buf.getvalue()


def render(rep: ExperimentReport, fmt: str = "md") -> str:
    if fmt == "md":
        return to_markdown(rep)
    if fmt == "text":
        return to_text(rep)
    if fmt == "csv":
        return to_csv(rep)
    if fmt == "json":
        return json.dumps(rep.to_json(), indent=1, sort_keys=True) + "\n"
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def render_flexibility(rep: FlexibilityReport, fmt: str = "md") -> str:
    doc = rep.to_json()
    if fmt == "json":
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"
    rows = [("down", rep.bor_down, rep.bof_down, rep.realizable_down),
            ("up", rep.bor_up, rep.bof_up, rep.realizable_up)]
    s = rep.schedule
    sub = (f"schedule: e_prev {format_decimal(s.e_prev)}, pC {format_decimal(s.p_charge)}, "
           f"pD {format_decimal(s.p_discharge)} | seed: none")
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["# reserve flexibility | " + sub])
        w.writerow(["direction", "bor", "bof", "realizable"])
        for d, *vals in rows:
            w.writerow([d] + [format_rational(v) for v in vals])
        return buf.getvalue()
    lines = ["Reserve flexibility at a fixed schedule", sub, ""]
    if fmt == "md":
        lines = ["# " + lines[0], "", sub, "", "| Direction | BOR max | BOF max | Realizable |", "|---|---|---|---|"]
        lines += [f"| {d} | " + " | ".join(format_decimal(v) for v in vals) + " |" for d, *vals in rows]
    else:
        lines += [f"{d:<5} BOR {format_decimal(a):>6}  BOF {format_decimal(b):>6}  realizable {format_decimal(c):>6}"
                  for d, a, b, c in rows]
    lines += ["", f"BOF promises more than is realizable: {'yes' if rep.bof_overpromises else 'no'}"]
    return "\n".join(lines) + "\n"


# --- figures -----------------------------------------------------------------


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path


def write_figures(rep: ExperimentReport, out_dir: str | Path) -> list[Path]:
    """Dispatch bars for short horizons; simultaneity traces for long ones."""
    out = Path(out_dir)
    if rep.horizon <= PER_PERIOD_MAX:
        fig, axes = plt.subplots(1, len(rep.runs), figsize=(3 * len(rep.runs), 3), sharey=True)
        for ax, run in zip(axes, rep.runs):
            a = run.result.assignment or {}
            periods = range(1, rep.horizon + 1)
            pc = [float(a.get(f"pC[{t}]", 0)) for t in periods]
            pd = [float(a.get(f"pD[{t}]", 0)) for t in periods]
            xs = list(periods)
            ax.bar([x - 0.2 for x in xs], pc, width=0.4, label="charge")
            ax.bar([x + 0.2 for x in xs], pd, width=0.4, label="discharge")
            ax.set_title(run.label)
            ax.set_xticks(xs)
            ax.set_xlabel("hour")
        axes[0].set_ylabel("MW")
        axes[0].legend(frameon=False, fontsize=8)
        return [_save(fig, out / f"{rep.case}-dispatch.png")]

    fig, (left, right) = plt.subplots(1, 2, figsize=(10, 3.5))
    for run in rep.runs:
        if not run.relaxed or not run.result.assignment:
            continue
        a = run.result.assignment
        prod = [float(a[f"pC[{t}]"] * a[f"pD[{t}]"]) for t in range(1, rep.horizon + 1)]
        cum, total = [], 0.0
        for v in prod:
            total += v
            cum.append(total)
        left.plot(range(1, rep.horizon + 1), cum, label=run.label)
    left.set_xlabel("period")
    left.set_ylabel("cumulative pC*pD")
    left.legend(frameon=False)
    labels = [r.label for r in rep.runs if r.simultaneity]
    right.bar(labels, [r.simultaneity[0] for r in rep.runs if r.simultaneity])
    right.set_ylabel("periods with simultaneous charge/discharge")
    return [_save(fig, out / f"{rep.case}-simultaneity.png")]


def write_flexibility_figure(rep: FlexibilityReport, path: str | Path) -> Path:
    fig, ax = plt.subplots(figsize=(5, 3))
    labels = ["BOR", "BOF", "realizable"]
    down = [float(rep.bor_down), float(rep.bof_down), float(rep.realizable_down)]
    up = [float(rep.bor_up), float(rep.bof_up), float(rep.realizable_up)]
    xs = range(len(labels))
    ax.bar([x - 0.2 for x in xs], down, width=0.4, label="down reserve")
    ax.bar([x + 0.2 for x in xs], up, width=0.4, label="up reserve")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels)
    ax.set_ylabel("MW")
    ax.legend(frameon=False, fontsize=8)
    return _save(fig, Path(path))


__all__ = ["render", "render_flexibility", "to_markdown", "to_csv", "to_text", "write_figures",
           "write_flexibility_figure", "FORMATS"]
