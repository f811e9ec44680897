"""Rendering of batch results into long-run / short-run tables.

Tables put variables on rows and models on columns.  Cells are symbolic:
``(+)**`` in the long-run table, ``(±)3**`` in the short-run table (sign of
the significant coefficients, count of significant lags including the
contemporaneous one, significance stars).  An empty cell means the variable
is absent from the model or not significant at 10%.  The csv and json
renderings additionally carry the full numeric estimates.

Output is byte-stable for identical inputs; figures are rendered alongside
but carry format metadata and are not part of the byte-identity contract.
"""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .pipeline import ModelSection

FORMATS = ("markdown", "csv", "json")

LONG_RUN_TAIL = ("const", "trend")  # pinned to the bottom of the row order


def _row_order(sections, block: str) -> list[str]:
    """Stable union of row labels: first appearance wins, deterministic
    because sections arrive sorted by model_id."""
    head: list[str] = []
    tail: list[str] = []
    for section in sections:
        for label in getattr(section, block):
            target = tail if label in LONG_RUN_TAIL else head
            if label not in target:
                target.append(label)
    return head + [t for t in LONG_RUN_TAIL if t in tail]


def _cells(sections, block: str):
    order = _row_order(sections, block)
    rows = []
    for label in order:
        cells = []
        for section in sections:
            cell = getattr(section, block).get(label)
            if cell is None or cell.empty:
                cells.append("")
            elif block == "long_run":
                cells.append(cell.long_run_text())
            else:
                cells.append(cell.short_run_text())
        rows.append((label, cells))
    return rows


def _markdown_table(header, rows) -> str:
    out = ["| " + " | ".join(header) + " |",
           "|" + "|".join("---" for _ in header) + "|"]
    for label, cells in rows:
        out.append("| " + " | ".join([label] + cells) + " |")
    return "\n".join(out) + "\n"


def _fmt(x) -> str:
    if x is None:
        return ""
    return format(float(x), ".6g")


def render_markdown(sections) -> str:
    ids = [s.model_id for s in sections]
    buf = io.StringIO()
    w = buf.write
    w("# Model batch report\n\n")

    w("## Model summary\n\n")
    header = ["model", "dependent", "status", "p", "q", "F", "bounds case",
              "conclusion (5%)", "n"]
    rows = []
    for s in sections:
        if s.status == "ok":
            rows.append((s.model_id, [
                s.config.dependent, "ok", str(s.p), str(s.q),
                _fmt(s.bounds.f_statistic), s.bounds.case_id,
                s.bounds.conclusion_at(5), str(s.nobs),
            ]))
        else:
            rows.append((s.model_id, [
                s.config.dependent, "skipped", "", "", "", "", "", "",
            ]))
    w(_markdown_table(header, rows))
    w("\n")

    w("## Long-run coefficients\n\n")
    w("Cells show the sign of the estimated long-run coefficient and its\n")
    w("significance (*** 1%, ** 5%, * 10%).  A column is populated only when\n")
    w("the bounds test concludes cointegration; an empty cell means the\n")
    w("variable is absent or not significant at 10%.\n\n")
    w(_markdown_table(["variable"] + ids, _cells(sections, "long_run")))
    w("\n")

    w("## Short-run coefficients\n\n")
    w("Cells show the common sign of the significant lag coefficients\n")
    w("(± when mixed), the number of significant lags including the\n")
    w("contemporaneous one, and the strongest significance level.\n\n")
    w(_markdown_table(["variable"] + ids, _cells(sections, "short_run")))
    w("\n")

    w("## Diagnostics\n\n")
    for s in sections:
        w(f"### {s.model_id}\n\n")
        if s.status != "ok":
            w(f"- status: skipped ({s.reason})\n\n")
            continue
        w(f"- sample: {s.sample[0]} .. {s.sample[1]} ({s.nobs} usable rows)\n")
        orders = ", ".join(f"{n}: {o}" for n, o in sorted(s.integration.items()))
        w(f"- integration: {orders}\n")
        if s.break_dates:
            breaks = ", ".join(f"{n}: {d}" for n, d in sorted(s.break_dates.items()))
            w(f"- break dates: {breaks}\n")
        lo, hi = s.bounds.bounds[5]
        w(f"- bounds F = {_fmt(s.bounds.f_statistic)} vs ({_fmt(lo)}, {_fmt(hi)}) "
          f"at 5%, case {s.bounds.case_id}: {s.bounds.conclusion_at(5)}\n")
        w(f"- speed of adjustment: {_fmt(s.alpha)}{s.alpha_stars}\n")
        w("\n")
    return buf.getvalue()


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def render_csv(sections) -> dict:
    """Three csv payloads: symbolic long-run/short-run tables and the full
    numeric estimates behind every cell."""
    ids = [s.model_id for s in sections]
    out = {}
    for block, filename in (("long_run", "longrun.csv"), ("short_run", "shortrun.csv")):
        rows = [[label] + cells for label, cells in _cells(sections, block)]
        out[filename] = _csv_text(["variable"] + ids, rows)

    est_rows = []
    for s in sections:
        if s.status != "ok":
            est_rows.append([s.model_id, "status", "", "", "", f"skipped: {s.reason}"])
            continue
        est_rows.append([s.model_id, "bounds", "F", _fmt(s.bounds.f_statistic),
                         "", s.bounds.conclusion_at(5)])
        est_rows.append([s.model_id, "ecm", "alpha", _fmt(s.alpha), "", s.alpha_stars])
        for block in ("long_run", "short_run"):
            for label, cell in getattr(s, block).items():
                for lag, (estimate, p_value) in enumerate(cell.estimates):
                    est_rows.append([
                        s.model_id, block, f"{label}.l{lag}" if len(cell.estimates) > 1
                        else label,
                        _fmt(estimate), _fmt(p_value),
                        cell.long_run_text() if block == "long_run"
                        else cell.short_run_text(),
                    ])
    out["estimates.csv"] = _csv_text(
        ["model_id", "block", "variable", "estimate", "p_value", "cell"], est_rows)
    return out


def _section_json(s: ModelSection) -> dict:
    doc = {
        "model_id": s.model_id,
        "dependent": s.config.dependent,
        "status": s.status,
    }
    if s.status != "ok":
        doc["reason"] = s.reason
        if s.integration:
            doc["integration"] = dict(sorted(s.integration.items()))
        return doc
    doc.update({
        "sample": list(s.sample),
        "nobs": s.nobs,
        "integration": dict(sorted(s.integration.items())),
        "break_dates": {n: str(d) for n, d in sorted(s.break_dates.items())},
        "p": s.p,
        "q": s.q,
        "bounds": {
            "f_statistic": float(s.bounds.f_statistic),
            "k": s.bounds.k,
            "case": s.bounds.case_id,
            "bounds": {str(lv): [float(lo), float(hi)]
                       for lv, (lo, hi) in sorted(s.bounds.bounds.items())},
            "conclusion": {str(lv): c for lv, c in sorted(s.bounds.conclusion.items())},
        },
        "cointegrated": s.cointegrated,
        "alpha": float(s.alpha),
        "alpha_stars": s.alpha_stars,
    })
    for block in ("long_run", "short_run"):
        doc[block] = {
            label: {
                "cell": (cell.long_run_text() if block == "long_run"
                         else cell.short_run_text()),
                "estimates": [[float(e), float(p)] for e, p in cell.estimates],
            }
            for label, cell in getattr(s, block).items()
        }
    return doc


def render_json(sections) -> str:
    doc = {"models": [_section_json(s) for s in sections]}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def render_figures(sections, out_dir: Path, panel=None) -> list[Path]:
    """Diagnostic figures next to the tables (not byte-stable: png metadata)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig_dir = Path(out_dir) / "figures"
    fig_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    ok = [s for s in sections if s.status == "ok"]
    if ok:
        fig, ax = plt.subplots(figsize=(max(6, 0.8 * len(ok)), 4))
        ids = [s.model_id for s in ok]
        fs = [s.bounds.f_statistic for s in ok]
        colors = ["tab:green" if s.cointegrated else "tab:gray" for s in ok]
        ax.bar(ids, fs, color=colors)
        lo5 = [s.bounds.bounds[5][0] for s in ok]
        hi5 = [s.bounds.bounds[5][1] for s in ok]
        ax.plot(ids, lo5, "k--", linewidth=1, label="I(0) bound, 5%")
        ax.plot(ids, hi5, "k-", linewidth=1, label="I(1) bound, 5%")
        ax.set_ylabel("bounds F statistic")
        ax.legend()
        ax.tick_params(axis="x", rotation=45)
        fig.tight_layout()
        path = fig_dir / "bounds_f.png"
        fig.savefig(path, dpi=100)
        plt.close(fig)
        written.append(path)

    if panel is not None and ok:
        deps = []
        for s in ok:
            if s.config.dependent not in deps:
                deps.append(s.config.dependent)
        ncols = 3
        nrows = (len(deps) + ncols - 1) // ncols
        fig, axes = plt.subplots(nrows, ncols, figsize=(4 * ncols, 2.5 * nrows),
                                 squeeze=False)
        breaks = {}
        for s in ok:
            for name, date in s.break_dates.items():
                breaks.setdefault(s.config.dependent, date)
        for i, dep in enumerate(deps):
            ax = axes[i // ncols][i % ncols]
            ax.plot(panel.dates, panel.column(dep), linewidth=0.8)
            if dep in breaks:
                ax.axvline(breaks[dep], color="tab:red", linewidth=1)
            ax.set_title(dep, fontsize=9)
            ax.tick_params(labelsize=7)
        for j in range(len(deps), nrows * ncols):
            axes[j // ncols][j % ncols].axis("off")
        fig.tight_layout()
        path = fig_dir / "dependents.png"
        fig.savefig(path, dpi=100)
        plt.close(fig)
        written.append(path)
    return written


def render_reports(sections, out_dir, formats=("markdown",), panel=None,
                   figures=True) -> list[Path]:
    """Write the requested report files into ``out_dir`` and return the paths."""
    sections = sorted(sections, key=lambda s: s.model_id)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    for fmt in formats:
        if fmt == "markdown":
            path = out_dir / "report.md"
            path.write_text(render_markdown(sections))
            written.append(path)
        elif fmt == "csv":
            for filename, text in render_csv(sections).items():
                path = out_dir / filename
                path.write_text(text)
                written.append(path)
        elif fmt == "json":
            path = out_dir / "report.json"
            path.write_text(render_json(sections))
            written.append(path)
        else:
            raise ValueError(f"unknown report format {fmt!r}")
    if figures:
        written.extend(render_figures(sections, out_dir, panel=panel))
    return written
