"""Turn sweep CSV files into plot-ready series.

Axes:

* ``h``   error against the time step, one curve per (scheme, metric, eps)
* ``dx``  error against the grid spacing ``2 pi / Nx``, one curve per (scheme, metric, eps)
* ``eps`` error against eps, one curve per (scheme, metric, h, Nx)

Each curve is a two-column whitespace-delimited file sorted by abscissa;
``manifest.txt`` lists ``file scheme metric fixed points`` per curve.
"""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path

from ..errors import StructuralError
from .runner import CSV_COLUMNS, fmt

AXES = ("h", "dx", "eps")


class UsageError(StructuralError):
    reason = "usage"


def _read_rows(source) -> list[dict]:
    if isinstance(source, str) and "\n" in source:
        text = source
    else:
        text = Path(source).read_text()
    if not text.strip():
        return []
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise UsageError(f"not a sweep CSV (columns {reader.fieldnames})")
    return [r for r in reader if r["status"] == "ok" and r["metric"] != "-"]


def _curves(rows, axis):
    curves: dict[tuple, list] = {}
    for r in rows:
        value = float(r["value"])
        if axis == "h":
            key, x = (r["scheme"], r["metric"], f"eps={r['eps']}"), float(r["h"])
        elif axis == "dx":
            key, x = (r["scheme"], r["metric"], f"eps={r['eps']}"), 2 * math.pi / int(r["Nx"])
        else:
            key, x = (r["scheme"], r["metric"], f"h={r['h']},Nx={r['Nx']}"), float(r["eps"])
        curves.setdefault(key, []).append((x, value))
    return {k: sorted(v) for k, v in sorted(curves.items())}


def _slug(text: str) -> str:
    return "".join(c if c.isalnum() or c in "-." else "_" for c in text)


def emit_plotdata(source, axis: str, out_dir, svg: bool = False) -> Path:
    """Write one series file per curve plus ``manifest.txt``; return the manifest path.

    ``source`` is a CSV path or CSV text. With ``svg=True`` a log-log figure
    ``plot_<axis>.svg`` is also written (needs matplotlib).
    """
    if axis not in AXES:
        raise UsageError(f"unknown axis {axis!r}; choose from {AXES}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    curves = _curves(_read_rows(source), axis)
    lines = []
    for (scheme, metric, fixed), pts in curves.items():
        name = f"{_slug(scheme)}_{_slug(metric)}_{_slug(fixed)}_vs_{axis}.dat"
        body = f"# {axis} err_{metric}\n" + "".join(f"{fmt(x)} {fmt(y)}\n" for x, y in pts)
        (out / name).write_text(body)
        lines.append(f"{name} {scheme} {metric} {fixed} {len(pts)}\n")
    manifest = out / "manifest.txt"
    manifest.write_text("".join(lines))
    if svg and curves:
        _render_svg(curves, axis, out / f"plot_{axis}.svg")
    return manifest


def _render_svg(curves, axis, path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4.5))
    for (scheme, metric, fixed), pts in curves.items():
        xs, ys = zip(*pts)
        ax.loglog(xs, ys, "o-", label=f"{scheme} {metric} {fixed}", ms=3)
    ax.set_xlabel({"h": "h", "dx": "dx", "eps": "eps"}[axis])
    ax.set_ylabel("relative error")
    ax.legend(fontsize=6)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
