"""Static SVG figure of the ``s`` chart: branch points, petal loops and the
base point.  Output bytes depend only on the report."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.lines import Line2D  # noqa: E402
from matplotlib.patches import Circle  # noqa: E402

STYLE = {
    "dual-tangent": {"facecolor": "#2b8cbe", "edgecolor": "#08306b", "label": "dual-tangent"},
    "multiple-branch-line": {"facecolor": "#e34a33", "edgecolor": "#7f0000", "label": "multiple-branch line"},
    "singular-point-line": {"facecolor": "#fdbb84", "edgecolor": "#7f2704", "label": "singular-point line"},
}

RC = {
    "svg.hashsalt": "dualgalois",
    "svg.fonttype": "none",
    "font.size": 8,
    "axes.linewidth": 0.6,
    "lines.linewidth": 0.7,
}


def _extent(report):
    pts = [b.location for b in report.pencil.branch_points] + [report.pencil.s0]
    for L in report.loops:
        pts.extend(L.vertices)
    xs = [complex(z).real for z in pts]
    ys = [complex(z).imag for z in pts]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-6)
    return min(xs), max(xs), min(ys), max(ys), span


def render_svg(report, path, width=5.0):
    x0, x1, y0, y1, span = _extent(report)
    glyph = 0.012 * span
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(width, width))
        for L in report.loops:
            ax.plot(L.vertices.real, L.vertices.imag, color="0.55", lw=0.5, zorder=1)
        for k, b in enumerate(report.pencil.branch_points):
            st = STYLE[b.kind]
            c = Circle((b.location.real, b.location.imag), glyph, facecolor=st["facecolor"],
                       edgecolor=st["edgecolor"], lw=0.6, zorder=3)
            c.set_gid(f"branch-point-{k}")
            ax.add_patch(c)
        s0 = report.pencil.s0
        ax.plot([s0.real], [s0.imag], marker="*", ms=9, color="k", ls="none", zorder=4)
        kinds = sorted({b.kind for b in report.pencil.branch_points})
        handles = [Line2D([], [], marker="o", ls="none", markerfacecolor=STYLE[k]["facecolor"],
                          markeredgecolor=STYLE[k]["edgecolor"], label=STYLE[k]["label"]) for k in kinds]
        handles.append(Line2D([], [], marker="*", ls="none", color="k", label="base parameter"))
        ax.legend(handles=handles, loc="best", frameon=False)
        pad = 0.05 * span
        ax.set_xlim(x0 - pad, x1 + pad)
        ax.set_ylim(y0 - pad, y1 + pad)
        ax.set_aspect("equal")
        ax.set_xlabel("Re s")
        ax.set_ylabel("Im s")
        ax.set_title(f"degree {report.degree}, |G| = {report.group_order}")
        fig.savefig(path, format="svg", metadata={"Date": None}, bbox_inches="tight")
        plt.close(fig)
    return path
