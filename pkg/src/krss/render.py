"""Charts of pages and coefficient tables as text, JSON, SVG or matplotlib figures.

A :class:`Chart` is the format-neutral middle layer: glyphs at integer
grid points plus arrows.  Rendering is a pure function of the chart, so
repeated runs produce identical bytes.

Glyphs follow the usual chart conventions: a hollow circle is ``Z``, a
solid dot is ``Z/2``, anything else is written out, blank is zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

from .coeffring import generator_at
from .exactalg import FGAbelianGroup
from .ssengine import Page

FORMATS = ("text", "json", "svg")
INDEXINGS = ("serre", "adams")
UNIT = 10  # svg units per degree
MARGIN = 30


class RenderError(ValueError):
    pass


@dataclass(frozen=True)
class ChartStyle:
    indexing: str = "serre"

    def __post_init__(self):
        if self.indexing not in INDEXINGS:
            raise RenderError(f"unknown indexing {self.indexing!r}; use serre or adams")

    def place(self, p: int, q: int) -> tuple[int, int]:
        if self.indexing == "adams":
            return -(p + q), p
        return p, q

    @property
    def axes(self) -> tuple[str, str]:
        return ("a", "b") if self.indexing == "adams" else ("p", "q")


@dataclass(frozen=True)
class Glyph:
    x: int
    y: int
    group: str
    label: str = ""
    unknown: bool = False


@dataclass(frozen=True)
class Arrow:
    x0: int
    y0: int
    x1: int
    y1: int
    r: int


@dataclass
class Chart:
    title: str
    xlabel: str
    ylabel: str
    xrange: tuple[int, int]
    yrange: tuple[int, int]
    glyphs: list[Glyph] = field(default_factory=list)
    arrows: list[Arrow] = field(default_factory=list)
    data: object = None  # JSON payload


def _short(group: str) -> str:
    if group == "Z":
        return "o"
    if group == "Z/2":
        return "*"
    if group == "0":
        return "."
    return group.replace(" ⊕ ", "+").replace("Z/", "")


# ---------------------------------------------------------------------------
# building charts


def page_chart(page: Page, style: ChartStyle | None = None, title: str = "") -> Chart:
    """Chart of a page in Serre or Adams indexing."""
    style = style or ChartStyle()
    w = page.window
    corners = [style.place(p, q) for p in (w.pmin, w.pmax) for q in (w.qmin, w.qmax)]
    if style.indexing == "adams":
        xs = [c[0] for c in corners]
        xr, yr = (min(xs), max(xs)), (w.pmin, w.pmax)
    else:
        xr, yr = (w.pmin, w.pmax), (w.qmin, w.qmax)
    xl, yl = style.axes
    chart = Chart(title or f"E_{page.r}", xl, yl, xr, yr)
    for s in sorted(page.cells, key=lambda s: (s.q, s.p)):
        g = page.group(s)
        if g.is_zero() and s not in page.indeterminate:
            continue
        x, y = style.place(*s)
        label = ", ".join(str(r) for r in page.cells[s].reps)
        chart.glyphs.append(Glyph(x, y, str(g), label, s in page.indeterminate))
    for s in sorted(page.indeterminate, key=lambda s: (s.q, s.p)):
        if s not in page.cells:
            x, y = style.place(*s)
            chart.glyphs.append(Glyph(x, y, "0", "", True))
    for s in sorted(page.differentials, key=lambda s: (s.q, s.p)):
        if page.differentials[s].is_zero():
            continue
        t = page.target(s)
        chart.arrows.append(Arrow(*style.place(*s), *style.place(*t), page.r))
    data = page.to_dict()
    data["indexing"] = style.indexing
    chart.data = data
    return chart


def coefficient_table(theory: str, pmin: int, pmax: int, qmin: int, qmax: int) -> list[dict]:
    """Rows ``{p, q, group, generator}`` for every nonzero group in the window."""
    rows = []
    for q in range(qmin, qmax + 1):
        for p in range(pmin, pmax + 1):
            g = generator_at(theory, p, q)
            if g is None:
                continue
            group = str(FGAbelianGroup.cyclic(g.order))
            rows.append({"p": p, "q": q, "group": group, "generator": str(g)})
    return rows


def table_chart(rows: list[dict], pmin: int, pmax: int, qmin: int, qmax: int, title: str = "") -> Chart:
    """Coefficient table with ``q`` across and ``p`` up."""
    chart = Chart(title or "H^{p,q}", "q", "p", (qmin, qmax), (pmin, pmax))
    for r in rows:
        chart.glyphs.append(Glyph(r["q"], r["p"], r["group"], r["generator"]))
    chart.data = rows
    return chart


def group_rows(groups: dict, pmin: int, pmax: int, qmin: int, qmax: int) -> list[dict]:
    """Rows for an arbitrary ``(p, q) -> group`` map (no generator names)."""
    rows = []
    for (p, q), g in sorted(groups.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        if not g.is_zero():
            rows.append({"p": p, "q": q, "group": str(g), "generator": ""})
    return rows


# ---------------------------------------------------------------------------
# formats


def render(chart: Chart, fmt: str = "text") -> str:
    if fmt == "text":
        return render_text(chart)
    if fmt == "json":
        return json.dumps(chart.data, indent=1, ensure_ascii=False) + "\n"
    if fmt == "svg":
        return render_svg(chart)
    raise RenderError(f"unsupported format {fmt!r}; use one of {', '.join(FORMATS)}")


def render_text(chart: Chart) -> str:
    x0, x1 = chart.xrange
    y0, y1 = chart.yrange
    cells: dict[tuple[int, int], str] = {}
    for g in chart.glyphs:
        mark = _short(g.group) + ("?" if g.unknown else "")
        key = (g.x, g.y)
        cells[key] = cells[key] + "," + mark if key in cells else mark
    width = max([len(v) for v in cells.values()] + [len(str(x0)), len(str(x1)), 1])
    lw = max(len(str(y0)), len(str(y1)), len(chart.ylabel))
    lines = [chart.title]
    for y in range(y1, y0 - 1, -1):
        row = [cells.get((x, y), ".").rjust(width) for x in range(x0, x1 + 1)]
        lines.append(f"{y:>{lw}} | " + " ".join(row))
    if x1 >= x0:
        lines.append(" " * lw + " +-" + "-" * ((width + 1) * (x1 - x0 + 1)))
        lines.append(" " * lw + "   " + " ".join(str(x).rjust(width) for x in range(x0, x1 + 1)))
    lines.append(f"{chart.ylabel} up, {chart.xlabel} across; o = Z, * = Z/2, ? = undetermined")
    for a in chart.arrows:
        lines.append(f"d{a.r}: ({a.x0},{a.y0}) -> ({a.x1},{a.y1})")
    return "\n".join(lines) + "\n"


def _sx(chart: Chart, x: int) -> int:
    return MARGIN + (x - chart.xrange[0]) * UNIT


def _sy(chart: Chart, y: int) -> int:
    return MARGIN + (chart.yrange[1] - y) * UNIT


def render_svg(chart: Chart) -> str:
    x0, x1 = chart.xrange
    y0, y1 = chart.yrange
    w = 2 * MARGIN + max(x1 - x0, 0) * UNIT
    h = 2 * MARGIN + max(y1 - y0, 0) * UNIT
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        "<defs><marker id=\"head\" markerWidth=\"4\" markerHeight=\"4\" refX=\"4\" refY=\"2\" "
        "orient=\"auto\"><path d=\"M0,0 L4,2 L0,4 z\" fill=\"black\"/></marker></defs>",
        f'<title>{escape(chart.title)}</title>',
        f'<text x="{MARGIN}" y="{MARGIN // 2}" font-size="8">{escape(chart.title)}</text>',
    ]
    grid = []
    for x in range(x0, x1 + 1):
        grid.append(f'<line x1="{_sx(chart, x)}" y1="{_sy(chart, y1)}" x2="{_sx(chart, x)}" y2="{_sy(chart, y0)}"/>')
    for y in range(y0, y1 + 1):
        grid.append(f'<line x1="{_sx(chart, x0)}" y1="{_sy(chart, y)}" x2="{_sx(chart, x1)}" y2="{_sy(chart, y)}"/>')
    out.append('<g stroke="#ddd" stroke-width="0.3">' + "".join(grid) + "</g>")
    axes = []
    if x0 <= 0 <= x1:
        axes.append(f'<line x1="{_sx(chart, 0)}" y1="{_sy(chart, y1)}" x2="{_sx(chart, 0)}" y2="{_sy(chart, y0)}"/>')
    if y0 <= 0 <= y1:
        axes.append(f'<line x1="{_sx(chart, x0)}" y1="{_sy(chart, 0)}" x2="{_sx(chart, x1)}" y2="{_sy(chart, 0)}"/>')
    out.append('<g stroke="black" stroke-width="0.6">' + "".join(axes) + "</g>")
    out.append(f'<text x="{w - MARGIN + 4}" y="{h - MARGIN + 10}" font-size="8">{escape(chart.xlabel)}</text>')
    out.append(f'<text x="{MARGIN - 12}" y="{MARGIN - 4}" font-size="8">{escape(chart.ylabel)}</text>')
    marks = []
    for g in chart.glyphs:
        cx, cy = _sx(chart, g.x), _sy(chart, g.y)
        tip = f"<title>({g.x},{g.y}) {escape(g.group)} {escape(g.label)}</title>"
        if g.unknown:
            marks.append(f'<text x="{cx}" y="{cy + 3}" font-size="8" text-anchor="middle">?{tip}</text>')
        elif g.group == "Z":
            marks.append(f'<circle cx="{cx}" cy="{cy}" r="3" fill="none" stroke="black">{tip}</circle>')
        elif g.group == "Z/2":
            marks.append(f'<circle cx="{cx}" cy="{cy}" r="1.5" fill="black">{tip}</circle>')
        else:
            marks.append(f'<text x="{cx}" y="{cy + 3}" font-size="6" text-anchor="middle">'
                         f'{escape(_short(g.group))}{tip}</text>')
    out.append("<g>" + "".join(marks) + "</g>")
    arrows = []
    for a in chart.arrows:
        arrows.append(f'<line x1="{_sx(chart, a.x0)}" y1="{_sy(chart, a.y0)}" x2="{_sx(chart, a.x1)}" '
                      f'y2="{_sy(chart, a.y1)}" marker-end="url(#head)"/>')
    out.append('<g stroke="black" stroke-width="0.5">' + "".join(arrows) + "</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def save_figure(chart: Chart, path: str) -> None:
    """Write the chart through matplotlib; the suffix picks PNG or PDF."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    suffix = str(path).rsplit(".", 1)[-1].lower()
    if suffix not in ("png", "pdf", "svg"):
        raise RenderError(f"figure format {suffix!r} not supported; use png or pdf")
    x0, x1 = chart.xrange
    y0, y1 = chart.yrange
    fig, ax = plt.subplots(figsize=(max(3.0, 0.25 * (x1 - x0 + 2)), max(3.0, 0.25 * (y1 - y0 + 2))))
    zs = [(g.x, g.y) for g in chart.glyphs if g.group == "Z" and not g.unknown]
    ts = [(g.x, g.y) for g in chart.glyphs if g.group == "Z/2" and not g.unknown]
    if zs:
        ax.scatter(*zip(*zs), s=40, facecolors="none", edgecolors="black", linewidths=0.8, zorder=3)
    if ts:
        ax.scatter(*zip(*ts), s=10, color="black", zorder=3)
    for g in chart.glyphs:
        if g.unknown:
            ax.text(g.x, g.y, "?", ha="center", va="center", fontsize=7)
        elif g.group not in ("Z", "Z/2"):
            ax.text(g.x, g.y, _short(g.group), ha="center", va="center", fontsize=6)
    for a in chart.arrows:
        ax.annotate("", xy=(a.x1, a.y1), xytext=(a.x0, a.y0),
                    arrowprops=dict(arrowstyle="->", lw=0.6, shrinkA=3, shrinkB=3))
    ax.set_xlim(x0 - 0.5, x1 + 0.5)
    ax.set_ylim(y0 - 0.5, y1 + 0.5)
    ax.axhline(0, color="black", lw=0.5)
    ax.axvline(0, color="black", lw=0.5)
    ax.set_xlabel(chart.xlabel)
    ax.set_ylabel(chart.ylabel)
    ax.set_title(chart.title, fontsize=9)
    ax.set_aspect("equal")
    ax.grid(True, lw=0.2)
    meta = {"Software": None} if suffix == "png" else {"CreationDate": None} if suffix == "pdf" else {"Date": None}
    fig.savefig(path, metadata=meta, bbox_inches="tight")
    plt.close(fig)


__all__ = [
    "Arrow", "Chart", "ChartStyle", "Glyph", "RenderError", "coefficient_table", "group_rows",
    "page_chart", "render", "render_svg", "render_text", "save_figure", "table_chart",
]
