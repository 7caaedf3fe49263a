"""Preference histograms, preference-coloured SVG plots and plain-text study reports.

Colour ramps
------------
Positive preferences run from yellow (#f5e050) at small magnitude to green
(#1a9641) at the largest magnitude plotted; negative ones from tan (#d2b48c)
to red (#c0141e). Zero is the shared boundary colour #e4ca6e (the CIELAB
midpoint of yellow and tan). Interpolation is linear in CIELAB (D65) on
|value| / max|value|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence
from xml.sax.saxutils import escape

import numpy as np

from .bootstrap import BootstrapScatter
from .data_model import SummaryStats
from .errors import IoError
from .preference import PreferenceMap, evaluate
from .scale import Perspective, ShadowPrice
from .wedge import ConfidenceWedge, QuadrantCounts

DEFAULT_BINS = 30
NEAR_ZERO = 0.1

YELLOW = (245, 224, 80)
GREEN = (26, 150, 65)
TAN = (210, 180, 140)
RED = (192, 20, 30)


# --- colour -----------------------------------------------------------------

def _srgb_to_linear(c):
    c = c / 255.0
    return np.where(c <= 0.04045, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)


def _linear_to_srgb(c):
    c = np.clip(c, 0.0, 1.0)
    return np.where(c <= 0.0031308, 12.92 * c, 1.055 * c ** (1 / 2.4) - 0.055) * 255.0


_M = np.array([[0.4124564, 0.3575761, 0.1804375],
               [0.2126729, 0.7151522, 0.0721750],
               [0.0193339, 0.1191920, 0.9503041]])
_WHITE = np.array([0.95047, 1.0, 1.08883])


def rgb_to_lab(rgb) -> np.ndarray:
    xyz = _M @ _srgb_to_linear(np.asarray(rgb, dtype=float)) / _WHITE
    f = np.where(xyz > (6 / 29) ** 3, np.cbrt(xyz), xyz / (3 * (6 / 29) ** 2) + 4 / 29)
    return np.array([116 * f[1] - 16, 500 * (f[0] - f[1]), 200 * (f[1] - f[2])])


def lab_to_rgb(lab) -> tuple[int, int, int]:
    L, a, b = lab
    fy = (L + 16) / 116
    f = np.array([fy + a / 500, fy, fy - b / 200])
    xyz = np.where(f > 6 / 29, f**3, 3 * (6 / 29) ** 2 * (f - 4 / 29)) * _WHITE
    rgb = _linear_to_srgb(np.linalg.solve(_M, xyz))
    return tuple(int(round(float(v))) for v in rgb)


def _hex(rgb) -> str:
    return "#{:02x}{:02x}{:02x}".format(*rgb)


_LAB = {k: rgb_to_lab(v) for k, v in {"y": YELLOW, "g": GREEN, "t": TAN, "r": RED}.items()}
ZERO_COLOR = _hex(lab_to_rgb((_LAB["y"] + _LAB["t"]) / 2))


@dataclass(frozen=True)
class ColorScale:
    """Maps preference values to colours; ``limit`` is the magnitude shown at full saturation."""

    limit: float

    @classmethod
    def for_values(cls, values) -> "ColorScale":
        values = np.asarray(values, dtype=float)
        finite = np.abs(values[np.isfinite(values)])
        lim = float(finite.max()) if finite.size else 1.0
        return cls(lim if lim > 0 else 1.0)

    def band(self, value: float) -> str:
        if value > 0:
            return "pos"
        if value < 0:
            return "neg"
        return "zero"

    def color(self, value: float) -> str:
        if value == 0 or math.isnan(value):
            return ZERO_COLOR
        t = min(abs(value) / self.limit, 1.0)
        lo, hi = (_LAB["y"], _LAB["g"]) if value > 0 else (_LAB["t"], _LAB["r"])
        return _hex(lab_to_rgb(lo + t * (hi - lo)))

    def near_zero(self, values) -> int:
        """How many values fall in the palest part of either ramp."""
        v = np.abs(np.asarray(values, dtype=float))
        return int(np.count_nonzero(v < NEAR_ZERO * self.limit))


# --- histograms -------------------------------------------------------------

@dataclass(frozen=True)
class Histogram:
    bin_edges: tuple[float, ...]
    counts: tuple[int, ...]
    n: int
    all_positive: bool
    label: str = ""

    def __post_init__(self):
        if len(self.counts) != len(self.bin_edges) - 1:
            raise ValueError("need exactly one more edge than counts")
        if any(b <= a for a, b in zip(self.bin_edges, self.bin_edges[1:])):
            raise ValueError("bin edges must be strictly increasing")
        if sum(self.counts) != self.n:
            raise ValueError("counts must sum to n")


def histogram(values, bins: int = DEFAULT_BINS, label: str = "") -> Histogram:
    """Equal-width histogram over [min, max]; the maximum lands in the last bin.

    Bin membership depends only on (v - min) / (max - min), so a positive
    rescaling of all values leaves the counts unchanged.
    """
    if bins < 1:
        raise ValueError("bins must be positive")
    v = np.asarray(values, dtype=float)
    v = v[np.isfinite(v)]
    if v.size == 0:
        raise ValueError("no finite values to bin")
    lo, hi = float(v.min()), float(v.max())
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    pos = (v - lo) / (hi - lo) * bins
    idx = np.clip(np.floor(pos).astype(np.int64), 0, bins - 1)
    counts = np.bincount(idx, minlength=bins)
    edges = lo + (hi - lo) * np.arange(bins + 1) / bins
    edges[-1] = hi
    return Histogram(tuple(float(e) for e in edges), tuple(int(c) for c in counts), int(v.size),
                     bool((v > 0).all()), label)


def preference_values(scatter: BootstrapScatter, pmap: PreferenceMap) -> np.ndarray:
    return np.asarray(evaluate(pmap, scatter.xs, scatter.ys), dtype=float)


def preference_histogram(scatter: BootstrapScatter, pmap: PreferenceMap, bins: int = DEFAULT_BINS) -> Histogram:
    if bins < 5:
        raise ValueError("preference histograms need at least 5 bins")
    return histogram(preference_values(scatter, pmap), bins, label=map_label(pmap))


def map_label(pmap: PreferenceMap) -> str:
    if pmap.beta == 1 and pmap.gamma == 1:
        return "Net Benefit (beta=1, gamma=1)"
    return f"ICE map (beta={pmap.beta:.6g}, gamma={pmap.gamma:.6g})"


# --- SVG --------------------------------------------------------------------

SIZE = 600
MARGIN = 70


def _write(path: Path, text: str) -> Path:
    path = Path(path)
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror or exc}") from None
    return path


def _nice_ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + 1e-12 * span:
        ticks.append(round(t, 12))
        t += step
    return ticks


def axis_labels(perspective: Perspective, lam: ShadowPrice) -> tuple[str, str]:
    lv = f"{lam.value:g}"
    if perspective is Perspective.ALIAS:
        return ("Effectiveness difference, New - Std (effe units)",
                f"Cost difference / lambda (effe units, lambda = {lv})")
    return (f"lambda x Effectiveness difference (cost units, lambda = {lv})",
            "Cost difference, New - Std (cost units)")


class _Frame:
    """Square data window with equal units per pixel on both axes."""

    def __init__(self, xs, ys):
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        x0, x1 = float(xs.min()), float(xs.max())
        y0, y1 = float(ys.min()), float(ys.max())
        span = max(x1 - x0, y1 - y0) * 1.1 or 1.0
        cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
        self.x0, self.x1 = cx - span / 2, cx + span / 2
        self.y0, self.y1 = cy - span / 2, cy + span / 2
        self.span = span
        self.plot = SIZE - 2 * MARGIN

    def px(self, x):
        return MARGIN + (np.asarray(x, dtype=float) - self.x0) / self.span * self.plot

    def py(self, y):
        return MARGIN + (self.y1 - np.asarray(y, dtype=float)) / self.span * self.plot


def render_scatter_svg(
    scatter: BootstrapScatter,
    out,
    wedge: Optional[ConfidenceWedge] = None,
    pmap: Optional[PreferenceMap] = None,
    title: str = "",
) -> Path:
    """Bootstrap scatter as SVG, optionally preference-coloured and with wedge limit rays.

    Elements are tagged for machine reading: ``circle.rep`` (one per
    replicate, ``data-band`` pos/neg/zero when coloured), ``circle.observed``,
    ``circle.origin``, and ``line.wedge-limit`` / ``line.wedge-center`` rays
    from the origin.
    """
    if scatter.r == 0:
        raise ValueError("cannot plot an empty scatter")
    obs = scatter.observed
    frame = _Frame(np.append(scatter.xs, [0.0, obs.x]), np.append(scatter.ys, [0.0, obs.y]))
    px, py = frame.px(scatter.xs), frame.py(scatter.ys)
    xlabel, ylabel = axis_labels(scatter.perspective, scatter.lam)
    p = SIZE - MARGIN

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        f'<defs><clipPath id="plot"><rect x="{MARGIN}" y="{MARGIN}" width="{frame.plot}" height="{frame.plot}"/></clipPath></defs>',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{frame.plot}" height="{frame.plot}" fill="none" stroke="#444"/>',
    ]
    if title:
        parts.append(f'<text x="{SIZE / 2}" y="{MARGIN / 2}" text-anchor="middle" font-size="15">{escape(title)}</text>')
    for t in _nice_ticks(frame.x0, frame.x1):
        parts.append(f'<text class="tick" x="{float(frame.px(t)):.2f}" y="{p + 16}" text-anchor="middle" font-size="10">{t:g}</text>')
    for t in _nice_ticks(frame.y0, frame.y1):
        parts.append(f'<text class="tick" x="{MARGIN - 6}" y="{float(frame.py(t)) + 3:.2f}" text-anchor="end" font-size="10">{t:g}</text>')
    parts.append(f'<text class="xlabel" x="{SIZE / 2}" y="{SIZE - 22}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>')
    parts.append(f'<text class="ylabel" transform="translate(18 {SIZE / 2}) rotate(-90)" text-anchor="middle" font-size="12">{escape(ylabel)}</text>')

    ox, oy = float(frame.px(0.0)), float(frame.py(0.0))
    parts.append('<g clip-path="url(#plot)">')
    parts.append(f'<line class="axis" x1="{MARGIN}" y1="{oy:.3f}" x2="{p}" y2="{oy:.3f}" stroke="#999" stroke-width="0.8"/>')
    parts.append(f'<line class="axis" x1="{ox:.3f}" y1="{MARGIN}" x2="{ox:.3f}" y2="{p}" stroke="#999" stroke-width="0.8"/>')
    # x = y: the Net Benefit indifference line
    parts.append(
        f'<line class="indifference" x1="{float(frame.px(frame.y0)):.3f}" y1="{float(frame.py(frame.y0)):.3f}" '
        f'x2="{float(frame.px(frame.y1)):.3f}" y2="{float(frame.py(frame.y1)):.3f}" stroke="#bbb" stroke-dasharray="3 3"/>'
    )

    if pmap is not None:
        values = preference_values(scatter, pmap)
        scale = ColorScale.for_values(values)
        for x, y, v in zip(px.tolist(), py.tolist(), values.tolist()):
            parts.append(f'<circle class="rep" data-band="{scale.band(v)}" cx="{x:.3f}" cy="{y:.3f}" r="1.3" fill="{scale.color(v)}"/>')
    else:
        for x, y in zip(px.tolist(), py.tolist()):
            parts.append(f'<circle class="rep" cx="{x:.3f}" cy="{y:.3f}" r="1.3" fill="#4a6fa5" fill-opacity="0.6"/>')

    if wedge is not None:
        reach = frame.span * 2
        for cls, ang in (("wedge-limit", wedge.lower), ("wedge-limit", wedge.upper), ("wedge-center", wedge.center)):
            ex = float(frame.px(reach * math.cos(ang)))
            ey = float(frame.py(reach * math.sin(ang)))
            dash = ' stroke-dasharray="6 4"' if cls == "wedge-center" else ""
            parts.append(
                f'<line class="{cls}" data-angle="{ang!r}" x1="{ox:.6f}" y1="{oy:.6f}" x2="{ex:.6f}" y2="{ey:.6f}" '
                f'stroke="black" stroke-width="1.2"{dash}/>'
            )
    parts.append("</g>")
    parts.append(f'<circle class="origin" cx="{ox:.3f}" cy="{oy:.3f}" r="5" fill="#d7191c" stroke="black"/>')
    parts.append(
        f'<circle class="observed" cx="{float(frame.px(obs.x)):.3f}" cy="{float(frame.py(obs.y)):.3f}" r="5" fill="#2c7bb6" stroke="black"/>'
    )
    if wedge is not None:
        parts.append(
            f'<text class="wedge-caption" x="{MARGIN + 6}" y="{MARGIN + 16}" font-size="11">'
            f'{wedge.confidence * 100:g}% wedge: {wedge.count_below} below, {wedge.count_above} above, '
            f'{wedge.count_inside + wedge.count_origin} inside of {wedge.r}</text>'
        )
    parts.append("</svg>")
    return _write(out, "\n".join(parts) + "\n")


def render_histogram_svg(hist: Histogram, out, title: str = "") -> Path:
    """Bar chart of ``hist``; ``rect.bar`` heights are proportional to counts."""
    lo, hi = hist.bin_edges[0], hist.bin_edges[-1]
    plot = SIZE - 2 * MARGIN
    top = max(hist.counts) or 1

    def px(v):
        return MARGIN + (v - lo) / (hi - lo) * plot

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    heading = title or hist.label
    if heading:
        parts.append(f'<text x="{SIZE / 2}" y="{MARGIN / 2}" text-anchor="middle" font-size="15">{escape(heading)}</text>')
    base = SIZE - MARGIN
    for a, b, c in zip(hist.bin_edges, hist.bin_edges[1:], hist.counts):
        h = c / top * plot
        fill = "#1a9641" if a >= 0 else ("#c0141e" if b <= 0 else ZERO_COLOR)
        parts.append(
            f'<rect class="bar" data-count="{c}" x="{px(a):.3f}" y="{base - h:.6f}" width="{px(b) - px(a):.3f}" '
            f'height="{h:.6f}" fill="{fill}" stroke="white" stroke-width="0.5"/>'
        )
    parts.append(f'<line class="x-axis" x1="{MARGIN}" y1="{base}" x2="{SIZE - MARGIN}" y2="{base}" stroke="black"/>')
    parts.append(f'<line class="y-axis" x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{base}" stroke="black"/>')
    for t in _nice_ticks(lo, hi):
        parts.append(f'<text class="tick" x="{px(t):.2f}" y="{base + 16}" text-anchor="middle" font-size="10">{t:g}</text>')
    for t in _nice_ticks(0, top):
        y = base - t / top * plot
        parts.append(f'<text class="tick" x="{MARGIN - 6}" y="{y + 3:.2f}" text-anchor="end" font-size="10">{t:g}</text>')
    if lo <= 0 <= hi:
        parts.append(f'<line class="zero-line" x1="{px(0):.3f}" y1="{MARGIN}" x2="{px(0):.3f}" y2="{base}" stroke="black" stroke-dasharray="4 3"/>')
    parts.append(f'<text class="xlabel" x="{SIZE / 2}" y="{SIZE - 22}" text-anchor="middle" font-size="12">Preference for New (n = {hist.n})</text>')
    parts.append(f'<text class="ylabel" transform="translate(18 {SIZE / 2}) rotate(-90)" text-anchor="middle" font-size="12">Replications</text>')
    parts.append("</svg>")
    return _write(out, "\n".join(parts) + "\n")


# --- text report ------------------------------------------------------------

@dataclass
class StudyResults:
    summaries: dict  # {"Std": {"effe": SummaryStats, "cost": ...}, "New": {...}}
    arm_sizes: dict
    lam: ShadowPrice
    ratio: Optional[float]
    scale_rule: str
    scatter: BootstrapScatter
    wedge: ConfidenceWedge
    quadrants: QuadrantCounts
    hist_nb: Histogram
    hist_nonlinear: Histogram
    nonlinear_map: PreferenceMap


def _summary_line(name: str, s: SummaryStats) -> str:
    return f"  {name:<5}" + "".join(f"{v:>11.4f}" for v in s.as_row())


def _verdict(h: Histogram) -> str:
    if h.all_positive:
        return "ALL POSITIVE: every replicate favours New"
    return "NOT all positive: some replicates favour Std or are indifferent"


def study_report(res: StudyResults) -> str:
    """Plain-text summary of a two-arm ICE analysis."""
    w, q, sc = res.wedge, res.quadrants, res.scatter
    lines = ["ICE analysis: New vs Std", "=" * 24, ""]
    lines.append("Arm summaries")
    lines.append("  " + " " * 5 + "".join(f"{h:>11}" for h in ("Min", "1st Qu", "Median", "Mean", "3rd Qu", "Max", "SD")))
    for arm in ("Std", "New"):
        lines.append(f" {arm} (n = {res.arm_sizes[arm]})")
        for var in ("effe", "cost"):
            lines.append(_summary_line(var, res.summaries[arm][var]))
    lines.append("")
    lines.append("Shadow price of health")
    if res.ratio is not None:
        lines.append(f"  statistical ratio ({res.scale_rule}): {res.ratio:.6g}")
    lines.append(f"  lambda = {res.lam.value:g} (source: {res.lam.source.value})")
    lines.append("")
    obs = sc.observed
    lines.append(f"Observed outcome ({sc.perspective.value} perspective)")
    lines.append(f"  delta effe = {obs.delta_e:.6g}, delta cost = {obs.delta_c:.6g}")
    lines.append(f"  plotted point = ({obs.x:.6g}, {obs.y:.6g})")
    lines.append("")
    lines.append(f"Bootstrap: {sc.r} replications, seed {sc.seed}")
    fr = q.fractions()
    lines.append(
        "  quadrant fractions: "
        f"SE (more effective, cheaper) {fr['se']:.4f}, NE {fr['ne']:.4f}, NW {fr['nw']:.4f}, SW {fr['sw']:.4f}, "
        f"on an axis {fr['boundary'] + fr['origin']:.4f}"
    )
    lines.append("")
    lines.append(f"Confidence wedge ({w.tails} rule), confidence {w.confidence * 100:g}%")
    lines.append(f"  centre angle {math.degrees(w.center):.4f} deg")
    lines.append(f"  lower limit  {math.degrees(w.lower):.4f} deg, upper limit {math.degrees(w.upper):.4f} deg")
    lines.append(f"  half-width   {math.degrees(w.half_angle):.4f} deg")
    lines.append(
        f"  below (clockwise) {w.count_below}, above (counter-clockwise) {w.count_above}, "
        f"tails total {w.tail_total}, inside {w.count_inside + w.count_origin} of {w.r}"
    )
    lines.append("")
    lines.append("Preference histograms")
    lines.append(f"  {res.hist_nb.label}: {_verdict(res.hist_nb)}")
    lines.append(f"  {res.hist_nonlinear.label}: {_verdict(res.hist_nonlinear)}")
    lines.append("")
    return "\n".join(lines)
