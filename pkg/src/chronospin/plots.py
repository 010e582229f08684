"""Static SVG output written by hand (no plotting library)."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .oracle import qm_correlation
from .spin import OscillatingSpin, Spin, amplitudes_at, amplitudes_at_time

WIDTH, HEIGHT = 640, 400
MARGIN = dict(left=70, right=20, top=40, bottom=55)


def oscillation_trace(start: Spin, ticks: int) -> list[tuple[int, float, float]]:
    """``(tick, P(down), P(up))`` at integer ticks ``0..ticks`` (exact)."""
    spin = OscillatingSpin(start)
    rows = []
    for n in range(ticks + 1):
        amps = amplitudes_at(spin, n)
        rows.append((n, amps.p_down, amps.p_up))
    return rows


def _num(x: float) -> str:
    return f"{x:.2f}".rstrip("0").rstrip(".")


class _Frame:
    def __init__(self, xlim, ylim, title, xlabel, ylabel):
        self.x0, self.x1 = xlim
        self.y0, self.y1 = ylim
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
            f'<text x="{WIDTH / 2}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
            f'<text x="{WIDTH / 2}" y="{HEIGHT - 12}" text-anchor="middle">{escape(xlabel)}</text>',
            f'<text x="18" y="{HEIGHT / 2}" text-anchor="middle" '
            f'transform="rotate(-90 18 {HEIGHT / 2})">{escape(ylabel)}</text>',
        ]
        self.left, self.right = MARGIN["left"], WIDTH - MARGIN["right"]
        self.top, self.bottom = MARGIN["top"], HEIGHT - MARGIN["bottom"]

    def x(self, v: float) -> float:
        return self.left + (v - self.x0) / (self.x1 - self.x0) * (self.right - self.left)

    def y(self, v: float) -> float:
        return self.bottom - (v - self.y0) / (self.y1 - self.y0) * (self.bottom - self.top)

    def axes(self, xticks, yticks, xfmt=_num, vgrid=False):
        p = self.parts
        p.append(f'<rect x="{self.left}" y="{self.top}" width="{self.right - self.left}" '
                 f'height="{self.bottom - self.top}" fill="none" stroke="black"/>')
        for t in xticks:
            x = self.x(t)
            if vgrid:
                p.append(f'<line x1="{x:.2f}" y1="{self.top}" x2="{x:.2f}" y2="{self.bottom}" '
                         f'stroke="#b0b0b0" stroke-width="1"/>')
            p.append(f'<line x1="{x:.2f}" y1="{self.bottom}" x2="{x:.2f}" y2="{self.bottom + 5}" '
                     f'stroke="black"/>')
            p.append(f'<text x="{x:.2f}" y="{self.bottom + 18}" text-anchor="middle">'
                     f'{escape(xfmt(t))}</text>')
        for t in yticks:
            y = self.y(t)
            p.append(f'<line x1="{self.left - 5}" y1="{y:.2f}" x2="{self.left}" y2="{y:.2f}" '
                     f'stroke="black"/>')
            p.append(f'<text x="{self.left - 8}" y="{y + 4:.2f}" text-anchor="end">{_num(t)}</text>')

    def polyline(self, xs, ys, color, width=2, dash=None):
        pts = " ".join(f"{self.x(a):.2f},{self.y(b):.2f}" for a, b in zip(xs, ys))
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                          f'stroke-width="{width}"{extra}/>')

    def points(self, xs, ys, color, r=4):
        for a, b in zip(xs, ys):
            self.parts.append(f'<circle cx="{self.x(a):.2f}" cy="{self.y(b):.2f}" r="{r}" '
                              f'fill="{color}"/>')

    def errorbars(self, xs, ys, errs, color):
        for a, b, e in zip(xs, ys, errs):
            x = self.x(a)
            self.parts.append(f'<line x1="{x:.2f}" y1="{self.y(b - e):.2f}" x2="{x:.2f}" '
                              f'y2="{self.y(b + e):.2f}" stroke="{color}" stroke-width="1.5"/>')

    def legend(self, entries):
        y = self.top + 16
        for label, color in entries:
            self.parts.append(f'<line x1="{self.right - 170}" y1="{y - 4}" x2="{self.right - 145}" '
                              f'y2="{y - 4}" stroke="{color}" stroke-width="3"/>')
            self.parts.append(f'<text x="{self.right - 140}" y="{y}">{escape(label)}</text>')
            y += 18

    def render(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def trace_svg(start: Spin = Spin.DOWN, ticks: int = 8, samples_per_tick: int = 40) -> str:
    """Squared amplitudes against time with grey lines at the measurable ticks."""
    spin = OscillatingSpin(start)
    ts = [i / samples_per_tick for i in range(ticks * samples_per_tick + 1)]
    amps = [amplitudes_at_time(spin, t) for t in ts]
    rows = oscillation_trace(start, ticks)
    f = _Frame((0, ticks), (-0.05, 1.05), f"Oscillation of a {start}-start spin",
               "time (ticks)", "probability")
    f.axes(range(ticks + 1), (0, 0.5, 1), xfmt=str, vgrid=True)
    f.polyline(ts, [a.p_down for a in amps], "#1f77b4")
    f.polyline(ts, [a.p_up for a in amps], "#d62728", dash="6,4")
    f.points([r[0] for r in rows], [r[1] for r in rows], "#1f77b4")
    f.points([r[0] for r in rows], [r[2] for r in rows], "#d62728", r=3)
    f.legend([("P(down)", "#1f77b4"), ("P(up)", "#d62728")])
    return f.render()


def _angle_label(phi: float) -> str:
    frac = phi / math.pi
    for den in (1, 2, 3, 4, 6, 12):
        num = round(frac * den)
        if abs(frac * den - num) < 1e-9:
            if num == 0:
                return "0"
            head = "" if num == 1 else str(num)
            return f"{head}π" + ("" if den == 1 else f"/{den}")
    return f"{phi:.3g}"


def correlation_svg(angles, correlations, stderrs, title="Correlation vs angle") -> str:
    """Monte Carlo correlation points with error bars over the oracle's ``-cos(phi)``."""
    hi = max(math.pi, max(angles) if angles else math.pi)
    xs = [hi * i / 200 for i in range(201)]
    f = _Frame((0, hi), (-1.1, 1.1), title, "angle phi (rad)", "E = P(same) - P(opposite)")
    ticks = sorted(set(angles)) if angles else [0, math.pi / 2, math.pi]
    f.axes(ticks, (-1, -0.5, 0, 0.5, 1), xfmt=_angle_label)
    f.polyline(xs, [qm_correlation(x) for x in xs], "#555555", dash="5,4")
    f.errorbars(angles, correlations, [4 * s for s in stderrs], "#1f77b4")
    f.points(angles, correlations, "#1f77b4")
    f.legend([("model (±4σ)", "#1f77b4"), ("oracle -cos φ", "#555555")])
    return f.render()
