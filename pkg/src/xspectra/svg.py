"""Minimal deterministic SVG line charts for study summaries."""

from __future__ import annotations

import math
from typing import Optional, Sequence
from xml.sax.saxutils import escape

from .estimators import asymptotic_reference
from .errors import NoReferenceError
from .study import StudySummary

WIDTH, HEIGHT = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 20, 40, 50


def grey(level: float) -> str:
    """Grey shade for ``level`` in [0, 1]: light at 0, black at 1."""
    v = int(round(200 * (1.0 - min(max(level, 0.0), 1.0))))
    return f"#{v:02x}{v:02x}{v:02x}"


def _nice_range(lo: float, hi: float) -> tuple[float, float]:
    if hi == lo:
        pad = abs(lo) * 0.05 or 0.05
        return lo - pad, hi + pad
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


class Chart:
    """A single-panel chart; coordinates may be linear or base-10 logarithmic."""

    def __init__(self, title: str, xlabel: str, ylabel: str, xs: Sequence[float],
                 ys: Sequence[float], logx: bool = False, logy: bool = False):
        self.title, self.xlabel, self.ylabel = title, xlabel, ylabel
        self.logx, self.logy = logx, logy
        tx = [self._tx(v, logx) for v in xs]
        ty = [self._tx(v, logy) for v in ys]
        self.xr = _nice_range(min(tx), max(tx))
        self.yr = _nice_range(min(ty), max(ty))
        self.items: list[str] = []

    @staticmethod
    def _tx(v: float, log: bool) -> float:
        return math.log10(v) if log else v

    def px(self, x: float) -> float:
        lo, hi = self.xr
        return LEFT + (self._tx(x, self.logx) - lo) / (hi - lo) * (WIDTH - LEFT - RIGHT)

    def py(self, y: float) -> float:
        lo, hi = self.yr
        return HEIGHT - BOTTOM - (self._tx(y, self.logy) - lo) / (hi - lo) * (HEIGHT - TOP - BOTTOM)

    def line(self, xs, ys, color: str, css_class: str, label: str = "", dash: bool = False):
        pts = " ".join(f"{self.px(x):.3f},{self.py(y):.3f}" for x, y in zip(xs, ys)
                       if not (math.isnan(y) or (self.logy and y <= 0)))
        extra = ' stroke-dasharray="6,4"' if dash else ""
        self.items.append(
            f'<polyline class="{css_class}" data-label="{escape(label)}" points="{pts}" '
            f'fill="none" stroke="{color}" stroke-width="1.5"{extra}/>'
        )

    def _ticks(self, lo: float, hi: float, log: bool) -> list[tuple[float, str]]:
        out = []
        for k in range(5):
            t = lo + (hi - lo) * k / 4
            val = 10 ** t if log else t
            out.append((val, f"{val:.3g}"))
        return out

    def render(self) -> str:
        parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'data-x-range="{self.xr[0]!r},{self.xr[1]!r}" data-y-range="{self.yr[0]!r},{self.yr[1]!r}" '
            f'data-logx="{int(self.logx)}" data-logy="{int(self.logy)}">',
            f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
            f'<text x="{WIDTH / 2}" y="22" text-anchor="middle" font-size="15">{escape(self.title)}</text>',
            f'<rect x="{LEFT}" y="{TOP}" width="{WIDTH - LEFT - RIGHT}" '
            f'height="{HEIGHT - TOP - BOTTOM}" fill="none" stroke="black"/>',
        ]
        for val, lab in self._ticks(*self.xr, self.logx):
            x = self.px(val)
            parts.append(f'<text x="{x:.1f}" y="{HEIGHT - BOTTOM + 16}" text-anchor="middle" font-size="11">{lab}</text>')
        for val, lab in self._ticks(*self.yr, self.logy):
            y = self.py(val)
            parts.append(f'<text x="{LEFT - 6}" y="{y + 4:.1f}" text-anchor="end" font-size="11">{lab}</text>')
        parts.append(f'<text x="{WIDTH / 2}" y="{HEIGHT - 12}" text-anchor="middle" font-size="12">{escape(self.xlabel)}</text>')
        parts.append(f'<text x="16" y="{HEIGHT / 2}" text-anchor="middle" font-size="12" '
                     f'transform="rotate(-90 16 {HEIGHT / 2})">{escape(self.ylabel)}</text>')
        parts.extend(self.items)
        parts.append("</svg>")
        return "\n".join(parts) + "\n"


def _rho_shades(rhos: Sequence[float]) -> dict[float, str]:
    if len(rhos) == 1:
        return {rhos[0]: grey(1.0)}
    lo, hi = min(rhos), max(rhos)
    return {r: grey(0.25 + 0.75 * (r - lo) / (hi - lo)) for r in rhos}


def mean_chart(summary: StudySummary, estimator: str) -> str:
    rows = summary.select(estimator)
    rhos = sorted({r.rho for r in rows})
    fracs = sorted({r.m_over_T for r in rows})
    ys = [r.mean for r in rows if not math.isnan(r.mean)] + [summary.true_h]
    chart = Chart(f"{estimator}: mean estimate", "m/T", "mean H_xy", fracs, ys)
    shades = _rho_shades(rhos)
    for rho in rhos:
        sl = sorted(summary.select(estimator, rho), key=lambda r: r.m_over_T)
        chart.line([r.m_over_T for r in sl], [r.mean for r in sl], shades[rho], "series", f"rho={rho:g}")
    chart.line([fracs[0], fracs[-1]], [summary.true_h] * 2, "#d62728", "truth", f"H_xy={summary.true_h:g}")
    return chart.render()


def variance_chart(summary: StudySummary, estimator: str, T: Optional[int] = None) -> str:
    """Log-log variance against bandwidth; overlays the univariate reference when one exists."""
    T = T or summary.T
    rows = [r for r in summary.select(estimator) if r.variance > 0]
    rhos = sorted({r.rho for r in rows})
    fracs = sorted({r.m_over_T for r in summary.select(estimator)})
    ms = [max(2, math.floor(f * T + 1e-9)) for f in fracs]
    ref = None
    try:
        ref = [asymptotic_reference(estimator, m) for m in ms]
    except NoReferenceError:
        pass
    ys = [r.variance for r in rows] + (ref or [])
    if not ys:
        ys = [1.0]
    chart = Chart(f"{estimator}: variance", "m", "variance of H_xy", ms, ys, logx=True, logy=True)
    shades = _rho_shades(rhos) if rhos else {}
    for rho in rhos:
        sl = sorted(summary.select(estimator, rho), key=lambda r: r.m_over_T)
        chart.line([max(2, math.floor(r.m_over_T * T + 1e-9)) for r in sl],
                   [r.variance for r in sl], shades[rho], "series", f"rho={rho:g}")
    if ref is not None:
        chart.line(ms, ref, "#d62728", "reference", "univariate asymptotic")
    return chart.render()
