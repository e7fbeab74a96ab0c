"""SVG 1.1 drawings of axis-motifs on the unit-square flat torus.

Torus links are drawn as families of parallel straight lines of the matching
slope, trivial knots as small circles, and noncontractible loops as circles
centred on the side(s) of the square they cross, clipped to the square so
their arcs reappear on the opposite side. Output depends only on the
axis-motif, so equal inputs give byte-identical files.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from xml.sax.saxutils import escape

from .directions import AxisMotif
from .lattice import _egcd

SIZE = 400
MARGIN = 20
LINE_COLOURS = ("#1f4e9c", "#b8322a", "#2b8a3e", "#8a5a00", "#6b2c91", "#00707a")


def _fmt(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _pt(x: Fraction | float, y: Fraction | float) -> tuple[str, str]:
    return _fmt(MARGIN + SIZE * float(x)), _fmt(MARGIN + SIZE * (1 - float(y)))


def line_segments(p: int, q: int, c: Fraction) -> list[tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]]:
    """Pieces in [0,1]^2 of the closed curve ``q*x - p*y = c (mod 1)`` of primitive class (p, q)."""
    g, u, v = _egcd(q, -p)
    if g < 0:
        u, v = -u, -v
    x0, y0 = c * u, c * v  # q*x0 - p*y0 = c
    cuts = {Fraction(0), Fraction(1)}
    for start, step in ((x0, p), (y0, q)):
        if step:
            lo, hi = sorted((start, start + step))
            k = int(lo) - 1
            while k <= hi + 1:
                s = (k - start) / step
                if 0 < s < 1:
                    cuts.add(s)
                k += 1
    cuts = sorted(cuts)
    out = []
    for s0, s1 in zip(cuts, cuts[1:]):
        mid = (s0 + s1) / 2
        shift_x = (x0 + mid * p) // 1
        shift_y = (y0 + mid * q) // 1
        a = (x0 + s0 * p - shift_x, y0 + s0 * q - shift_y)
        b = (x0 + s1 * p - shift_x, y0 + s1 * q - shift_y)
        out.append((a, b))
    return out


def render(axis: AxisMotif, title: str = "") -> str:
    """Return the SVG text for ``axis``."""
    full = SIZE + 2 * MARGIN
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{full}" height="{full}" '
        f'viewBox="0 0 {full} {full}">',
    ]
    label = title or "axis-motif"
    out.append(f"  <title>{escape(label)}: {escape(str(axis))}</title>")
    out.append("  <defs>")
    out.append(f'    <clipPath id="torus"><rect x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}"/></clipPath>')
    out.append("  </defs>")
    out.append(f'  <rect x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}" fill="#ffffff" '
               'stroke="#000000" stroke-width="1.5" stroke-dasharray="6 4"/>')

    # torus links: m copies of an (a, b) curve are m*gcd(a, b) parallel primitive strands
    families = sorted(axis.torus_links)
    for k, (a, b, m) in enumerate(families):
        g = gcd(a, b)
        p, q = a // g, b // g
        strands = m * g
        colour = LINE_COLOURS[k % len(LINE_COLOURS)]
        out.append(f'  <g stroke="{colour}" stroke-width="2" fill="none" stroke-linecap="round">')
        for j in range(strands):
            c = (Fraction(2 * j + 1, 2 * strands) + Fraction(k, 7 * (len(families) + 1))) % 1
            for (x1, y1), (x2, y2) in line_segments(p, q, c):
                (sx1, sy1), (sx2, sy2) = _pt(x1, y1), _pt(x2, y2)
                out.append(f'    <line x1="{sx1}" y1="{sy1}" x2="{sx2}" y2="{sy2}"/>')
        out.append("  </g>")

    # trivial knots: a row of small circles
    n = axis.trivial_knots
    if n:
        out.append('  <g stroke="#000000" stroke-width="1.5" fill="none">')
        r = min(0.04, 0.4 / n)
        for j in range(n):
            cx, cy = _pt(Fraction(2 * j + 1, 2 * n), Fraction(1, 10))
            out.append(f'    <circle cx="{cx}" cy="{cy}" r="{_fmt(SIZE * r)}"/>')
        out.append("  </g>")

    # noncontractible loops: circles on the sides they cross, with their translates
    loops = sorted(axis.noncontractible_loops)
    if loops:
        out.append('  <g stroke="#444444" stroke-width="2" fill="none" clip-path="url(#torus)">')
        both = 0
        for j, (longitude, meridian) in enumerate(loops):
            t = Fraction(2 * j + 1, 2 * len(loops))
            r = 0.1
            if longitude and meridian:
                # loops crossing both sides nest around the corner
                cx = cy = 0
                r = 0.08 + 0.05 * both
                both += 1
            else:
                cx = 0 if meridian else t
                cy = 0 if longitude else t
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    px, py = _pt(cx + dx, cy + dy)
                    out.append(f'    <circle cx="{px}" cy="{py}" r="{_fmt(SIZE * r)}"/>')
        out.append("  </g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
