"""Minimal SVG emission: curve-evolution strips laid out left to right."""

from pathlib import Path

import numpy as np

from .curves import CLOSED, PlaneCurve

FRAME = 120.0
MARGIN = 8.0


def _frame_svg(curve: PlaneCurve, x0: float, scale: float, flagged: bool) -> str:
    pts = curve.points
    center = pts.mean()
    xy = (pts - center) * scale
    cx = x0 + FRAME / 2.0
    cy = FRAME / 2.0
    coords = " ".join(f"{cx + z.real:.2f},{cy - z.imag:.2f}" for z in xy)
    tag = "polygon" if curve.topology == CLOSED else "polyline"
    parts = [
        f'<rect x="{x0:.1f}" y="0" width="{FRAME:.1f}" height="{FRAME:.1f}" '
        f'fill="none" stroke="{"#c00" if flagged else "#ccc"}" '
        f'stroke-width="{2 if flagged else 1}"/>',
        f'<{tag} points="{coords}" fill="none" stroke="#036" stroke-width="1.2"/>',
    ]
    if curve.topology != CLOSED:
        for z in (xy[0], xy[-1]):
            parts.append(
                f'<circle cx="{cx + z.real:.2f}" cy="{cy - z.imag:.2f}" r="2.2" fill="#036"/>'
            )
    return "\n".join(parts)


def render_strip(curves, out_path, flagged=None) -> str:
    """Write an SVG strip of curve frames, centered by centroid with one
    shared scale; flagged frames get a red border."""
    flagged = [False] * len(curves) if flagged is None else list(flagged)
    radius = max(
        float(np.max(np.abs(c.points - c.points.mean()))) for c in curves
    )
    scale = (FRAME / 2.0 - MARGIN) / max(radius, 1e-12)
    width = FRAME * len(curves)
    body = "\n".join(
        _frame_svg(c, i * FRAME, scale, flagged[i]) for i, c in enumerate(curves)
    )
    doc = (
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width:.1f} {FRAME:.1f}" '
        f'width="{width:.0f}" height="{FRAME:.0f}">\n{body}\n</svg>\n'
    )
    Path(out_path).write_text(doc)
    return doc
