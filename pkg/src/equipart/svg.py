"""Static SVG pictures of planar partitions."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .measures import Hyperplane, sector_weights

PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"]
MARKERS = ["circle", "rect"]

SIZE = 600
PAD = 20


def _labels(points, part):
    if isinstance(part, Hyperplane):
        return (points @ part.normal - part.offset < 0).astype(int)
    z = points[:, 0] + 1j * points[:, 1]
    return np.argmax(sector_weights(part.coordinate(z[:, None]), part.arity, 0.0), axis=-1)


def _segments(part, reach):
    if isinstance(part, Hyperplane):
        a = part.normal
        p = part.offset * a
        d = np.array([-a[1], a[0]])
        return [(p - reach * d, p + reach * d)]
    a = complex(part.normal[0])
    centre = np.conj(part.offset) * a
    out = []
    for j in range(part.arity):
        tip = centre + reach * np.exp(2j * np.pi * j / part.arity) * a
        out.append((np.array([centre.real, centre.imag]), np.array([tip.real, tip.imag])))
    return out


def render_planar(measures, partitions, path=None) -> str:
    """SVG of planar point clouds coloured by their part of the first partition, with overlays.

    Each measure gets its own marker shape; every partition is drawn as lines
    (hyperplanes) or rays from the centre (fans).
    """
    pts = np.vstack([mu.points for mu in measures])
    if pts.shape[1] != 2:
        raise ValueError("SVG rendering is only available for planar measures")
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = float(max(hi[0] - lo[0], hi[1] - lo[1], 1e-9))
    lo = lo - 0.1 * span
    span *= 1.2
    scale = (SIZE - 2 * PAD) / span

    def xy(p):
        return PAD + (p[0] - lo[0]) * scale, SIZE - PAD - (p[1] - lo[1]) * scale

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
           f'viewBox="0 0 {SIZE} {SIZE}">',
           '<rect width="100%" height="100%" fill="white"/>',
           f'<clipPath id="frame"><rect x="{PAD}" y="{PAD}" width="{SIZE - 2 * PAD}" '
           f'height="{SIZE - 2 * PAD}"/></clipPath>']
    first = partitions[0] if partitions else None
    for m, mu in enumerate(measures):
        labels = _labels(mu.points, first) if first is not None else np.zeros(len(mu), int)
        for p, lab in zip(mu.points, labels):
            x, y = xy(p)
            colour = PALETTE[int(lab) % len(PALETTE)]
            if MARKERS[m % 2] == "circle":
                out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="2.5" fill="{colour}"/>')
            else:
                out.append(f'<rect x="{x - 2.5:.2f}" y="{y - 2.5:.2f}" width="5" height="5" fill="{colour}"/>')
    out.append('<g clip-path="url(#frame)" stroke="black" stroke-width="1.5">')
    for part in partitions:
        for a, b in _segments(part, 2 * span):
            (x1, y1), (x2, y2) = xy(a), xy(b)
            out.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}"/>')
    out.append("</g></svg>")
    text = "\n".join(out)
    if path is not None:
        Path(path).write_text(text)
    return text

