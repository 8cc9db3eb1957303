"""A very small SVG writer for region maps."""

from __future__ import annotations

from xml.sax.saxutils import escape

from .scans import RegionMap

PALETTE = {
    "SupersonicStable": "#4c72b0",
    "SubsonicStable": "#55a868",
    "OutsideTheorem": "#dddddd",
    "Excluded": "#c44e52",
}
LINE_COLORS = {
    "supersonic": "#1f3a68",
    "sonic_F": "#555555",
    "exclusion_1": "#8c1d40",
    "exclusion_2": "#d17a00",
    "exclusion_3": "#6a3d9a",
    "exclusion_4": "#b15928",
}


def region_svg(rm: RegionMap, width: int = 640, height: int = 480, margin: int = 50) -> str:
    """Cells coloured by regime, horizontal axis ``|F_bar|``, vertical ``v_bar``."""
    F0, F1 = float(rm.F[0]), float(rm.F[-1])
    v0, v1 = float(rm.v[0]), float(rm.v[-1])
    pw, ph = width - 2 * margin - 150, height - 2 * margin
    dF = (F1 - F0) / max(len(rm.F) - 1, 1) or 1.0
    dv = (v1 - v0) / max(len(rm.v) - 1, 1) or 1.0
    spanF = (F1 - F0) + dF
    spanv = (v1 - v0) + dv

    def X(F):
        return margin + (F - F0 + dF / 2) / spanF * pw

    def Y(v):
        return margin + ph - (v - v0 + dv / 2) / spanv * ph

    cw, chh = pw / len(rm.F), ph / len(rm.v)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    for i, v in enumerate(rm.v):
        for j, F in enumerate(rm.F):
            rc = rm.classes[i][j]
            col = PALETTE[rc.regime.value]
            out.append(
                f'<rect x="{X(F) - cw / 2:.2f}" y="{Y(v) - chh / 2:.2f}" width="{cw:.2f}" '
                f'height="{chh:.2f}" fill="{col}"><title>{escape(rc.label)}</title></rect>'
            )
    for name, pts in rm.curves.items():
        inside = [(F, v) for F, v in pts if v0 <= v <= v1]
        if len(inside) < 2:
            continue
        path = " ".join(f"{X(F):.2f},{Y(v):.2f}" for F, v in inside)
        out.append(f'<polyline points="{path}" fill="none" stroke="{LINE_COLORS.get(name, "black")}" '
                   f'stroke-width="1.5"><title>{escape(name)}</title></polyline>')
    out.append(f'<text x="{margin + pw / 2}" y="{height - 12}" text-anchor="middle" '
               f'font-size="13">|F|</text>')
    out.append(f'<text x="14" y="{margin + ph / 2}" font-size="13">v</text>')
    for val, anchor in ((F0, "start"), (F1, "end")):
        out.append(f'<text x="{X(val):.1f}" y="{margin + ph + 16}" font-size="11" '
                   f'text-anchor="{anchor}">{val:g}</text>')
    for val in (v0, v1):
        out.append(f'<text x="{margin - 6}" y="{Y(val):.1f}" font-size="11" text-anchor="end">{val:g}</text>')
    lx, ly = width - margin - 140, margin
    entries = list(PALETTE.items()) + [(k, c) for k, c in LINE_COLORS.items() if k in rm.curves]
    for k, (name, col) in enumerate(entries):
        y = ly + 18 * k
        out.append(f'<rect x="{lx}" y="{y}" width="12" height="12" fill="{col}"/>')
        out.append(f'<text x="{lx + 18}" y="{y + 10}" font-size="11">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
