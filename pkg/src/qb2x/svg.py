"""Minimal SVG heatmap of log10 errors (one rect per grid cell)."""
import numpy as np

# viridis-like stops over [0, 1]
_STOPS = np.array([[68, 1, 84], [59, 82, 139], [33, 145, 140], [94, 201, 98], [253, 231, 37]], float)


def color(v, vmin=-16.0, vmax=0.0):
    if not np.isfinite(v):
        return "#000000" if v < 0 else "#ffffff"
    x = min(max((v - vmin) / (vmax - vmin), 0.0), 1.0) * (len(_STOPS) - 1)
    i = min(int(x), len(_STOPS) - 2)
    rgb = _STOPS[i] + (x - i) * (_STOPS[i + 1] - _STOPS[i])
    return "#%02x%02x%02x" % tuple(int(round(c)) for c in rgb)


def heatmap(points, log_err, box, nx, ny, cell=10, vmin=-16.0, vmax=0.0, title=""):
    """Cells without a value (excluded near the curve) are drawn grey."""
    x0, x1, y0, y1 = box
    dx = (x1 - x0) / max(nx - 1, 1)
    dy = (y1 - y0) / max(ny - 1, 1)
    W, H = nx * cell, ny * cell
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W + 60}" height="{H + 30}">',
           f'<rect width="{W}" height="{H}" fill="#bbbbbb"/>']
    for w, v in zip(points, log_err):
        i = int(round((w.real - x0) / dx)) if nx > 1 else 0
        j = int(round((y1 - w.imag) / dy)) if ny > 1 else 0
        out.append(f'<rect x="{i * cell}" y="{j * cell}" width="{cell}" height="{cell}" fill="{color(v, vmin, vmax)}"/>')
    # color bar
    for k in range(H):
        v = vmax - (vmax - vmin) * k / max(H - 1, 1)
        out.append(f'<rect x="{W + 10}" y="{k}" width="12" height="1" fill="{color(v, vmin, vmax)}"/>')
    out.append(f'<text x="{W + 26}" y="10" font-size="10">{vmax:g}</text>')
    out.append(f'<text x="{W + 26}" y="{H}" font-size="10">{vmin:g}</text>')
    if title:
        out.append(f'<text x="0" y="{H + 20}" font-size="12">{title}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
