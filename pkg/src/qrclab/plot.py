"""Self-contained SVG renderers for the case and scan figures.

Rendering is a pure function of the data and the fixed style constants
below, so plot files are diffable and byte-stable across reruns.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigurationError

WIDTH = 640
HEIGHT = 360
MARGIN = 52
TARGET_COLOR = "#1f77b4"
PREDICTION_COLOR = "#d62728"
TRAIN_COLOR = "#1f77b4"
TEST_COLOR = "#d62728"
AXIS_COLOR = "#333333"
FONT = "font-family=\"sans-serif\" font-size=\"11\""


def _scale(values: np.ndarray, lo_px: float, hi_px: float):
    vmin = float(np.min(values))
    vmax = float(np.max(values))
    if vmax == vmin:  # degenerate range: park everything mid-axis
        return lambda v: (lo_px + hi_px) / 2.0, vmin, vmax
    span = vmax - vmin

    def to_px(v):
        return lo_px + (float(v) - vmin) / span * (hi_px - lo_px)

    return to_px, vmin, vmax


def _polyline(xs, ys, color: str) -> str:
    points = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(xs, ys))
    return (
        f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
        f'points="{points}"/>'
    )


def _frame(title: str, x_label: str, y_label: str, x_lo, x_hi, y_lo, y_hi) -> list[str]:
    left, right = MARGIN, WIDTH - MARGIN
    top, bottom = MARGIN, HEIGHT - MARGIN
    return [
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="{AXIS_COLOR}"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}" stroke="{AXIS_COLOR}"/>',
        f'<text x="{WIDTH // 2}" y="{MARGIN - 28}" text-anchor="middle" {FONT}>{title}</text>',
        f'<text x="{WIDTH // 2}" y="{HEIGHT - 10}" text-anchor="middle" {FONT}>{x_label}</text>',
        f'<text x="14" y="{HEIGHT // 2}" text-anchor="middle" {FONT} '
        f'transform="rotate(-90 14 {HEIGHT // 2})">{y_label}</text>',
        f'<text x="{left}" y="{bottom + 14}" text-anchor="middle" {FONT}>{x_lo:.4g}</text>',
        f'<text x="{right}" y="{bottom + 14}" text-anchor="middle" {FONT}>{x_hi:.4g}</text>',
        f'<text x="{left - 6}" y="{bottom}" text-anchor="end" {FONT}>{y_lo:.4g}</text>',
        f'<text x="{left - 6}" y="{top + 4}" text-anchor="end" {FONT}>{y_hi:.4g}</text>',
    ]


def _document(body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">'
    )
    return head + "\n" + "\n".join(body) + "\n</svg>\n"


def render_overlay_svg(t, target, prediction, title: str = "target vs prediction") -> str:
    """Target/prediction overlay over a time axis, one polyline per curve."""
    t = np.asarray(t, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    prediction = np.asarray(prediction, dtype=np.float64)
    if t.size == 0:
        raise ConfigurationError("nothing to plot: empty series")
    if not (t.shape == target.shape == prediction.shape):
        raise ConfigurationError("t, target and prediction must have equal length")

    x_px, x_lo, x_hi = _scale(t, MARGIN, WIDTH - MARGIN)
    both = np.concatenate([target, prediction])
    y_px, y_lo, y_hi = _scale(both, HEIGHT - MARGIN, MARGIN)  # inverted: SVG y grows down

    body = _frame(title, "t", "value", x_lo, x_hi, y_lo, y_hi)
    body.append(_polyline([x_px(v) for v in t], [y_px(v) for v in target], TARGET_COLOR))
    body.append(_polyline([x_px(v) for v in t], [y_px(v) for v in prediction], PREDICTION_COLOR))
    body.append(
        f'<text x="{WIDTH - MARGIN}" y="{MARGIN - 28}" text-anchor="end" {FONT}>'
        f'<tspan fill="{TARGET_COLOR}">target</tspan> '
        f'<tspan fill="{PREDICTION_COLOR}">prediction</tspan></text>'
    )
    return _document(body)


def render_scan_svg(rows, title: str = "train/test score vs qubits") -> str:
    """Train/test score curves against reservoir width, with point markers."""
    rows = list(rows)
    if not rows:
        raise ConfigurationError("nothing to plot: empty scan")
    n = np.array([r.n_qubits for r in rows], dtype=np.float64)
    train = np.array([r.train_score for r in rows], dtype=np.float64)
    test = np.array([r.test_score for r in rows], dtype=np.float64)

    x_px, x_lo, x_hi = _scale(n, MARGIN, WIDTH - MARGIN)
    both = np.concatenate([train, test])
    y_px, y_lo, y_hi = _scale(both, HEIGHT - MARGIN, MARGIN)

    body = _frame(title, "n_qubits", "score", x_lo, x_hi, y_lo, y_hi)
    for series, color in ((train, TRAIN_COLOR), (test, TEST_COLOR)):
        xs = [x_px(v) for v in n]
        ys = [y_px(v) for v in series]
        body.append(_polyline(xs, ys, color))
        for x, y in zip(xs, ys):
            body.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="{color}"/>')
    body.append(
        f'<text x="{WIDTH - MARGIN}" y="{MARGIN - 28}" text-anchor="end" {FONT}>'
        f'<tspan fill="{TRAIN_COLOR}">train</tspan> '
        f'<tspan fill="{TEST_COLOR}">test</tspan></text>'
    )
    return _document(body)
