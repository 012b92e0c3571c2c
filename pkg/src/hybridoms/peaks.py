"""Local-maximum detection with three-point parabolic refinement."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy.signal import find_peaks as _scipy_find_peaks


class Peak(NamedTuple):
    position: float
    height: float
    index: int


def parabolic_vertex(x, y):
    """Vertex of the parabola through three points (spacing may be uneven)."""
    x0, x1, x2 = x
    y0, y1, y2 = y
    d01, d12, d02 = x1 - x0, x2 - x1, x2 - x0
    # divided differences
    a = ((y2 - y1) / d12 - (y1 - y0) / d01) / d02
    b = (y1 - y0) / d01 - a * (x0 + x1)
    if a >= 0:
        return x1, y1
    xv = -b / (2 * a)
    xv = min(max(xv, x0), x2)
    yv = y1 + (xv - x1) * ((y1 - y0) / d01 + a * (xv - x0))
    return xv, yv


def refine(x, y, i: int) -> Peak:
    """Refine the sampled maximum at index ``i``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if i <= 0 or i >= len(x) - 1:
        return Peak(float(x[i]), float(y[i]), i)
    xv, yv = parabolic_vertex(x[i - 1:i + 2], y[i - 1:i + 2])
    return Peak(float(xv), float(yv), i)


def find_peaks(x, y, min_height: float = 0.0, rel_height: float = 0.0) -> list[Peak]:
    """All interior local maxima above ``max(min_height, rel_height * max(y))``.

    Returns refined peaks ordered by position.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 3:
        return []
    threshold = max(min_height, rel_height * float(np.max(y)))
    idx, _ = _scipy_find_peaks(y, height=threshold if threshold > 0 else None)
    return [refine(x, y, int(i)) for i in idx]


def highest_peak(x, y) -> Peak:
    """Refined global maximum of a sampled curve."""
    y = np.asarray(y, dtype=float)
    return refine(x, y, int(np.argmax(y)))


def nearest_peak(peaks: list[Peak], position: float) -> Peak | None:
    if not peaks:
        return None
    return min(peaks, key=lambda pk: abs(pk.position - position))


def fwhm(x, y, i: int) -> float:
    """Full width at half maximum of the peak at index ``i`` (linear interpolation)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    half = 0.5 * y[i]
    j = i
    while j > 0 and y[j] > half:
        j -= 1
    if y[j] > half:
        raise ValueError("left half-maximum crossing outside the sampled range")
    left = x[j] + (half - y[j]) * (x[j + 1] - x[j]) / (y[j + 1] - y[j])
    j = i
    while j < len(y) - 1 and y[j] > half:
        j += 1
    if y[j] > half:
        raise ValueError("right half-maximum crossing outside the sampled range")
    right = x[j - 1] + (half - y[j - 1]) * (x[j] - x[j - 1]) / (y[j] - y[j - 1])
    return right - left
