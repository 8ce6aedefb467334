"""Circular moving-average smoothing of digitized contours."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import WindowTooLarge
from .geometry import Contour, ingest


@dataclass(frozen=True)
class SmootherConfig:
    window: int = 3
    passes: int = 4

    def __post_init__(self):
        if self.window < 3 or self.window % 2 == 0:
            raise ValueError(f"window must be odd and >= 3, got {self.window}")
        if self.passes < 0:
            raise ValueError(f"passes must be >= 0, got {self.passes}")


def _average_once(points: np.ndarray, window: int) -> np.ndarray:
    half = window // 2
    ext = np.concatenate([points[-half:], points, points[:half]])
    return np.convolve(ext, np.full(window, 1.0 / window), mode="valid")


def smooth(c: Contour, cfg: SmootherConfig = SmootherConfig()) -> Contour:
    """Replace each point by the mean of its circular window, ``passes`` times.

    The result is re-validated as a contour, so coincident points produced
    by heavy smoothing are collapsed.
    """
    if cfg.window >= c.size:
        raise WindowTooLarge(f"window {cfg.window} >= contour size {c.size}")
    if cfg.passes == 0:
        return c
    pts = np.array(c.points)
    for _ in range(cfg.passes):
        pts = _average_once(pts, cfg.window)
    return ingest(pts)
