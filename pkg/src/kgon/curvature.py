"""Discrete curvature of closed contours and equal-turning resampling.

Derivatives are estimated on an arc-length-uniform resampling of the
contour, so the difference quotients approximate arc-length derivatives and
the traversal speed is unit to first order.  The headline quantities are
the turning integral (sum of |kappa| times the arc step, dimensionless and
scale-invariant) and the count of curvature sign changes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadK, DegenerateDerivative, FlatContour, TooFewPoints
from .geometry import CURVATURE, Contour, KGon, evaluate_many

#: |kappa| below this fraction of the per-contour maximum is treated as zero
#: when counting sign changes; float residue on straight runs is not a sign.
SIGN_FLOOR = 1e-9


@dataclass(frozen=True)
class CurvatureProfile:
    """Signed curvature along a contour plus its absolute accumulation.

    ``signed_curvatures`` has one entry per uniform sample (the first
    aligned with the contour's first vertex); ``cumulative_absolute`` has
    K+1 entries from 0 up to ``total_absolute``.
    """

    signed_curvatures: np.ndarray
    cumulative_absolute: np.ndarray
    total_absolute: float
    sign_changes: int


def curvature_profile(c: Contour) -> CurvatureProfile:
    """Estimate signed curvature at K uniform arc-length samples.

    Central differences with circular wraparound give x', x'', y', y'';
    the signed curvature is (x'y'' - y'x'') / (x'^2 + y'^2)^(3/2), positive
    on convex arcs of a counterclockwise contour.
    """
    k = c.size
    if k < 5:
        raise TooFewPoints(f"curvature needs at least 5 points, got {k}")
    ds = c.arc_table.total_length / k
    pts = evaluate_many(c, np.arange(k) / k)
    x, y = pts.real, pts.imag
    xp = (np.roll(x, -1) - np.roll(x, 1)) / (2 * ds)
    yp = (np.roll(y, -1) - np.roll(y, 1)) / (2 * ds)
    xpp = (np.roll(x, -1) - 2 * x + np.roll(x, 1)) / ds**2
    ypp = (np.roll(y, -1) - 2 * y + np.roll(y, 1)) / ds**2
    speed_sq = xp**2 + yp**2
    if np.any(speed_sq < 1e-30):
        raise DegenerateDerivative("vanishing first derivative on uniform resampling")
    kappa = (xp * ypp - yp * xpp) / speed_sq**1.5
    contributions = np.abs(kappa) * ds
    cumulative = np.concatenate([[0.0], np.cumsum(contributions)])
    total = float(cumulative[-1])
    cumulative.setflags(write=False)
    kappa.setflags(write=False)
    return CurvatureProfile(kappa, cumulative, total, _count_sign_changes(kappa))


def _count_sign_changes(kappa: np.ndarray) -> int:
    floor = SIGN_FLOOR * np.max(np.abs(kappa), initial=0.0)
    signs = np.sign(kappa[np.abs(kappa) > floor])
    if len(signs) == 0:
        return 0
    return int(np.count_nonzero(signs != np.roll(signs, -1)))


def resample_curvature(c: Contour, p: CurvatureProfile, k: int) -> KGon:
    """k-gon whose consecutive vertices enclose equal absolute turning.

    Sampling starts at the anchor; targets are found by inverting the
    piecewise-linear cumulative-turning profile, taking the earliest
    arc-length position wherever the profile is flat.
    """
    if not 4 <= k <= c.size:
        raise BadK(f"k must lie in [4, {c.size}], got {k}")
    if p.total_absolute < 1e-12:
        raise FlatContour("no absolute curvature to distribute")
    big_k = c.size
    grid = np.arange(big_k + 1) / big_k
    cum = p.cumulative_absolute
    a = c.anchor
    at_anchor = float(np.interp(a, grid, cum))
    # Unwrap the profile to start at the anchor and span one full loop.
    j0 = int(np.searchsorted(grid, a, side="right"))
    pos = np.concatenate([[a], grid[j0:], 1.0 + grid[1:j0], [1.0 + a]])
    turn = np.concatenate(
        [[0.0], cum[j0:] - at_anchor, p.total_absolute - at_anchor + cum[1:j0],
         [p.total_absolute]]
    )
    targets = p.total_absolute * np.arange(1, k) / k
    idx = np.searchsorted(turn, targets, side="left")
    span = turn[idx] - turn[idx - 1]
    s = pos[idx - 1] + (targets - turn[idx - 1]) / span * (pos[idx] - pos[idx - 1])
    fracs = np.mod(np.concatenate([[a], s]), 1.0)
    return KGon(evaluate_many(c, fracs), fracs, CURVATURE)
