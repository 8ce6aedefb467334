"""Similarity-invariant distance between curve shapes.

A configuration is reduced to a preshape by removing translation (center)
and scale (unit norm); rotation is absorbed by the distance itself, which
depends only on |<u, v>|.  The distance is the Frobenius distance between
the rank-one projectors uu* and vv*, computed here through projection
residuals:

    rho^2 = 2 (1 - |<u, v>|^2) = 2 ||v - <u, v> u||^2

The residual form is used because it stays accurate when the shapes nearly
coincide, where 1 - |<u, v>|^2 cancels catastrophically.  Its maximum over
unit vectors is sqrt(2), attained by orthogonal preshapes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ZeroNorm
from .geometry import Contour, Curve, KGon, evaluate_many

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class Preshape:
    """Centered, unit-norm complex configuration."""

    coords: np.ndarray


@dataclass(frozen=True)
class ShapeDistance:
    rho: float

    @property
    def normalized(self) -> float:
        return min(max(self.rho / SQRT2, 0.0), 1.0)


def preshape(points: np.ndarray, m: int | None = None) -> Preshape:
    """Center and normalize a complex configuration.

    When ``m`` differs from the input length, the points are first treated
    as a closed polyline and re-evaluated at m equally spaced arc-length
    fractions from the first point.
    """
    pts = np.asarray(points, dtype=complex)
    if len(pts) < 4:
        raise ZeroNorm(f"need at least 4 points, got {len(pts)}")
    if m is not None and m != len(pts):
        closed = np.concatenate([pts, pts[:1]])
        cum = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(closed)))])
        s = cum[-1] * np.arange(m) / m
        pts = np.interp(s, cum, closed.real) + 1j * np.interp(s, cum, closed.imag)
    centered = pts - pts.mean()
    norm = np.linalg.norm(centered)
    if norm < 1e-150:
        raise ZeroNorm("all points coincide; no shape")
    coords = centered / norm
    coords.setflags(write=False)
    return Preshape(coords)


def rho_preshapes(u: Preshape, v: Preshape) -> float:
    """Distance between two preshapes of equal dimension."""
    a, b = u.coords, v.coords
    r1 = b - np.vdot(a, b) * a
    r2 = a - np.vdot(b, a) * b
    n1 = float(np.linalg.norm(r1))
    n2 = float(np.linalg.norm(r2))
    return math.sqrt(2.0 * (n1 * n2))


def curve_preshape(curve: Curve, m: int) -> Preshape:
    """Preshape of a curve sampled at m anchor-aligned arc-length fractions.

    Contours start at their farthest-from-centroid point; a sampled polygon
    starts at its first vertex, which is that same point by construction.
    """
    anchor = 0.0 if isinstance(curve, KGon) else curve.anchor
    fracs = np.mod(anchor + np.arange(m) / m, 1.0)
    return preshape(evaluate_many(curve, fracs))


def vw_distance(a: Curve, b: Curve, m: int | None = None) -> ShapeDistance:
    """Shape distance between two curves on a common m-point sampling grid."""
    if m is None:
        m = max(a.size, b.size, 4)
    return ShapeDistance(rho_preshapes(curve_preshape(a, m), curve_preshape(b, m)))
