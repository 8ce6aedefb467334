"""Closed planar contours and their polygon approximations.

A contour is an ordered cycle of planar points (stored as complex numbers)
traversed counterclockwise; the edge from the last point back to the first
is implied.  Evaluating the cycle at an arc-length fraction ``s`` in [0, 1)
walks the polyline at constant speed, which is what every resampling and
comparison routine in this package builds on.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Union

import numpy as np

from .errors import BadK, DegenerateContour, InputError, TooFewPoints

#: Anchor search evaluates every vertex plus this many uniform fractions per
#: original point; the maximizer of a polyline can sit mid-edge.
ANCHOR_GRID_PER_POINT = 4

ARCLENGTH = "arclength"
CURVATURE = "curvature"


@dataclass(frozen=True)
class ArcTable:
    """Cumulative edge lengths of a closed polyline, closing edge included.

    ``cumulative_lengths`` has K+1 entries: 0 at the first vertex and the
    full perimeter at the end.
    """

    cumulative_lengths: np.ndarray
    total_length: float


class Contour:
    """An ordered, counterclockwise cycle of at least 4 distinct points.

    Instances are produced by :func:`ingest` and are immutable; derived
    quantities (arc table, centroid, anchor) are cached on first use.
    """

    def __init__(self, points: np.ndarray):
        pts = np.asarray(points, dtype=complex)
        pts.setflags(write=False)
        self.points = pts

    @property
    def size(self) -> int:
        return len(self.points)

    @cached_property
    def arc_table(self) -> ArcTable:
        closed = np.concatenate([self.points, self.points[:1]])
        cum = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(closed)))])
        cum.setflags(write=False)
        return ArcTable(cum, float(cum[-1]))

    @cached_property
    def centroid(self) -> complex:
        # Line-integral centroid of the polyline: each edge contributes its
        # midpoint weighted by its length.  Not the vertex mean.
        closed = np.concatenate([self.points, self.points[:1]])
        mids = 0.5 * (closed[:-1] + closed[1:])
        weights = np.abs(np.diff(closed))
        return complex(np.sum(mids * weights) / np.sum(weights))

    @cached_property
    def anchor(self) -> float:
        """Arc-length fraction of the point farthest from the centroid.

        The search covers every vertex plus a uniform grid of 4K fractions;
        exact ties resolve to the smallest fraction.
        """
        table = self.arc_table
        vertex_fracs = table.cumulative_lengths[:-1] / table.total_length
        grid = np.arange(ANCHOR_GRID_PER_POINT * self.size) / (
            ANCHOR_GRID_PER_POINT * self.size
        )
        fracs = np.sort(np.concatenate([vertex_fracs, grid]))
        dist = np.abs(evaluate_many(self, fracs) - self.centroid)
        return float(fracs[np.argmax(dist)])

    def __repr__(self) -> str:  # pragma: no cover
        return f"Contour(K={self.size})"


class KGon:
    """A k-vertex polygon sampled from a parent contour.

    ``source_fractions`` are the parent arc-length fractions, in traversal
    order from the anchor; entries wrap around 1, so they increase strictly
    only after subtracting the first entry mod 1.  The polygon itself is a
    closed polyline and can be evaluated at any fraction.
    """

    def __init__(
        self,
        vertices: np.ndarray,
        source_fractions: np.ndarray,
        parameterization: str,
    ):
        verts = np.asarray(vertices, dtype=complex)
        fracs = np.asarray(source_fractions, dtype=float)
        verts.setflags(write=False)
        fracs.setflags(write=False)
        self.vertices = verts
        self.source_fractions = fracs
        self.parameterization = parameterization

    @property
    def size(self) -> int:
        return len(self.vertices)

    @cached_property
    def arc_table(self) -> ArcTable:
        closed = np.concatenate([self.vertices, self.vertices[:1]])
        cum = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(closed)))])
        cum.setflags(write=False)
        return ArcTable(cum, float(cum[-1]))

    @property
    def perimeter(self) -> float:
        return self.arc_table.total_length

    def __repr__(self) -> str:  # pragma: no cover
        return f"KGon(k={self.size}, parameterization={self.parameterization!r})"


Curve = Union[Contour, KGon]


def _as_points(curve: Curve) -> np.ndarray:
    return curve.vertices if isinstance(curve, KGon) else curve.points


def ingest(points: Iterable[complex] | np.ndarray) -> Contour:
    """Validate and normalize a raw point list into a :class:`Contour`.

    Consecutive duplicates are collapsed (the wrap-around pair included) and
    the orientation is forced counterclockwise by reversing clockwise input.

    Raises
    ------
    TooFewPoints
        If fewer than 4 distinct points remain.
    DegenerateContour
        If the points are collinear (zero signed area).
    """
    pts = np.asarray(points)
    if pts.ndim == 2 and pts.shape[1] == 2:
        pts = pts[:, 0] + 1j * pts[:, 1]
    pts = pts.astype(complex)
    if len(pts) > 1:
        keep = np.concatenate([[True], pts[1:] != pts[:-1]])
        pts = pts[keep]
    if len(pts) > 1 and pts[-1] == pts[0]:
        pts = pts[:-1]
    if len(pts) < 4:
        raise TooFewPoints(f"need at least 4 distinct points, got {len(pts)}")
    area = signed_area(pts)
    extent = np.max(np.abs(pts - pts.mean()))
    if abs(area) <= 1e-14 * extent * extent:
        raise DegenerateContour("points are collinear; contour encloses no area")
    if area < 0:
        pts = pts[::-1]
    return Contour(pts)


def signed_area(points: np.ndarray) -> float:
    """Shoelace area of the closed cycle; positive for counterclockwise."""
    p = np.asarray(points, dtype=complex)
    q = np.roll(p, -1)
    return float(0.5 * np.sum(p.real * q.imag - q.real * p.imag))


def arc_table(c: Curve) -> ArcTable:
    return c.arc_table


def centroid(c: Contour) -> complex:
    return c.centroid


def anchor_fraction(c: Contour) -> float:
    return c.anchor


def evaluate_many(curve: Curve, fractions: np.ndarray) -> np.ndarray:
    """Points on the closed polyline at arc-length fractions in [0, 1)."""
    pts = _as_points(curve)
    table = curve.arc_table
    closed = np.concatenate([pts, pts[:1]])
    s = np.mod(np.asarray(fractions, dtype=float), 1.0) * table.total_length
    x = np.interp(s, table.cumulative_lengths, closed.real)
    y = np.interp(s, table.cumulative_lengths, closed.imag)
    return x + 1j * y


def evaluate(curve: Curve, s: float) -> complex:
    """Point at arc-length fraction ``s`` from the first vertex."""
    if not 0.0 <= s < 1.0:
        raise ValueError(f"fraction must lie in [0, 1), got {s}")
    return complex(evaluate_many(curve, np.array([s]))[0])


def resample_arclength(c: Contour, k: int) -> KGon:
    """Equally spaced k-gon anchored at the farthest-from-centroid point."""
    if not 4 <= k <= c.size:
        raise BadK(f"k must lie in [4, {c.size}], got {k}")
    fracs = np.mod(c.anchor + np.arange(k) / k, 1.0)
    return KGon(evaluate_many(c, fracs), fracs, ARCLENGTH)


def read_contour(path: str | Path) -> Contour:
    """Read an ``x,y``-per-line contour file (comments ``#``, blanks skipped)."""
    path = Path(path)
    if not path.exists():
        raise InputError(f"no such contour file: {path}")
    pts = []
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            xs, ys = line.split(",")
            pts.append(complex(float(xs), float(ys)))
        except ValueError:
            raise InputError(f"{path}:{lineno}: expected 'x,y', got {line!r}") from None
    if not pts:
        raise InputError(f"{path}: no points found")
    return ingest(np.array(pts))


def write_contour(path: str | Path, c: Curve) -> None:
    pts = _as_points(c)
    lines = [f"{float(z.real)!r},{float(z.imag)!r}" for z in pts]
    Path(path).write_text("\n".join(lines) + "\n")
