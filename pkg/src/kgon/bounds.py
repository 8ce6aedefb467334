"""Minimal vertex counts meeting length and shape-distance thresholds.

For a contour with K points and a threshold E, four bounds are reported:
the smallest k whose k-gon keeps the relative length deficit within E
(length criterion, non-strict) or keeps the normalized shape distance
below E (distance criterion, strict), under equal-spacing or equal-turning
sampling.  The reference search is a plain scan from k = 4 upward; error
curves are not provably monotone, so the jump-then-bisect accelerator is
opt-in and verifies its answer.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .curvature import CurvatureProfile, curvature_profile, resample_curvature
from .errors import BadK, FlatContour, NoFeasibleK
from .geometry import ARCLENGTH, CURVATURE, Contour, KGon, resample_arclength
from .shapemetric import SQRT2, curve_preshape, rho_preshapes

LENGTH = "length"
DISTANCE = "distance"

#: bound name -> (criterion, parameterization)
BOUND_KINDS = {
    "kLA": (LENGTH, ARCLENGTH),
    "kDA": (DISTANCE, ARCLENGTH),
    "kLC": (LENGTH, CURVATURE),
    "kDC": (DISTANCE, CURVATURE),
}


@dataclass(frozen=True)
class ErrorCurve:
    criterion: str
    parameterization: str
    values: list[tuple[int, float]]


@dataclass
class BoundReport:
    contour_id: str
    threshold: float
    size: int
    k_la: int | None = None
    k_da: int | None = None
    k_lc: int | None = None
    k_dc: int | None = None
    failures: dict[str, str] = field(default_factory=dict)

    _ATTRS = {"kLA": "k_la", "kDA": "k_da", "kLC": "k_lc", "kDC": "k_dc"}

    def get(self, name: str) -> int | None:
        return getattr(self, self._ATTRS[name])

    def set(self, name: str, value: int | None) -> None:
        setattr(self, self._ATTRS[name], value)


def length_error(c: Contour, g: KGon) -> float:
    """Relative perimeter deficit (L_K - L_k) / L_K, clamped at 0."""
    total = c.arc_table.total_length
    return max(0.0, (total - g.perimeter) / total)


def distance_error(c: Contour, g: KGon) -> float:
    """Shape distance between contour and k-gon, normalized to [0, 1]."""
    m = c.size
    rho = rho_preshapes(curve_preshape(c, m), curve_preshape(g, m))
    return min(max(rho / SQRT2, 0.0), 1.0)


class _Evaluator:
    """Caches the per-contour work shared across the k scan."""

    def __init__(self, c: Contour, profile: CurvatureProfile | None = None):
        self.c = c
        self.m = c.size
        self._profile = profile
        self._reference = None
        self._kgons: dict[tuple[str, int], KGon] = {}

    @property
    def profile(self) -> CurvatureProfile:
        if self._profile is None:
            self._profile = curvature_profile(self.c)
        return self._profile

    def kgon(self, parameterization: str, k: int) -> KGon:
        key = (parameterization, k)
        if key not in self._kgons:
            if parameterization == ARCLENGTH:
                g = resample_arclength(self.c, k)
            elif parameterization == CURVATURE:
                g = resample_curvature(self.c, self.profile, k)
            else:
                raise ValueError(f"unknown parameterization: {parameterization!r}")
            self._kgons[key] = g
        return self._kgons[key]

    def error(self, criterion: str, parameterization: str, k: int) -> float:
        g = self.kgon(parameterization, k)
        if criterion == LENGTH:
            return length_error(self.c, g)
        if criterion != DISTANCE:
            raise ValueError(f"unknown criterion: {criterion!r}")
        if self._reference is None:
            self._reference = curve_preshape(self.c, self.m)
        rho = rho_preshapes(self._reference, curve_preshape(g, self.m))
        return min(max(rho / SQRT2, 0.0), 1.0)


def _meets(criterion: str, err: float, e: float) -> bool:
    return err <= e if criterion == LENGTH else err < e


def find_bound(
    c: Contour,
    criterion: str,
    parameterization: str,
    e: float,
    profile: CurvatureProfile | None = None,
    accelerated: bool = False,
    _evaluator: _Evaluator | None = None,
) -> int:
    """Smallest k in [4, K] meeting the threshold, by scan from k = 4.

    ``accelerated`` probes geometrically growing k, bisects the bracket and
    re-checks that k - 1 fails; any anomaly falls back to the plain scan.
    """
    if not 0.0 < e < 1.0:
        raise ValueError(f"threshold must lie in (0, 1), got {e}")
    ev = _evaluator or _Evaluator(c, profile)
    big_k = c.size

    def err(k: int) -> float:
        return ev.error(criterion, parameterization, k)

    if accelerated:
        k = 4
        while k < big_k and not _meets(criterion, err(k), e):
            k = min(2 * k, big_k)
        if _meets(criterion, err(k), e):
            lo, hi = max(4, k // 2), k
            if not _meets(criterion, err(lo), e):
                while hi - lo > 1:
                    mid = (lo + hi) // 2
                    if _meets(criterion, err(mid), e):
                        hi = mid
                    else:
                        lo = mid
                if hi == 4 or not _meets(criterion, err(hi - 1), e):
                    return hi
            elif lo == 4:
                return 4
        # Bracketing failed or the curve dips non-monotonically: be exact.

    for k in range(4, big_k + 1):
        if _meets(criterion, err(k), e):
            return k
    raise NoFeasibleK(
        f"no k <= {big_k} meets {criterion}/{parameterization} threshold {e}"
    )


def bound_report(
    c: Contour,
    e: float,
    contour_id: str = "",
    criteria: tuple[str, ...] = (LENGTH, DISTANCE),
    parameterizations: tuple[str, ...] = (ARCLENGTH, CURVATURE),
    accelerated: bool = False,
) -> BoundReport:
    """All requested bounds for one contour, sharing the curvature profile.

    Per-bound failures (NoFeasibleK, FlatContour) are recorded in
    ``failures`` instead of aborting the remaining bounds.
    """
    report = BoundReport(contour_id, e, c.size)
    ev = _Evaluator(c)
    for name, (criterion, parameterization) in BOUND_KINDS.items():
        if criterion not in criteria or parameterization not in parameterizations:
            continue
        try:
            report.set(name, find_bound(
                c, criterion, parameterization, e,
                accelerated=accelerated, _evaluator=ev,
            ))
        except (NoFeasibleK, FlatContour) as exc:
            report.failures[name] = str(exc)
    return report


def error_curve(
    c: Contour,
    criterion: str,
    parameterization: str,
    k_max: int,
    profile: CurvatureProfile | None = None,
) -> ErrorCurve:
    """Relative error for every k in [4, k_max]."""
    if not 4 <= k_max <= c.size:
        raise BadK(f"k_max must lie in [4, {c.size}], got {k_max}")
    ev = _Evaluator(c, profile)
    values = [(k, ev.error(criterion, parameterization, k)) for k in range(4, k_max + 1)]
    return ErrorCurve(criterion, parameterization, values)
