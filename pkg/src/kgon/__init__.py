"""Polygon approximation of closed planar contours.

Given a digitized closed outline, this package resamples it into k-gons
under equal-spacing or equal-turning rules, measures the approximation
error in perimeter and in similarity-shape distance, finds the smallest k
meeting a threshold for each combination, and fits regression models that
predict those bounds from three cheap contour features.
"""

from .bounds import (BOUND_KINDS, DISTANCE, LENGTH, BoundReport, ErrorCurve,
                     bound_report, distance_error, error_curve, find_bound,
                     length_error)
from .curvature import CurvatureProfile, curvature_profile, resample_curvature
from .errors import (BadK, DegenerateContour, DegenerateDerivative,
                     FlatContour, InputError, KgonError, MissingFeature,
                     NoFeasibleK, RankDeficient, SingletonCategory,
                     TooFewPoints, TooFewRows, WindowTooLarge, ZeroNorm)
from .geometry import (ARCLENGTH, CURVATURE, ArcTable, Contour, KGon,
                       anchor_fraction, arc_table, centroid, evaluate,
                       evaluate_many, ingest, read_contour, resample_arclength,
                       signed_area, write_contour)
from .regression import (CANONICAL_TERMS, FeatureRow, FittedModel, TermStats,
                         backward_select, extract_features, fit_ols, predict)
from .shapemetric import (SQRT2, Preshape, ShapeDistance, curve_preshape,
                          preshape, rho_preshapes, vw_distance)
from .smoothing import SmootherConfig, smooth
from .validation import (CVConfig, CVSummary, Histogram, cv_8020,
                         cv_leave_category)

__version__ = "0.1.0"
