"""Contour features and ordinary least squares with inference.

Three cheap features summarize a contour: the turning integral, the
perimeter, and the number of curvature sign changes.  Linear models fitted
on them predict each sampling bound; backward elimination keeps only
predictors significant at a chosen level, the intercept always included.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy import stats
from scipy.linalg import solve_triangular

from .curvature import curvature_profile
from .errors import MissingFeature, RankDeficient, TooFewRows
from .geometry import Contour

#: Predictor names in canonical order; elimination ties drop the later one.
CANONICAL_TERMS = ("total_abs_curvature", "length", "sign_changes")
INTERCEPT = "intercept"


@dataclass(frozen=True)
class FeatureRow:
    contour_id: str
    total_abs_curvature: float
    length: float
    sign_changes: int
    category: str = ""


@dataclass(frozen=True)
class TermStats:
    name: str
    estimate: float
    se: float
    t: float
    p: float


@dataclass(frozen=True)
class FittedModel:
    response: str
    terms: tuple[TermStats, ...]
    rmse: float
    f_stat: float | None
    f_pvalue: float | None
    n: int
    df_resid: int

    def to_dict(self) -> dict:
        return {
            "response": self.response,
            "terms": [
                {"name": t.name, "estimate": t.estimate, "se": t.se, "t": t.t, "p": t.p}
                for t in self.terms
            ],
            "rmse": self.rmse,
            "f": self.f_stat,
            "f_p": self.f_pvalue,
            "n": self.n,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FittedModel":
        terms = tuple(
            TermStats(t["name"], t["estimate"], t["se"], t["t"], t["p"])
            for t in d["terms"]
        )
        n = int(d["n"])
        return cls(d["response"], terms, d["rmse"], d.get("f"), d.get("f_p"),
                   n, n - len(terms))


def extract_features(c: Contour, contour_id: str = "", category: str = "") -> FeatureRow:
    """Assemble the three predictors from one (smoothed) contour."""
    profile = curvature_profile(c)
    return FeatureRow(
        contour_id=contour_id,
        total_abs_curvature=profile.total_absolute,
        length=c.arc_table.total_length,
        sign_changes=profile.sign_changes,
        category=category,
    )


def design_matrix(rows: Sequence[FeatureRow], terms: Sequence[str]) -> np.ndarray:
    """n x (1 + len(terms)) design with a leading intercept column."""
    cols = [np.ones(len(rows))]
    for name in terms:
        cols.append(np.array([getattr(r, name) for r in rows], dtype=float))
    return np.column_stack(cols)


def _ols_core(x: np.ndarray, y: np.ndarray):
    """QR-based OLS; returns (beta, se, rmse, fitted, df_resid)."""
    n, p1 = x.shape
    if n < p1 + 2:
        raise TooFewRows(f"need at least {p1 + 2} rows for {p1} coefficients, got {n}")
    q, r = np.linalg.qr(x)
    diag = np.abs(np.diag(r))
    if diag.min() <= 1e-10 * diag.max():
        raise RankDeficient("design matrix is numerically singular")
    beta = solve_triangular(r, q.T @ y)
    fitted = x @ beta
    resid = y - fitted
    df_resid = n - p1
    sigma_sq = float(resid @ resid) / df_resid
    r_inv = solve_triangular(r, np.eye(p1))
    se = np.sqrt(sigma_sq * np.sum(r_inv**2, axis=1))
    return beta, se, math.sqrt(sigma_sq), fitted, df_resid


def fit_ols(
    rows: Sequence[FeatureRow],
    responses: Sequence[float],
    terms: Sequence[str] = CANONICAL_TERMS,
    response_name: str = "k",
) -> FittedModel:
    """OLS fit of the response on the named predictors plus an intercept.

    Standard errors come from the unscaled inverse Gram diagonal times the
    residual variance; t statistics use the Student-t with n - p degrees of
    freedom, and the overall F compares the model to the intercept alone.
    """
    terms = list(terms)
    y = np.asarray(responses, dtype=float)
    if len(y) != len(rows):
        raise ValueError("responses and rows differ in length")
    x = design_matrix(rows, terms)
    beta, se, rmse, fitted, df_resid = _ols_core(x, y)
    t_vals = beta / se
    p_vals = 2.0 * stats.t.sf(np.abs(t_vals), df_resid)
    stats_list = [TermStats(INTERCEPT, float(beta[0]), float(se[0]),
                            float(t_vals[0]), float(p_vals[0]))]
    stats_list += [
        TermStats(name, float(beta[i + 1]), float(se[i + 1]),
                  float(t_vals[i + 1]), float(p_vals[i + 1]))
        for i, name in enumerate(terms)
    ]
    n_pred = len(terms)
    if n_pred > 0:
        ssr = float(np.sum((fitted - y.mean()) ** 2))
        f_stat = (ssr / n_pred) / rmse**2
        f_p = float(stats.f.sf(f_stat, n_pred, df_resid))
    else:
        f_stat, f_p = None, None
    return FittedModel(response_name, tuple(stats_list), rmse, f_stat, f_p,
                       len(y), df_resid)


def backward_select(
    rows: Sequence[FeatureRow],
    responses: Sequence[float],
    alpha: float = 0.05,
    response_name: str = "k",
) -> FittedModel:
    """Drop the least significant predictor until all p-values are <= alpha.

    Starts from the full canonical term set; the intercept is never dropped.
    Equal p-values eliminate the term that comes later in canonical order.
    """
    terms = list(CANONICAL_TERMS)
    while True:
        model = fit_ols(rows, responses, terms, response_name)
        candidates = [t for t in model.terms[1:] if t.p > alpha]
        if not candidates:
            return model
        worst_p = max(t.p for t in candidates)
        worst = max(
            (t for t in candidates if t.p == worst_p),
            key=lambda t: CANONICAL_TERMS.index(t.name),
        )
        terms.remove(worst.name)


def predict(model: FittedModel, row: FeatureRow | Mapping[str, float]) -> tuple[float, int]:
    """Linear prediction plus its ceiling, since the response is a count.

    Rounding up is the safe direction for a lower bound.
    """
    value = 0.0
    for term in model.terms:
        if term.name == INTERCEPT:
            value += term.estimate
            continue
        if isinstance(row, Mapping):
            if term.name not in row:
                raise MissingFeature(f"row lacks feature {term.name!r}")
            feat = row[term.name]
        else:
            try:
                feat = getattr(row, term.name)
            except AttributeError:
                raise MissingFeature(f"row lacks feature {term.name!r}") from None
        value += term.estimate * float(feat)
    return value, math.ceil(value)
