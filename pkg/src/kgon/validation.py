"""Cross-validation of the bound-prediction models.

Two protocols: repeated random 80:20 splits, and leave-one-category-out
with null RMSE distributions built from random test sets of the held-out
category's size.  Every replicate derives its generator from the run seed
plus the replicate index, so results are bit-identical for a given seed no
matter how the replicates are distributed over workers.

Residuals here are prediction minus observation: a positive residual means
the model overshot, which is the safe direction for a lower bound.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy import stats

from .errors import RankDeficient, SingletonCategory, TooFewRows
from .regression import CANONICAL_TERMS, FeatureRow, backward_select, design_matrix

RESPONSES = ("kLA", "kDA", "kLC", "kDC")


@dataclass(frozen=True)
class CVConfig:
    replicates: int = 10_000
    test_fraction: float = 0.2
    seed: int = 0
    alpha: float = 0.05
    #: re-run backward selection inside every replicate instead of freezing
    #: the full-data term set and re-estimating coefficients only.
    reselect_terms: bool = False

    def __post_init__(self):
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if not 0.0 < self.test_fraction < 1.0:
            raise ValueError("test_fraction must lie in (0, 1)")


@dataclass(frozen=True)
class Histogram:
    bin_edges: np.ndarray
    counts: np.ndarray

    def to_dict(self) -> dict:
        return {"bin_edges": self.bin_edges.tolist(), "counts": self.counts.tolist()}


@dataclass
class CVSummary:
    response: str
    rmse_samples: np.ndarray
    mean: float
    minimum: float
    maximum: float
    histogram: Histogram
    positive_residual_pct: float
    residual_counts: tuple[int, int, int]  # (positive, negative, zero)
    observed_rmse: float | None = None
    upper_tail_prob: float | None = None

    def to_dict(self, include_samples: bool = False) -> dict:
        d = {
            "response": self.response,
            "replicates": int(len(self.rmse_samples)),
            "mean": self.mean,
            "min": self.minimum,
            "max": self.maximum,
            "histogram": self.histogram.to_dict(),
            "positive_residual_pct": self.positive_residual_pct,
            "residual_counts": list(self.residual_counts),
        }
        if self.observed_rmse is not None:
            d["observed_rmse"] = self.observed_rmse
        if self.upper_tail_prob is not None:
            d["upper_tail_prob"] = self.upper_tail_prob
        if include_samples:
            d["rmse_samples"] = self.rmse_samples.tolist()
        return d


class RunningStats:
    """Streaming count/mean/min/max with compensated summation."""

    def __init__(self):
        self.count = 0
        self.minimum = math.inf
        self.maximum = -math.inf
        self._sum = 0.0
        self._comp = 0.0

    def update(self, values: np.ndarray) -> None:
        for v in np.asarray(values, dtype=float):
            t = self._sum + v
            if abs(self._sum) >= abs(v):
                self._comp += (self._sum - t) + v
            else:
                self._comp += (v - t) + self._sum
            self._sum = t
        self.count += len(values)
        if len(values):
            self.minimum = min(self.minimum, float(values.min()))
            self.maximum = max(self.maximum, float(values.max()))

    @property
    def mean(self) -> float:
        return (self._sum + self._comp) / self.count


def fd_histogram(samples: np.ndarray, probe: int = 1000) -> Histogram:
    """Fixed-width histogram; width is Freedman-Diaconis on the first probe."""
    head = samples[: min(probe, len(samples))]
    q25, q75 = np.percentile(head, [25.0, 75.0])
    width = 2.0 * (q75 - q25) / len(head) ** (1.0 / 3.0)
    lo = float(samples.min())
    hi = float(samples.max())
    if width <= 0.0 or hi <= lo:
        edges = np.array([lo, hi if hi > lo else lo + 1e-12])
        return Histogram(edges, np.array([len(samples)]))
    nbins = int(math.ceil((hi - lo) / width))
    edges = lo + width * np.arange(nbins + 1)
    counts, _ = np.histogram(samples, bins=edges)
    return Histogram(edges, counts)


def _select_cols(x: np.ndarray, y: np.ndarray, alpha: float) -> tuple[int, ...]:
    """Backward elimination on design columns; column 0 (intercept) kept."""
    cols = list(range(x.shape[1]))
    while len(cols) > 1:
        sub = x[:, cols]
        q, r = np.linalg.qr(sub)
        diag = np.abs(np.diag(r))
        if diag.min() <= 1e-10 * diag.max():
            raise RankDeficient("design matrix is numerically singular")
        beta = np.linalg.solve(r, q.T @ y)
        resid = y - sub @ beta
        df = len(y) - len(cols)
        sigma_sq = float(resid @ resid) / df
        r_inv = np.linalg.solve(r, np.eye(len(cols)))
        se = np.sqrt(sigma_sq * np.sum(r_inv**2, axis=1))
        p = 2.0 * stats.t.sf(np.abs(beta / se), df)
        worst = None
        for pos in range(1, len(cols)):
            if p[pos] > alpha and (worst is None or p[pos] >= p[worst]):
                worst = pos
        if worst is None:
            return tuple(cols)
        cols.pop(worst)
    return tuple(cols)


def _run_chunk(args):
    (x, ys, cols_list, seed_prefix, n_test, start, stop, reselect, alpha) = args
    n = x.shape[0]
    nresp = ys.shape[1]
    rmses = np.empty((stop - start, nresp))
    pos = np.zeros(nresp, dtype=np.int64)
    neg = np.zeros(nresp, dtype=np.int64)
    zero = np.zeros(nresp, dtype=np.int64)
    for i in range(start, stop):
        rng = np.random.default_rng(np.random.SeedSequence(seed_prefix + (i,)))
        perm = rng.permutation(n)
        test, train = perm[:n_test], perm[n_test:]
        for j in range(nresp):
            y = ys[:, j]
            cols = cols_list[j]
            if reselect:
                cols = _select_cols(x[train], y[train], alpha)
            beta, *_ = np.linalg.lstsq(x[train][:, cols], y[train], rcond=None)
            resid = x[test][:, cols] @ beta - y[test]
            rmses[i - start, j] = math.sqrt(float(resid @ resid) / n_test)
            pos[j] += int(np.count_nonzero(resid > 0))
            neg[j] += int(np.count_nonzero(resid < 0))
            zero[j] += int(np.count_nonzero(resid == 0))
    return start, rmses, pos, neg, zero


def _run_replicates(x, ys, cols_list, seed_prefix, n_test, replicates, reselect,
                    alpha, workers):
    bounds_ = np.linspace(0, replicates, max(1, workers) + 1).astype(int)
    chunks = [
        (x, ys, cols_list, seed_prefix, n_test, int(a), int(b), reselect, alpha)
        for a, b in zip(bounds_[:-1], bounds_[1:])
        if b > a
    ]
    if len(chunks) == 1:
        results = [_run_chunk(chunks[0])]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_chunk, chunks))
    results.sort(key=lambda r: r[0])
    rmses = np.concatenate([r[1] for r in results])
    pos = sum(r[2] for r in results)
    neg = sum(r[3] for r in results)
    zero = sum(r[4] for r in results)
    return rmses, pos, neg, zero


def _summarize(response, samples, counts, observed=None, upper_tail=None) -> CVSummary:
    run = RunningStats()
    run.update(samples)
    pos, neg, zero = (int(v) for v in counts)
    total = pos + neg + zero
    return CVSummary(
        response=response,
        rmse_samples=samples,
        mean=run.mean,
        minimum=run.minimum,
        maximum=run.maximum,
        histogram=fd_histogram(samples),
        positive_residual_pct=100.0 * pos / total if total else 0.0,
        residual_counts=(pos, neg, zero),
        observed_rmse=observed,
        upper_tail_prob=upper_tail,
    )


def _frozen_cols(rows, ys, names, cfg) -> list[tuple[int, ...]]:
    cols_list = []
    for j, name in enumerate(names):
        model = backward_select(rows, ys[:, j], cfg.alpha, name)
        cols_list.append(tuple(
            [0] + [1 + CANONICAL_TERMS.index(t.name) for t in model.terms[1:]]
        ))
    return cols_list


def cv_8020(
    rows: Sequence[FeatureRow],
    bounds: Mapping[str, Sequence[float]],
    cfg: CVConfig = CVConfig(),
    workers: int = 1,
) -> dict[str, CVSummary]:
    """Repeated random-split validation, one shared partition per replicate.

    Term sets are frozen from a full-data backward selection and the
    coefficients re-estimated on each training split, unless
    ``cfg.reselect_terms`` asks for selection inside every replicate.
    """
    names = list(bounds)
    n = len(rows)
    if n < 10:
        raise TooFewRows(f"need at least 10 rows, got {n}")
    n_test = max(1, round(n * cfg.test_fraction))
    if n - n_test < len(CANONICAL_TERMS) + 3:
        raise TooFewRows("training split too small to fit the full model")
    x = design_matrix(rows, CANONICAL_TERMS)
    ys = np.column_stack([np.asarray(bounds[name], dtype=float) for name in names])
    cols_list = _frozen_cols(rows, ys, names, cfg) if not cfg.reselect_terms \
        else [tuple(range(x.shape[1]))] * len(names)
    rmses, pos, neg, zero = _run_replicates(
        x, ys, cols_list, (cfg.seed,), n_test, cfg.replicates,
        cfg.reselect_terms, cfg.alpha, workers,
    )
    return {
        name: _summarize(name, rmses[:, j], (pos[j], neg[j], zero[j]))
        for j, name in enumerate(names)
    }


def cv_leave_category(
    rows: Sequence[FeatureRow],
    bounds: Mapping[str, Sequence[float]],
    categories: Sequence[str],
    cfg: CVConfig = CVConfig(),
    workers: int = 1,
) -> dict[str, dict[str, CVSummary]]:
    """Hold out each category; compare its RMSE to size-matched null draws.

    The null distribution for a category re-runs the random-split protocol
    with test sets of that category's size; categories of equal size share
    one distribution.  ``upper_tail_prob`` is the fraction of null RMSEs
    strictly above the held-out value.
    """
    n = len(rows)
    if len(categories) != n:
        raise ValueError("categories and rows differ in length")
    order = list(dict.fromkeys(categories))
    if len(order) < 2:
        raise TooFewRows("need at least 2 categories")
    names = list(bounds)
    x = design_matrix(rows, CANONICAL_TERMS)
    ys = np.column_stack([np.asarray(bounds[name], dtype=float) for name in names])
    cols_list = _frozen_cols(rows, ys, names, cfg) if not cfg.reselect_terms \
        else [tuple(range(x.shape[1]))] * len(names)
    cat_arr = np.asarray(categories)
    sizes = {cat: int(np.count_nonzero(cat_arr == cat)) for cat in order}
    min_train = len(CANONICAL_TERMS) + 3
    for cat, size in sizes.items():
        if n - size < min_train:
            raise SingletonCategory(
                f"holding out {cat!r} leaves only {n - size} training rows"
            )

    null_rmses = {}
    for size in sorted(set(sizes.values())):
        rmses, *_ = _run_replicates(
            x, ys, cols_list, (cfg.seed, size), size, cfg.replicates,
            cfg.reselect_terms, cfg.alpha, workers,
        )
        null_rmses[size] = rmses

    out: dict[str, dict[str, CVSummary]] = {}
    for cat in order:
        test = np.flatnonzero(cat_arr == cat)
        train = np.flatnonzero(cat_arr != cat)
        per_response = {}
        for j, name in enumerate(names):
            y = ys[:, j]
            cols = cols_list[j]
            if cfg.reselect_terms:
                cols = _select_cols(x[train], y[train], cfg.alpha)
            beta, *_ = np.linalg.lstsq(x[train][:, cols], y[train], rcond=None)
            resid = x[test][:, cols] @ beta - y[test]
            observed = math.sqrt(float(resid @ resid) / len(test))
            counts = (
                int(np.count_nonzero(resid > 0)),
                int(np.count_nonzero(resid < 0)),
                int(np.count_nonzero(resid == 0)),
            )
            nulls = null_rmses[sizes[cat]][:, j]
            per_response[name] = _summarize(
                name, nulls, counts, observed=observed,
                upper_tail=float(np.count_nonzero(nulls > observed) / len(nulls)),
            )
        out[cat] = per_response
    return out
