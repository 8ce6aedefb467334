"""Command-line front end: a reproducible batch pipeline over contour files.

Subcommands:
  synth     write the bundled synthetic dataset (contours + manifest)
  smooth    moving-average smoothing, written to sibling files
  bounds    minimal-k report per contour (CSV), optional error curves
  features  per-contour predictor table (CSV)
  fit       regression models for each bound response (JSON)
  predict   apply saved models to a feature table (CSV)
  validate  random-split or leave-one-category-out cross-validation (JSON)

Every command is deterministic given its inputs, flags and seed.  Exit
codes: 0 success, 2 input error, 3 numeric failure; failures print one
"error: <kind>: <message>" line on stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import synthetic
from .bounds import BOUND_KINDS, bound_report, error_curve
from .errors import InputError, KgonError
from .geometry import read_contour, write_contour
from .regression import (CANONICAL_TERMS, FeatureRow, FittedModel,
                         backward_select, extract_features, predict)
from .smoothing import SmootherConfig, smooth
from .validation import CVConfig, cv_8020, cv_leave_category

BOUND_COLUMNS = ("kLA", "kDA", "kLC", "kDC")


def _fmt(value) -> str:
    # float() first: numpy scalars subclass float but repr differently.
    return repr(float(value)) if isinstance(value, float) else str(value)


def _resolve_workers(threads: int) -> int:
    return max(1, os.cpu_count() or 1) if threads == 0 else max(1, threads)


def _category_from_name(name: str) -> str:
    return name.rstrip("0123456789").rstrip("_-") or name


def load_entries(input_path: str, kimia: str | None = None):
    """Resolve --input (manifest CSV, directory, or single file) to entries.

    Returns (contour_id, path, category) triples in deterministic order.
    """
    if kimia:
        root = Path(kimia)
        if not root.is_dir():
            raise InputError(f"not a directory: {root}")
        files = sorted(root.glob("*.txt")) + sorted(root.glob("*.csv"))
        if not files:
            raise InputError(f"no contour files in {root}")
        return [(f.stem, f, _category_from_name(f.stem)) for f in files]
    path = Path(input_path)
    if path.is_dir():
        files = sorted(path.glob("*.txt"))
        if not files:
            raise InputError(f"no contour files in {path}")
        return [(f.stem, f, _category_from_name(f.stem)) for f in files]
    if not path.exists():
        raise InputError(f"no such file: {path}")
    if path.suffix.lower() == ".csv":
        entries = []
        with open(path, newline="") as fh:
            for row in csv.DictReader(fh):
                try:
                    cid, rel = row["contour_id"], row["path"]
                except KeyError:
                    raise InputError(
                        f"{path}: manifest needs contour_id,path[,category] columns"
                    ) from None
                entries.append((cid, path.parent / rel, row.get("category", "")))
        if not entries:
            raise InputError(f"{path}: empty manifest")
        return entries
    return [(path.stem, path, _category_from_name(path.stem))]


def _read_table(path: str, required: tuple[str, ...]) -> list[dict]:
    p = Path(path)
    if not p.exists():
        raise InputError(f"no such file: {p}")
    with open(p, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise InputError(f"{p}: empty table")
    missing = [c for c in required if c not in rows[0]]
    if missing:
        raise InputError(f"{p}: missing columns {missing}")
    return rows


def _write_csv(path: str | None, header: list[str], rows: list[list]) -> None:
    target = open(path, "w", newline="") if path else sys.stdout
    try:
        writer = csv.writer(target, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    finally:
        if path:
            target.close()


def _smoothed_contour(path: Path, args):
    c = read_contour(path)
    if args.smooth_passes > 0:
        c = smooth(c, SmootherConfig(args.smooth_window, args.smooth_passes))
    return c


def cmd_synth(args) -> int:
    manifest = synthetic.write_dataset(args.out, args.seed)
    print(manifest)
    return 0


def cmd_smooth(args) -> int:
    entries = load_entries(args.input, args.kimia)
    out_rows = []
    for cid, path, category in entries:
        c = _smoothed_contour(path, args)
        if args.out_dir:
            out_path = Path(args.out_dir) / f"{cid}.txt"
            out_path.parent.mkdir(parents=True, exist_ok=True)
        else:
            out_path = path.with_name(f"{path.stem}{args.suffix}{path.suffix}")
        write_contour(out_path, c)
        out_rows.append([cid, str(out_path), category])
    if args.out_manifest:
        _write_csv(args.out_manifest, ["contour_id", "path", "category"], out_rows)
    print(f"smoothed {len(out_rows)} contour(s)")
    return 0


def _bounds_worker(task):
    (cid, path, vargs) = task
    ns = argparse.Namespace(**vargs)
    c = _smoothed_contour(Path(path), ns)
    report = bound_report(
        c, ns.e, contour_id=cid,
        criteria=ns.criteria, parameterizations=ns.params,
        accelerated=ns.accelerated,
    )
    curves = []
    if ns.want_curves:
        k_max = c.size if ns.curve_kmax == 0 else min(ns.curve_kmax, c.size)
        for criterion, parameterization in sorted(set(BOUND_KINDS.values())):
            if criterion in ns.criteria and parameterization in ns.params:
                curves.append(error_curve(c, criterion, parameterization, k_max))
    return report, curves


def _fan_out(tasks, worker, threads: int):
    workers = _resolve_workers(threads)
    if workers == 1 or len(tasks) <= 1:
        return [worker(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker, tasks))


def cmd_bounds(args) -> int:
    entries = load_entries(args.input, args.kimia)
    criteria = ("length", "distance") if args.criterion == "both" else (args.criterion,)
    params = ("arclength", "curvature") if args.param == "both" else (args.param,)
    vargs = dict(
        smooth_passes=args.smooth_passes, smooth_window=args.smooth_window,
        e=args.e, criteria=criteria, params=params, accelerated=args.accelerated,
        want_curves=bool(args.curve_out or args.plot_dir), curve_kmax=args.curve_kmax,
    )
    results = _fan_out([(cid, str(p), vargs) for cid, p, _ in entries],
                       _bounds_worker, args.threads)
    rows, curve_rows, failures = [], [], []
    for (cid, _, _), (report, curves) in zip(entries, results):
        row = [cid, report.size, args.e]
        for name in BOUND_COLUMNS:
            value = report.get(name)
            if name in report.failures:
                row.append("NA")
            else:
                row.append("" if value is None else value)
        rows.append(row)
        failures.extend(f"{cid}/{name}: {msg}" for name, msg in report.failures.items())
        for curve in curves:
            curve_rows.extend(
                [cid, curve.criterion, curve.parameterization, k, err]
                for k, err in curve.values
            )
        if args.plot_dir and curves:
            from .plots import save_error_curves

            plot_dir = Path(args.plot_dir)
            plot_dir.mkdir(parents=True, exist_ok=True)
            save_error_curves(curves, cid, args.e, plot_dir / f"curves_{cid}.png")
    _write_csv(args.out, ["id", "K", "E", *BOUND_COLUMNS], rows)
    if args.curve_out:
        _write_csv(args.curve_out,
                   ["id", "criterion", "parameterization", "k", "relative_error"],
                   curve_rows)
    if failures:
        print(f"error: numeric: {failures[0]}", file=sys.stderr)
        return 3
    return 0


def _features_worker(task):
    (cid, path, vargs) = task
    ns = argparse.Namespace(**vargs)
    c = _smoothed_contour(Path(path), ns)
    row = extract_features(c, contour_id=cid)
    return [cid, row.total_abs_curvature, row.length, row.sign_changes, c.size]


def cmd_features(args) -> int:
    entries = load_entries(args.input, args.kimia)
    vargs = dict(smooth_passes=args.smooth_passes, smooth_window=args.smooth_window)
    rows = _fan_out([(cid, str(p), vargs) for cid, p, _ in entries],
                    _features_worker, args.threads)
    _write_csv(args.out, ["id", "total_abs_curvature", "length", "sign_changes", "K"],
               rows)
    return 0


def _join_features_bounds(features_path: str, bounds_path: str):
    feats = _read_table(features_path,
                        ("id", "total_abs_curvature", "length", "sign_changes"))
    bnds = _read_table(bounds_path, ("id",))
    by_id = {r["id"]: r for r in bnds}
    rows, responses = [], {name: [] for name in BOUND_COLUMNS if name in bnds[0]}
    for f in feats:
        b = by_id.get(f["id"])
        if b is None:
            continue
        rows.append(FeatureRow(
            contour_id=f["id"],
            total_abs_curvature=float(f["total_abs_curvature"]),
            length=float(f["length"]),
            sign_changes=int(f["sign_changes"]),
        ))
        for name in responses:
            value = b.get(name, "")
            responses[name].append(float(value) if value not in ("", "NA") else None)
    if not rows:
        raise InputError("features and bounds tables share no ids")
    return rows, responses


def cmd_fit(args) -> int:
    rows, responses = _join_features_bounds(args.features, args.bounds)
    models = []
    for name, values in responses.items():
        pairs = [(r, v) for r, v in zip(rows, values) if v is not None]
        if not pairs:
            continue
        kept_rows = [p[0] for p in pairs]
        y = [p[1] for p in pairs]
        models.append(backward_select(kept_rows, y, args.alpha, name).to_dict())
    Path(args.out).write_text(json.dumps(models, indent=2) + "\n")
    print(f"fitted {len(models)} model(s) -> {args.out}")
    return 0


def cmd_predict(args) -> int:
    models_path = Path(args.models)
    if not models_path.exists():
        raise InputError(f"no such file: {models_path}")
    models = [FittedModel.from_dict(d) for d in json.loads(models_path.read_text())]
    feats = _read_table(args.features,
                        ("id", "total_abs_curvature", "length", "sign_changes"))
    rows = []
    for f in feats:
        row = {
            "total_abs_curvature": float(f["total_abs_curvature"]),
            "length": float(f["length"]),
            "sign_changes": float(f["sign_changes"]),
        }
        for model in models:
            value, ceiled = predict(model, row)
            rows.append([f["id"], model.response, value, ceiled])
    _write_csv(args.out, ["id", "response", "predicted", "predicted_ceil"], rows)
    return 0


def cmd_validate(args) -> int:
    rows, responses = _join_features_bounds(args.features, args.bounds)
    manifest = _read_table(args.manifest, ("contour_id", "category"))
    cat_by_id = {r["contour_id"]: r["category"] for r in manifest}
    missing = [r.contour_id for r in rows if r.contour_id not in cat_by_id]
    if missing:
        raise InputError(f"manifest lacks categories for ids: {missing[:5]}")
    keep = [i for i, _ in enumerate(rows)
            if all(responses[name][i] is not None for name in responses)]
    rows = [rows[i] for i in keep]
    bounds = {name: [responses[name][i] for i in keep] for name in responses}
    categories = [cat_by_id[r.contour_id] for r in rows]
    cfg = CVConfig(replicates=args.replicates, test_fraction=args.test_fraction,
                   seed=args.seed, alpha=args.alpha,
                   reselect_terms=args.reselect_terms)
    workers = _resolve_workers(args.threads)
    out: dict = {"mode": args.mode, "replicates": cfg.replicates, "seed": cfg.seed}
    if args.mode == "split8020":
        summaries = cv_8020(rows, bounds, cfg, workers=workers)
        out["responses"] = {k: v.to_dict() for k, v in summaries.items()}
        if args.plot_dir:
            _plot_8020(summaries, args.plot_dir)
    else:
        by_cat = cv_leave_category(rows, bounds, categories, cfg, workers=workers)
        out["categories"] = {
            cat: {k: v.to_dict() for k, v in per.items()}
            for cat, per in by_cat.items()
        }
        if args.plot_dir:
            _plot_loco(by_cat, categories, args.plot_dir)
    Path(args.out).write_text(json.dumps(out, indent=2) + "\n")
    print(f"wrote {args.out}")
    return 0


def _plot_8020(summaries, plot_dir) -> None:
    from .plots import save_rmse_histogram

    out = Path(plot_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, summary in summaries.items():
        save_rmse_histogram(summary, out / f"rmse_{name}.png")


def _plot_loco(by_cat, categories, plot_dir) -> None:
    from .plots import save_rmse_histogram

    out = Path(plot_dir)
    out.mkdir(parents=True, exist_ok=True)
    sizes = {cat: categories.count(cat) for cat in by_cat}
    for size in sorted(set(sizes.values())):
        cats = [c for c, s in sizes.items() if s == size]
        for name in next(iter(by_cat.values())):
            markers = {c: by_cat[c][name].observed_rmse for c in cats}
            save_rmse_histogram(by_cat[cats[0]][name],
                                out / f"loco_rmse_{name}_size{size}.png",
                                markers=markers)


def _add_smoothing_flags(p) -> None:
    p.add_argument("--smooth-passes", type=int, default=4,
                   help="moving-average passes applied before analysis (default 4)")
    p.add_argument("--smooth-window", type=int, default=3,
                   help="odd window size (default 3)")


def _add_input_flags(p) -> None:
    p.add_argument("--input", required=True,
                   help="manifest CSV, directory of .txt contours, or one file")
    p.add_argument("--kimia", default=None, metavar="DIR",
                   help="ingest a directory of real contour files instead of --input")
    p.add_argument("--threads", type=int, default=1,
                   help="worker processes; 0 = all cores (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kgon",
        description="Polygon approximation bounds for closed planar contours.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write the bundled synthetic dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("smooth", help="smooth contours to sibling files")
    _add_input_flags(p)
    _add_smoothing_flags(p)
    p.add_argument("--suffix", default="_smoothed")
    p.add_argument("--out-dir", default=None)
    p.add_argument("--out-manifest", default=None)
    p.set_defaults(func=cmd_smooth)

    p = sub.add_parser("bounds", help="minimal-k report per contour")
    _add_input_flags(p)
    _add_smoothing_flags(p)
    p.add_argument("--e", type=float, default=0.005, help="error threshold")
    p.add_argument("--criterion", choices=["length", "distance", "both"],
                   default="both")
    p.add_argument("--param", choices=["arclength", "curvature", "both"],
                   default="both")
    p.add_argument("--accelerated", action="store_true",
                   help="jump-and-bisect search (self-verifying)")
    p.add_argument("--out", default=None, help="bounds CSV (default stdout)")
    p.add_argument("--curve-out", default=None, help="full error-curve CSV")
    p.add_argument("--curve-kmax", type=int, default=0,
                   help="cap curve k (0 = contour size)")
    p.add_argument("--plot-dir", default=None, help="render error-curve PNGs here")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("features", help="per-contour predictor table")
    _add_input_flags(p)
    _add_smoothing_flags(p)
    p.add_argument("--out", default=None, help="features CSV (default stdout)")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("fit", help="fit bound-prediction models")
    p.add_argument("--features", required=True)
    p.add_argument("--bounds", required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--out", default="models.json")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("predict", help="apply saved models to features")
    p.add_argument("--models", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--out", default=None, help="predictions CSV (default stdout)")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("validate", help="cross-validate the fitted models")
    p.add_argument("--features", required=True)
    p.add_argument("--bounds", required=True)
    p.add_argument("--manifest", required=True,
                   help="CSV with contour_id,category columns")
    p.add_argument("--mode", choices=["split8020", "loco"], default="split8020")
    p.add_argument("--replicates", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--test-fraction", type=float, default=0.2)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--reselect-terms", action="store_true",
                   help="re-run term selection inside every replicate")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default="summary.json")
    p.add_argument("--plot-dir", default=None, help="render RMSE histogram PNGs here")
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: input: {exc}", file=sys.stderr)
        return 2
    except KgonError as exc:
        print(f"error: numeric: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
