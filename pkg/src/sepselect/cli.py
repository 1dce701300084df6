"""Command-line surface: selection, method comparison, baselines,
evaluation and embedding export.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
Environment overrides: SEPSELECT_OUTPUT_DIR (default output directory),
SEPSELECT_THREADS (default worker count). The report file is fully
deterministic for a fixed config and seed; wall-clock timings go to
timings.txt and stdout only.
"""

import argparse
import os
import sys
import time
from dataclasses import dataclass, replace

import numpy as np

from .baselines import cfs_select, fisher_scores, random_select, relieff_weights
from .classify import evaluate
from .dataio import SplitSpec, load_csv, minmax_normalize, split_train_test
from .errors import DataError, NumericalError
from .pipeline import SelectionConfig, index_curves, select_at_k, select_features
from .separability import build_feature_space, pair_column_names
from .svgplot import LineChart, ScatterChart
from .tsne import embed

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3

_BASELINES = ("relieff", "fisher", "cfs", "random")


@dataclass
class RunConfig:
    """Everything one run needs; echoed into the report for reproducibility."""

    input_path: str
    label_column: str
    seed: int
    perplexity: float
    tsne_iterations: int
    fold_count: int
    k_max: int | None
    knee_sensitivity: float
    smoothing_window: int
    n_neighbors: int
    output_dir: str
    threads: int

    def selection_config(self):
        return SelectionConfig(
            seed=self.seed,
            perplexity=self.perplexity,
            tsne_iterations=self.tsne_iterations,
            fold_count=self.fold_count,
            k_max=self.k_max,
            knee_sensitivity=self.knee_sensitivity,
            smoothing_window=self.smoothing_window,
            threads=self.threads,
        )


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _env_output_dir():
    return os.environ.get("SEPSELECT_OUTPUT_DIR", "sepselect-out")


def _env_threads():
    return int(os.environ.get("SEPSELECT_THREADS", "1"))


def build_parser():
    parser = _Parser(
        prog="sepselect",
        description=(
            "Automatic feature subset selection: embeds features by their "
            "class-pair separability, clusters the embedding for every k, and "
            "picks the knee of the cross-validated validity curve."
        ),
        epilog=(
            "Environment: SEPSELECT_OUTPUT_DIR overrides the default output "
            "directory, SEPSELECT_THREADS the default worker count."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_selection=True):
        p.add_argument("--input", required=True, help="CSV file (header row required)")
        p.add_argument("--label", required=True, help="label column name or zero-based index")
        p.add_argument("--seed", type=int, required=True, help="base seed for all randomness")
        p.add_argument("--output-dir", default=None, help="artifact directory")
        if with_selection:
            p.add_argument("--perplexity", type=float, default=30.0)
            p.add_argument("--tsne-iterations", type=int, default=1000)
            p.add_argument("--folds", type=int, default=5)
            p.add_argument("--k-max", type=int, default=None, help="cap the clustering sweep")
            p.add_argument("--knee-sensitivity", type=float, default=1.0)
            p.add_argument("--smoothing-window", type=int, default=0)
        p.add_argument("--neighbors", type=int, default=5, help="KNN neighbor count")
        p.add_argument("--threads", type=int, default=None, help="worker threads")

    p_select = sub.add_parser("select", help="run the full selection pipeline")
    common(p_select)
    p_select.add_argument("--plots", action="store_true", help="emit SVG charts")
    p_select.add_argument(
        "--index-curves",
        action="store_true",
        help="also compute silhouette/simplified/mean-simplified curves on the final embedding",
    )
    p_select.set_defaults(func=cmd_select)

    p_compare = sub.add_parser(
        "compare", help="selection vs baseline filters at the same subset size"
    )
    common(p_compare)
    p_compare.add_argument("--repetitions", type=int, default=10)
    p_compare.add_argument("--relieff-neighbors", type=int, default=10)
    p_compare.set_defaults(func=cmd_compare)

    p_base = sub.add_parser("baseline", help="run one baseline filter at a given k")
    common(p_base, with_selection=False)
    p_base.add_argument("--method", required=True, choices=_BASELINES)
    p_base.add_argument("--k", type=int, required=True)
    p_base.add_argument("--relieff-neighbors", type=int, default=10)
    p_base.set_defaults(func=cmd_baseline)

    p_eval = sub.add_parser("evaluate", help="KNN-evaluate a feature subset")
    common(p_eval, with_selection=False)
    p_eval.add_argument(
        "--features",
        required=True,
        help="comma-separated feature indices or names, or 'all'",
    )
    p_eval.add_argument("--train-fraction", type=float, default=0.75)
    p_eval.set_defaults(func=cmd_evaluate)

    p_embed = sub.add_parser("embed-only", help="export the feature embedding")
    common(p_embed)
    p_embed.add_argument(
        "--export-z", action="store_true", help="also export the separability matrix"
    )
    p_embed.set_defaults(func=cmd_embed_only)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def _run_config(args):
    return RunConfig(
        input_path=args.input,
        label_column=args.label,
        seed=args.seed,
        perplexity=getattr(args, "perplexity", 30.0),
        tsne_iterations=getattr(args, "tsne_iterations", 1000),
        fold_count=getattr(args, "folds", 5),
        k_max=getattr(args, "k_max", None),
        knee_sensitivity=getattr(args, "knee_sensitivity", 1.0),
        smoothing_window=getattr(args, "smoothing_window", 0),
        n_neighbors=args.neighbors,
        output_dir=args.output_dir if args.output_dir is not None else _env_output_dir(),
        threads=args.threads if args.threads is not None else _env_threads(),
    )


def _load_normalized(cfg):
    return minmax_normalize(load_csv(cfg.input_path, cfg.label_column))


def _outdir(cfg):
    os.makedirs(cfg.output_dir, exist_ok=True)
    return cfg.output_dir


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _config_echo(cfg):
    lines = [
        "config:",
        f"  input: {cfg.input_path}",
        f"  label_column: {cfg.label_column}",
        f"  seed: {cfg.seed}",
        f"  perplexity: {cfg.perplexity!r}",
        f"  tsne_iterations: {cfg.tsne_iterations}",
        f"  fold_count: {cfg.fold_count}",
        f"  k_max: {cfg.k_max if cfg.k_max is not None else 'none'}",
        f"  knee_sensitivity: {cfg.knee_sensitivity!r}",
        f"  smoothing_window: {cfg.smoothing_window}",
        f"  n_neighbors: {cfg.n_neighbors}",
        f"  threads: {cfg.threads}",
    ]
    return lines


def cmd_select(args):
    cfg = _run_config(args)
    data = _load_normalized(cfg)
    outdir = _outdir(cfg)

    t0 = time.perf_counter()
    result = select_features(data, cfg.selection_config())
    select_seconds = time.perf_counter() - t0

    lines = ["selection report", "================", ""]
    lines.extend(_config_echo(cfg))
    lines += [
        "",
        "result:",
        f"  k_min: {result.k_min}",
        f"  knee_source: {result.knee_source}",
        "",
        f"selected features ({result.k_min}):",
    ]
    for j, name in zip(result.selected_features, result.selected_names):
        lines.append(f"  {j} {name}")
    lines += ["", "averaged validity curve:"]
    for k, v in zip(result.curve.ks, result.curve.averaged):
        lines.append(f"  k={int(k)} {float(v)!r}")
    _write(os.path.join(outdir, "report.txt"), "\n".join(lines) + "\n")

    _write_curve_csv(os.path.join(outdir, "curve.csv"), result.curve)
    _write_embedding_csv(
        os.path.join(outdir, "embedding.csv"), data.feature_names, result.embedding.coords
    )
    _write(
        os.path.join(outdir, "timings.txt"),
        f"selection_seconds: {select_seconds!r}\n",
    )

    if args.index_curves:
        ks = result.curve.ks
        curves = index_curves(result.embedding.coords, ks, cfg.seed, threads=cfg.threads)
        _write_indices_csv(os.path.join(outdir, "indices.csv"), curves)
        if args.plots:
            chart = LineChart(title="validity indices", x_label="k", y_label="index")
            chart.add_series(ks, curves.silhouette, label="silhouette")
            chart.add_series(ks, curves.simplified, label="simplified")
            chart.add_series(ks, curves.mean_simplified, label="mean simplified")
            chart.add_vline(result.k_min, label=f"k={result.k_min}")
            chart.save(os.path.join(outdir, "indices.svg"))

    if args.plots:
        chart = LineChart(title="averaged validity curve", x_label="k", y_label="index")
        chart.add_series(result.curve.ks, result.curve.averaged, label="mean simplified")
        chart.add_vline(result.k_min, label=f"k={result.k_min}")
        chart.save(os.path.join(outdir, "curve.svg"))

        coords = result.embedding.coords
        scatter = ScatterChart(title="feature embedding")
        mask = np.zeros(len(coords), dtype=bool)
        mask[result.selected_features] = True
        scatter.add_points(coords[~mask, 0], coords[~mask, 1], label="features")
        scatter.add_points(
            coords[mask, 0], coords[mask, 1], label="selected", radius=5.0, filled=False
        )
        scatter.save(os.path.join(outdir, "embedding.svg"))

    print(f"k_min: {result.k_min} ({result.knee_source})")
    print("selected:", ", ".join(result.selected_names))
    print(f"selection took {select_seconds:.2f} s; report in {outdir}")
    return EXIT_OK


def _write_curve_csv(path, curve):
    fold_count = curve.fold_values.shape[0]
    header = "k,averaged," + ",".join(f"fold_{f}" for f in range(fold_count))
    rows = [header]
    for j, k in enumerate(curve.ks):
        cells = [str(int(k)), repr(float(curve.averaged[j]))]
        cells += [repr(float(v)) for v in curve.fold_values[:, j]]
        rows.append(",".join(cells))
    _write(path, "\n".join(rows) + "\n")


def _write_embedding_csv(path, feature_names, coords):
    dims = coords.shape[1]
    axis_names = ["x", "y"][:dims] if dims <= 2 else [f"c{i}" for i in range(dims)]
    rows = ["feature," + ",".join(axis_names)]
    for name, row in zip(feature_names, coords):
        rows.append(",".join([str(name)] + [repr(float(v)) for v in row]))
    _write(path, "\n".join(rows) + "\n")


def _write_indices_csv(path, curves):
    rows = ["k,silhouette,ss,mss"]
    for j, k in enumerate(curves.ks):
        rows.append(
            ",".join(
                [
                    str(int(k)),
                    repr(float(curves.silhouette[j])),
                    repr(float(curves.simplified[j])),
                    repr(float(curves.mean_simplified[j])),
                ]
            )
        )
    _write(path, "\n".join(rows) + "\n")


def _baseline_subset(method, train, k, seed, relieff_neighbors):
    if method == "relieff":
        return relieff_weights(train, neighbors=relieff_neighbors, seed=seed).top(k)
    if method == "fisher":
        return fisher_scores(train).top(k)
    if method == "cfs":
        return cfs_select(train, k)
    if method == "random":
        return random_select(train.n_features, k, seed)
    raise DataError(f"unknown baseline method '{method}'")


def cmd_baseline(args):
    cfg = _run_config(args)
    data = _load_normalized(cfg)
    subset = _baseline_subset(args.method, data, args.k, cfg.seed, args.relieff_neighbors)
    print(f"# method={args.method} k={args.k} seed={cfg.seed} input={cfg.input_path}")
    for j in subset:
        print(f"{j},{data.feature_names[j]}")
    if args.output_dir is not None:
        outdir = _outdir(cfg)
        rows = ["index,feature"] + [f"{j},{data.feature_names[j]}" for j in subset]
        _write(os.path.join(outdir, "subset.csv"), "\n".join(rows) + "\n")
    return EXIT_OK


def _parse_features(spec_text, data):
    if spec_text.strip() == "all":
        return list(range(data.n_features))
    subset = []
    name_lut = {n: i for i, n in enumerate(data.feature_names)}
    for token in spec_text.split(","):
        token = token.strip()
        if not token:
            continue
        if token in name_lut:
            subset.append(name_lut[token])
        else:
            try:
                subset.append(int(token))
            except ValueError:
                raise DataError(f"unknown feature '{token}'") from None
    if not subset:
        raise DataError("empty feature list")
    return subset


def cmd_evaluate(args):
    cfg = _run_config(args)
    data = _load_normalized(cfg)
    subset = _parse_features(args.features, data)
    spec = SplitSpec(train_fraction=args.train_fraction, seed=cfg.seed)
    train, test = split_train_test(data, spec)
    report = evaluate(train, test, subset, n_neighbors=cfg.n_neighbors)
    print(
        f"# input={cfg.input_path} seed={cfg.seed} "
        f"train_fraction={args.train_fraction} neighbors={cfg.n_neighbors} "
        f"features={args.features}"
    )
    print(f"subset size: {len(subset)}")
    print(f"accuracy: {report.accuracy:.4f}")
    print(f"balanced_f: {report.balanced_f:.4f}")
    print(f"predict_seconds: {report.predict_time:.6f}")
    return EXIT_OK


def cmd_embed_only(args):
    cfg = _run_config(args)
    data = _load_normalized(cfg)
    outdir = _outdir(cfg)
    z = build_feature_space(data)
    embedding = embed(z, cfg.selection_config().tsne_config(seed=cfg.seed))
    _write_embedding_csv(
        os.path.join(outdir, "embedding.csv"), data.feature_names, embedding.coords
    )
    if args.export_z:
        rows = ["feature," + ",".join(pair_column_names(data.class_ids))]
        for name, row in zip(data.feature_names, z.z):
            rows.append(",".join([str(name)] + [repr(float(v)) for v in row]))
        _write(os.path.join(outdir, "z.csv"), "\n".join(rows) + "\n")
    print(
        f"# input={cfg.input_path} seed={cfg.seed} perplexity={cfg.perplexity} "
        f"tsne_iterations={cfg.tsne_iterations}"
    )
    print(f"embedding written to {outdir}")
    return EXIT_OK


def cmd_compare(args):
    cfg = _run_config(args)
    data = _load_normalized(cfg)
    outdir = _outdir(cfg)
    reps = args.repetitions
    if reps < 1:
        raise DataError("repetitions must be >= 1")

    # k_min from a full CV selection on the first repetition's training split
    train0, _ = split_train_test(data, SplitSpec(seed=cfg.seed))
    sel_cfg = cfg.selection_config()
    result = select_features(train0, sel_cfg)
    k_min = result.k_min

    methods = ("sepselect",) + _BASELINES
    acc = {m: [] for m in methods}
    bal = {m: [] for m in methods}
    subset_times, all_times = [], []

    for r in range(reps):
        train, test = split_train_test(data, SplitSpec(seed=cfg.seed + r))
        rep_cfg = replace(sel_cfg, seed=cfg.seed + r)
        _, clustering = select_at_k(train, k_min, rep_cfg)
        subsets = {"sepselect": clustering.medoids.tolist()}
        for m in _BASELINES:
            subsets[m] = _baseline_subset(m, train, k_min, cfg.seed + r, args.relieff_neighbors)

        for m in methods:
            report = evaluate(train, test, subsets[m], n_neighbors=cfg.n_neighbors)
            acc[m].append(report.accuracy)
            bal[m].append(report.balanced_f)
            if m == "sepselect":
                subset_times.append(report.predict_time)
        full = evaluate(
            train, test, list(range(data.n_features)), n_neighbors=cfg.n_neighbors
        )
        all_times.append(full.predict_time)

    t_subset = float(np.mean(subset_times))
    t_all = float(np.mean(all_times))
    saving = 1.0 - t_subset / t_all if t_all > 0 else 0.0

    lines = [f"method comparison (k_min={k_min}, repetitions={reps})", ""]
    lines.extend(_config_echo(cfg))
    lines += [
        f"  repetitions: {reps}",
        f"  relieff_neighbors: {args.relieff_neighbors}",
        "",
        "mean metrics over repetitions:",
        f"  {'method':<10} {'accuracy':>9} {'balanced_f':>11}",
    ]
    for m in methods:
        lines.append(f"  {m:<10} {np.mean(acc[m]):>9.4f} {np.mean(bal[m]):>11.4f}")
    lines += [
        "",
        "prediction timing (mean seconds):",
        f"  subset (k={k_min}): {t_subset:.6f}",
        f"  all features ({data.n_features}): {t_all:.6f}",
        f"  estimated time saving: {100.0 * saving:.1f}%",
    ]
    text = "\n".join(lines) + "\n"
    _write(os.path.join(outdir, "compare.txt"), text)
    print(text, end="")
    return EXIT_OK
