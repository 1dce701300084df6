"""End-to-end feature selection: separability matrix -> embedding ->
per-k clustering -> cross-validated validity curve -> knee -> subset.

Fold loop: each fold builds its own separability matrix and embedding on
the train part, clusters it for every k, and scores the chosen medoid
features against the validation part. Out-of-sample projection of a
fold's embedding is ill-defined, so validation scoring happens in the
raw separability space of the validation part: its matrix is rebuilt,
every feature is assigned to the nearest medoid feature there, and the
validity index is evaluated on that geometry. The strategy is isolated
in validation_mss() so an alternative reading is a one-function change.

Seeds: the final full-train embedding uses the base seed; fold f uses
base + 1 + f. Per-(stage, k) clustering seeds are derived through
SeedSequence so runs are reproducible and folds stay independent.
"""

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dataio import SplitSpec, make_folds
from .errors import DataError
from .kmedoids import ClusteringResult, pam_cluster
from .knee import Curve, chord_difference_argmax, kneedle
from .separability import build_feature_space
from .tsne import Embedding, TsneConfig, embed
from .validity import mss, silhouette, simplified_silhouette


@dataclass
class SelectionConfig:
    """Knobs of the selection pipeline; echoed verbatim into reports."""

    seed: int = 0
    perplexity: float = 30.0
    tsne_iterations: int = 1000
    output_dim: int = 2
    fold_count: int = 5
    k_max: int | None = None  # cap on the clustering sweep; None = all features
    knee_sensitivity: float = 1.0
    smoothing_window: int = 0
    threads: int = 1

    def __post_init__(self):
        if self.fold_count < 2:
            raise DataError("fold_count must be >= 2")
        if self.k_max is not None and self.k_max < 4:
            raise DataError("k_max must be >= 4 (knee detection needs 3 curve points)")
        if self.threads < 1:
            raise DataError("threads must be >= 1")

    def tsne_config(self, seed):
        return TsneConfig(
            perplexity=self.perplexity,
            iterations=self.tsne_iterations,
            output_dim=self.output_dim,
            seed=seed,
        )


@dataclass
class MSSCurve:
    """Per-fold and fold-averaged validity values over the k sweep.

    Undefined entries (every cluster a singleton) are NaN; averaged takes
    the mean over the folds that are defined at each k.
    """

    ks: np.ndarray
    fold_values: np.ndarray  # (fold_count, len(ks))
    averaged: np.ndarray

    def defined(self):
        keep = np.isfinite(self.averaged)
        return self.ks[keep], self.averaged[keep]


@dataclass
class SelectionResult:
    """Chosen subset size and members, plus everything needed to reproduce."""

    k_min: int
    selected_features: list
    selected_names: list
    embedding: Embedding
    curve: MSSCurve
    seed: int
    config: SelectionConfig
    knee_source: str = "kneedle"


def _derived_seed(base, stage, k):
    # stage 0 = final full-train clustering, stage f+1 = fold f
    return int(np.random.SeedSequence([int(base), int(stage), int(k)]).generate_state(1)[0])


def nearest_medoid_clustering(points, medoid_ids):
    """Assign every point to its nearest medoid point (ties: lowest medoid
    index); the scoring geometry for validation folds."""
    pts = np.asarray(points, dtype=float)
    medoids = np.sort(np.asarray(medoid_ids, dtype=int))
    diffs = pts[:, None, :] - pts[medoids][None, :, :]
    dm = np.sqrt(np.sum(diffs ** 2, axis=2))
    assignment = np.argmin(dm, axis=1)
    cost = float(dm[np.arange(pts.shape[0]), assignment].sum())
    return ClusteringResult(medoids=medoids, assignment=assignment, cost=cost)


def validation_mss(z_val, medoid_features):
    """Validity of train-fold medoid features against a validation fold,
    computed in the validation part's raw separability space."""
    clustering = nearest_medoid_clustering(z_val.z, medoid_features)
    report = mss(z_val.z, clustering)
    return np.nan if report.aggregate is None else report.aggregate


def _k_sweep(ks, worker, threads):
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(worker, ks))
    return [worker(k) for k in ks]


def mss_curve_cv(train, cfg):
    """Fold-averaged validity curve over k in [2, k_max].

    Every fold embeds its own train part (fold-derived t-SNE seed),
    clusters it for each k, and scores the medoid features on the
    validation part; folds undefined at some k are skipped in the
    average at that k.
    """
    m = train.n_features
    k_hi = min(cfg.k_max or m, m)
    ks = np.arange(2, k_hi + 1)
    if len(ks) < 3:
        raise DataError(f"k sweep [2, {k_hi}] too short for knee detection")

    folds = make_folds(train, SplitSpec(fold_count=cfg.fold_count, seed=cfg.seed))
    fold_values = np.full((cfg.fold_count, len(ks)), np.nan)
    for f, (tr_part, val_part) in enumerate(folds):
        z_tr = build_feature_space(tr_part)
        z_val = build_feature_space(val_part)
        emb = embed(z_tr, cfg.tsne_config(seed=cfg.seed + 1 + f))

        def score(k, _coords=emb.coords, _zv=z_val, _stage=f + 1):
            clustering = pam_cluster(_coords, int(k), _derived_seed(cfg.seed, _stage, k))
            return validation_mss(_zv, clustering.medoids)

        fold_values[f] = _k_sweep(ks, score, cfg.threads)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)  # all-NaN columns
        averaged = np.nanmean(fold_values, axis=0)
    return MSSCurve(ks=ks, fold_values=fold_values, averaged=averaged)


def select_features(train, cfg):
    """Full selection: CV curve -> knee -> final clustering at k_min on the
    whole training set; the selected features are the final medoids."""
    curve = mss_curve_cv(train, cfg)
    ks_def, avg_def = curve.defined()
    if len(ks_def) < 3:
        raise DataError("too few defined curve points for knee detection")
    knee_curve = Curve(
        xs=ks_def.astype(float),
        ys=avg_def,
        smoothing_window=cfg.smoothing_window,
        sensitivity=cfg.knee_sensitivity,
    )
    knee_x = kneedle(knee_curve)
    knee_source = "kneedle"
    if knee_x is None:
        knee_x = chord_difference_argmax(knee_curve)
        knee_source = "chord_fallback"
        warnings.warn(
            "no knee detected on the validity curve; "
            "falling back to the chord-difference maximum"
        )
    k_min = int(round(knee_x))

    embedding, clustering = select_at_k(train, k_min, cfg)
    selected = clustering.medoids.tolist()
    return SelectionResult(
        k_min=k_min,
        selected_features=selected,
        selected_names=[train.feature_names[j] for j in selected],
        embedding=embedding,
        curve=curve,
        seed=cfg.seed,
        config=cfg,
        knee_source=knee_source,
    )


def select_at_k(train, k, cfg):
    """One-shot subset of a known size: embed the full training set and
    cluster at k. Returns (embedding, clustering); the medoids are the
    selected feature indices."""
    z = build_feature_space(train)
    embedding = embed(z, cfg.tsne_config(seed=cfg.seed))
    clustering = pam_cluster(embedding.coords, k, _derived_seed(cfg.seed, 0, k))
    return embedding, clustering


@dataclass
class IndexCurves:
    """Silhouette / simplified / mean-simplified values per k on one embedding."""

    ks: np.ndarray
    silhouette: np.ndarray
    simplified: np.ndarray
    mean_simplified: np.ndarray
    clusterings: list = field(default_factory=list)


def index_curves(coords, ks, base_seed, threads=1):
    """All three validity indices across a k sweep of one embedding; the
    material for side-by-side curve plots and correlation checks."""
    ks = np.asarray(ks, dtype=int)

    def one(k):
        clustering = pam_cluster(coords, int(k), _derived_seed(base_seed, 0, k))
        sil = silhouette(coords, clustering).aggregate
        ss = simplified_silhouette(coords, clustering).aggregate
        ms = mss(coords, clustering).aggregate
        return clustering, sil, ss, (np.nan if ms is None else ms)

    rows = _k_sweep(ks, one, threads)
    return IndexCurves(
        ks=ks,
        silhouette=np.array([r[1] for r in rows]),
        simplified=np.array([r[2] for r in rows]),
        mean_simplified=np.array([r[3] for r in rows]),
        clusterings=[r[0] for r in rows],
    )
