"""Dataset loading, min-max normalization and deterministic splitting.

CSV input is RFC-4180 style: header row required, UTF-8, '.' decimal
separator. The label column is picked by name (exact header match wins)
or by zero-based index. Every non-label cell must parse as a real number;
missing-value handling and categorical encoding are out of scope.
"""

import csv
from dataclasses import dataclass

import numpy as np

from .errors import DataError


@dataclass
class Dataset:
    """Immutable-by-convention instance matrix plus labels and metadata.

    instances: (N, M) float array.
    labels: length-N object array of class identifiers (opaque strings).
    feature_names: length-M list of column names.
    class_ids: the C distinct classes, ordered by first appearance.
    """

    instances: np.ndarray
    labels: np.ndarray
    feature_names: list
    class_ids: list

    def __post_init__(self):
        self.instances = np.asarray(self.instances, dtype=float)
        self.labels = np.asarray(self.labels, dtype=object)
        if self.instances.ndim != 2:
            raise DataError("instances must be a 2-D matrix")
        n, m = self.instances.shape
        if n < 2:
            raise DataError(f"need at least 2 instances, got {n}")
        if m < 2:
            raise DataError(f"need at least 2 features, got {m}")
        if len(self.labels) != n:
            raise DataError(f"label count {len(self.labels)} != instance count {n}")
        if len(self.feature_names) != m:
            raise DataError(f"feature name count {len(self.feature_names)} != column count {m}")
        if len(self.class_ids) < 2:
            raise DataError(f"need at least 2 classes, got {len(self.class_ids)}")
        if len(set(self.class_ids)) != len(self.class_ids):
            raise DataError("class_ids contains duplicates")
        unknown = set(self.labels.tolist()) - set(self.class_ids)
        if unknown:
            raise DataError(f"labels not in class_ids: {sorted(map(str, unknown))}")

    @property
    def n_instances(self):
        return self.instances.shape[0]

    @property
    def n_features(self):
        return self.instances.shape[1]

    @property
    def n_classes(self):
        return len(self.class_ids)

    def label_codes(self):
        """Labels as integer codes into class_ids."""
        lut = {c: i for i, c in enumerate(self.class_ids)}
        return np.array([lut[v] for v in self.labels.tolist()], dtype=int)

    def select_rows(self, indices):
        """New Dataset restricted to the given rows; class_ids stay canonical."""
        idx = np.asarray(indices, dtype=int)
        return Dataset(
            instances=self.instances[idx],
            labels=self.labels[idx],
            feature_names=list(self.feature_names),
            class_ids=list(self.class_ids),
        )


@dataclass
class SplitSpec:
    """Parameters of the train/test split and the cross-validation folds."""

    train_fraction: float = 0.75
    fold_count: int = 5
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise DataError(f"train_fraction must be in (0, 1), got {self.train_fraction}")
        if self.fold_count < 2:
            raise DataError(f"fold_count must be >= 2, got {self.fold_count}")
        if self.seed < 0:
            raise DataError("seed must be a non-negative integer")


def load_csv(path, label_column):
    """Read a CSV file into a Dataset.

    label_column is a header name or a zero-based column index; an exact
    header-name match takes precedence over index interpretation.
    """
    try:
        fh = open(path, "r", encoding="utf-8", newline="")
    except FileNotFoundError:
        raise DataError(f"input file not found: {path}") from None
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"empty file (no header row): {path}") from None
        label_idx = _resolve_label_column(header, label_column)
        feature_names = [h for i, h in enumerate(header) if i != label_idx]
        if len(feature_names) < 2:
            raise DataError("need at least 2 feature columns")

        rows = []
        labels = []
        for data_row, cells in enumerate(reader, start=1):
            if not cells:
                continue  # tolerate trailing blank lines
            if len(cells) != len(header):
                raise DataError(
                    f"data row {data_row}: expected {len(header)} cells, got {len(cells)}"
                )
            values = []
            for col, cell in enumerate(cells):
                if col == label_idx:
                    continue
                try:
                    values.append(float(cell))
                except ValueError:
                    raise DataError(
                        f"cannot parse cell as a number at data row {data_row}, "
                        f"column '{header[col]}'"
                    ) from None
            rows.append(values)
            labels.append(cells[label_idx])

    if len(rows) < 2:
        raise DataError(f"need at least 2 data rows, got {len(rows)}")
    class_ids = list(dict.fromkeys(labels))  # first-appearance order
    if len(class_ids) < 2:
        raise DataError("fewer than 2 classes in the label column")
    return Dataset(
        instances=np.array(rows, dtype=float),
        labels=np.array(labels, dtype=object),
        feature_names=feature_names,
        class_ids=class_ids,
    )


def _resolve_label_column(header, label_column):
    if isinstance(label_column, str) and label_column in header:
        return header.index(label_column)
    try:
        idx = int(label_column)
    except (TypeError, ValueError):
        idx = -1
    if 0 <= idx < len(header):
        return idx
    raise DataError(f"label column '{label_column}' not found in header {header}")


def minmax_normalize(d):
    """Rescale every column to [0, 1]; constant columns map to all zeros.

    Idempotent on non-constant columns: a second pass divides by span 1
    and subtracts min 0, leaving values bit-identical.
    """
    x = d.instances
    mins = x.min(axis=0)
    spans = x.max(axis=0) - mins
    safe = np.where(spans > 0.0, spans, 1.0)
    out = (x - mins) / safe
    out[:, spans == 0.0] = 0.0
    return Dataset(
        instances=out,
        labels=d.labels,
        feature_names=list(d.feature_names),
        class_ids=list(d.class_ids),
    )


def split_train_test(d, s):
    """Disjoint random row split; train gets round(train_fraction * N) rows."""
    n = d.n_instances
    train_n = int(round(s.train_fraction * n))
    if train_n < 1 or n - train_n < 1:
        raise DataError(
            f"split leaves an empty side: N={n}, train_fraction={s.train_fraction}"
        )
    perm = np.random.default_rng(s.seed).permutation(n)
    train_idx = np.sort(perm[:train_n])
    test_idx = np.sort(perm[train_n:])
    return d.select_rows(train_idx), d.select_rows(test_idx)


def make_folds(d, s):
    """fold_count (train_part, validation_part) pairs.

    Validation parts are disjoint and cover the dataset; identical seeds
    reproduce bit-identical index sets.
    """
    n = d.n_instances
    if s.fold_count > n:
        raise DataError(f"fold_count {s.fold_count} exceeds instance count {n}")
    perm = np.random.default_rng(s.seed).permutation(n)
    chunks = np.array_split(perm, s.fold_count)
    folds = []
    for i, chunk in enumerate(chunks):
        val_idx = np.sort(chunk)
        train_idx = np.sort(np.concatenate([c for j, c in enumerate(chunks) if j != i]))
        folds.append((d.select_rows(train_idx), d.select_rows(val_idx)))
    return folds
