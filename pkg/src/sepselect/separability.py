"""Per-feature class-pair separability and the stacked feature-space matrix.

For a feature i and a class pair (c, c~), both modeled as Gaussians with
class-conditional mean and variance, the Bhattacharyya distance is

    B = (mu_c - mu_c~)^2 / (4 (s2_c + s2_c~))
        + 0.5 * ln((s2_c + s2_c~) / (2 sqrt(s2_c * s2_c~)))

and the bounded Jeffries-Matusita form is JM = 2 (1 - exp(-B)), in [0, 2).
Stacking each feature's row-major-reshaped C x C JM matrix yields the
M x C^2 feature-space matrix in which features are embedded and clustered.

All operations are pure; the per-feature computation is vectorized (each
feature's row depends only on that feature's statistics), so results are
order-deterministic.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DataError

# Variance clamp: B divides by s2_c + s2_c~ and takes ln of a variance
# ratio, so singleton or constant classes need a strictly positive floor.
VAR_FLOOR = 1e-10


@dataclass
class ClassStats:
    """Per-feature, per-class mean and biased variance (clamped below)."""

    mean: np.ndarray      # (M, C)
    variance: np.ndarray  # (M, C), every entry >= VAR_FLOOR


@dataclass
class SeparabilityMatrix:
    """M x C^2 matrix; row i is feature i's JM matrix reshaped row-major."""

    z: np.ndarray

    @property
    def n_features(self):
        return self.z.shape[0]


def class_stats(d, var_floor=VAR_FLOOR):
    """Class-conditional mean and clamped biased variance for every feature."""
    codes = d.label_codes()
    m, c = d.n_features, d.n_classes
    mean = np.empty((m, c))
    var = np.empty((m, c))
    for ci in range(c):
        mask = codes == ci
        if not mask.any():
            raise DataError(f"class '{d.class_ids[ci]}' has no samples")
        sub = d.instances[mask]
        mean[:, ci] = sub.mean(axis=0)
        var[:, ci] = sub.var(axis=0)  # biased (divide by class count)
    return ClassStats(mean=mean, variance=np.maximum(var, var_floor))


def _jm_from_stats(mean, variance):
    # mean, variance: (..., C); returns (..., C, C)
    mu_a = mean[..., :, None]
    mu_b = mean[..., None, :]
    s2_a = variance[..., :, None]
    s2_b = variance[..., None, :]
    s2_sum = s2_a + s2_b
    bhat = (mu_a - mu_b) ** 2 / (4.0 * s2_sum) + 0.5 * np.log(
        s2_sum / (2.0 * np.sqrt(s2_a * s2_b))
    )
    jm = 2.0 * (1.0 - np.exp(-bhat))
    # identical distributions give B = 0 exactly; clear fp residue on the diagonal
    diag = np.arange(mean.shape[-1])
    jm[..., diag, diag] = 0.0
    return jm


def jm_matrix(stats, feature):
    """Symmetric C x C JM matrix for one feature; zero diagonal, entries in [0, 2)."""
    if not 0 <= feature < stats.mean.shape[0]:
        raise DataError(f"feature index {feature} out of range")
    return _jm_from_stats(stats.mean[feature], stats.variance[feature])


def build_feature_space(d, var_floor=VAR_FLOOR):
    """Stack every feature's reshaped JM matrix into an M x C^2 matrix."""
    stats = class_stats(d, var_floor=var_floor)
    jm = _jm_from_stats(stats.mean, stats.variance)  # (M, C, C)
    m, c = d.n_features, d.n_classes
    return SeparabilityMatrix(z=jm.reshape(m, c * c))


def pair_column_names(class_ids):
    """Header names for the C^2 columns of the feature-space matrix, row-major."""
    return [f"pair_{a}_{b}" for a in class_ids for b in class_ids]
