"""K-medoids clustering with k-means++ seeding and PAM swap refinement.

Distances are Euclidean in the space the points live in (for this
package, the low-dimensional embedding). The spread-out seeding is the
first defence against bad local optima; a single best-swap run can still
stall on unstructured point clouds, so a few seeded restarts are taken
and the cheapest result kept.

Determinism contract: ties in nearest-medoid assignment go to the lowest
medoid index, the applied swap is the lexicographically first cost
minimizer, the medoid list is kept sorted ascending, and restart seeds
derive from the caller's seed.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DataError, NumericalError

_MAX_SWAP_ROUNDS = 300
_IMPROVEMENT_EPS = 1e-12


@dataclass
class ClusteringResult:
    """Medoid point indices (ascending), per-point cluster assignment, total cost.

    assignment[i] indexes into medoids; cost is the sum over points of the
    distance to their assigned medoid and is exactly recomputable from the
    inputs.
    """

    medoids: np.ndarray
    assignment: np.ndarray
    cost: float

    @property
    def k(self):
        return len(self.medoids)

    def cluster_sizes(self):
        return np.bincount(self.assignment, minlength=self.k)


def _as_matrix(points):
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    return pts


def _distance_matrix(points):
    sq = np.sum(points ** 2, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * points @ points.T
    np.maximum(d2, 0.0, out=d2)
    np.fill_diagonal(d2, 0.0)
    return np.sqrt(d2)


def kmeanspp_init(points, k, seed):
    """Distance-weighted seeding: first center uniform, then each next
    center sampled with probability proportional to the squared distance
    to the nearest already-chosen center. Returns indices in selection
    order; deterministic for a fixed seed.
    """
    pts = _as_matrix(points)
    m = pts.shape[0]
    if not 2 <= k <= m:
        raise DataError(f"k must be in [2, {m}], got {k}")
    rng = np.random.default_rng(seed)
    chosen = [int(rng.integers(m))]
    d2 = np.sum((pts - pts[chosen[0]]) ** 2, axis=1)
    for _ in range(k - 1):
        weights = d2.copy()
        weights[chosen] = 0.0
        total = weights.sum()
        if total > 0.0:
            nxt = int(rng.choice(m, p=weights / total))
        else:
            # every remaining point coincides with a chosen center
            remaining = np.setdiff1d(np.arange(m), chosen)
            nxt = int(rng.choice(remaining))
        chosen.append(nxt)
        d2 = np.minimum(d2, np.sum((pts - pts[nxt]) ** 2, axis=1))
    return np.array(chosen, dtype=int)


def _assign(dist_cols):
    # dist_cols: (M, k) distances to medoids in ascending-medoid order;
    # argmin takes the first minimum, i.e. the lowest medoid index on ties
    assignment = np.argmin(dist_cols, axis=1)
    nearest = dist_cols[np.arange(dist_cols.shape[0]), assignment]
    return assignment, nearest


def pam_cluster(points, k, seed, restarts=3, cost_log=None):
    """Greedy best-swap PAM, best of `restarts` seeded k-means++ starts.

    Each round evaluates every (medoid, non-medoid) exchange exactly and
    applies the single best strictly improving one; within a run the cost
    sequence is non-increasing and the result is a local optimum under
    single swaps. Restart seeds are derived from `seed`, the lowest-cost
    run wins (ties: earliest restart), so the whole call is deterministic.
    cost_log, when given, receives the winning run's per-round costs.
    """
    if restarts < 1:
        raise DataError("restarts must be >= 1")
    best, best_log = None, None
    for r in range(restarts):
        run_seed = int(np.random.SeedSequence([int(seed), r]).generate_state(1)[0])
        log = [] if cost_log is not None else None
        result = _pam_single(points, k, run_seed, log)
        if best is None or result.cost < best.cost - _IMPROVEMENT_EPS:
            best, best_log = result, log
    if cost_log is not None:
        cost_log.extend(best_log)
    return best


def _pam_single(points, k, seed, cost_log=None):
    pts = _as_matrix(points)
    m = pts.shape[0]
    if not 2 <= k <= m:
        raise DataError(f"k must be in [2, {m}], got {k}")
    if not np.all(np.isfinite(pts)):
        raise NumericalError("non-finite coordinates")

    dist = _distance_matrix(pts)
    medoids = np.sort(kmeanspp_init(pts, k, seed))

    for _ in range(_MAX_SWAP_ROUNDS):
        cols = dist[:, medoids]
        assignment, nearest = _assign(cols)
        # pin each medoid to its own cluster (ties with a coincident medoid
        # would otherwise send it to the lower index)
        positions = np.arange(k)
        assignment[medoids] = positions
        cost = float(nearest.sum())
        if cost_log is not None:
            cost_log.append(cost)
        if k == m:
            break

        order = np.argsort(cols, axis=1)
        second = cols[np.arange(m), order[:, 1]]
        candidates = np.setdiff1d(np.arange(m), medoids)
        # cost delta of swapping medoid at `pos` for candidate h, decomposed
        # so the work is O(M * |candidates|) per round instead of k times that:
        # points not assigned to `pos` contribute min(0, D_ih - nearest_i),
        # points assigned to it contribute min(D_ih, second_i) - nearest_i
        d_cand = dist[:, candidates]
        keep_term = np.minimum(d_cand - nearest[:, None], 0.0)
        lose_term = np.minimum(d_cand, second[:, None]) - nearest[:, None]
        base = keep_term.sum(axis=0)
        correction = lose_term - keep_term
        deltas = np.empty((k, len(candidates)))
        for pos in range(k):
            deltas[pos] = base + correction[assignment == pos].sum(axis=0)
        flat_best = int(np.argmin(deltas))  # first minimum = lowest pair index
        if float(deltas.flat[flat_best]) < -_IMPROVEMENT_EPS:
            pos, cand = divmod(flat_best, len(candidates))
            medoids = np.sort(np.append(np.delete(medoids, pos), candidates[cand]))
        else:
            break

    cols = dist[:, medoids]
    assignment, nearest = _assign(cols)
    assignment[medoids] = np.arange(k)
    return ClusteringResult(
        medoids=medoids, assignment=assignment, cost=float(nearest.sum())
    )
