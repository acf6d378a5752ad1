"""Group selection, projections, factual and counterfactual scoring.

Vocabulary used throughout: for a graph with probability vector p,
"confidence" is p[true label] and "classification probability" is p[1].
The factual score of a graphlet over a selected group is the Spearman
correlation between its frequency and the classification probability
(classifier output). The counterfactual score removes the graphlet in
frequency space, reruns the surrogate, and sums per-graph L1 distances
between the two probability vectors; the surrogate is the only
probability source on that path.

Frequency-space removal zeroes the target and every transitive container,
then redistributes each reduction downward level by level (5 to 4, then
4 to 3): the reduction of a graphlet is split over its node-deletion
dependents with softmax weights computed on the original frequencies,
subtracted and clamped at zero. Size groups that lost mass are
renormalized back onto the simplex, which keeps perturbed vectors inside
the distribution the surrogate was trained on; a flag disables it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .catalog import GraphletCatalog, N_GRAPHLETS
from ._validation import check_frequency_matrix

__all__ = [
    "SpearmanResult",
    "average_ranks",
    "spearman",
    "top_principal_component",
    "ProjectionPoint",
    "project",
    "Selection",
    "select_group",
    "point_in_polygon",
    "perturb",
    "redistribution_weights",
    "FactualScore",
    "CounterfactualScore",
    "factual_score",
    "counterfactual_score",
    "rank_factual",
    "rank_counterfactual",
    "rank_graphlets",
    "Histogram",
    "class_histograms",
    "Representatives",
    "representatives",
]


# --------------------------------------------------------------------------
# Rank correlation


def average_ranks(values) -> np.ndarray:
    """1-based ranks with ties assigned the mean of their positions."""
    v = np.asarray(values, dtype=float)
    order = np.argsort(v, kind="stable")
    ranks = np.empty(len(v), dtype=float)
    i = 0
    while i < len(v):
        j = i
        while j + 1 < len(v) and v[order[j + 1]] == v[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


@dataclass(frozen=True)
class SpearmanResult:
    rho: float
    degenerate: bool = False


def spearman(x, y) -> SpearmanResult:
    """Pearson correlation of average-ranked data.

    A constant argument has no rank variance; that case is reported as
    rho 0 with the degenerate flag set instead of NaN, so rankings built
    on top stay total.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("spearman expects two equally long 1-D vectors")
    if len(x) < 3:
        raise ValueError("spearman needs at least 3 observations")
    rx = average_ranks(x)
    ry = average_ranks(y)
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    sx = np.sqrt(np.sum(dx * dx))
    sy = np.sqrt(np.sum(dy * dy))
    if sx == 0.0 or sy == 0.0:
        return SpearmanResult(0.0, degenerate=True)
    return SpearmanResult(float(np.sum(dx * dy) / (sx * sy)), degenerate=False)


# --------------------------------------------------------------------------
# Projection


def top_principal_component(X, max_iter: int = 5000, tol: float = 1e-14, seed: int = 0):
    """First principal component by power iteration on centered data.

    Returns (component, scores); the component's largest-magnitude
    loading is made positive so the sign is reproducible.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 2:
        raise ValueError("projection needs at least 2 rows")
    Xc = X - X.mean(axis=0)
    rng = np.random.default_rng(seed)
    v = rng.normal(size=X.shape[1])
    v /= np.linalg.norm(v)
    for _ in range(max_iter):
        w = Xc.T @ (Xc @ v)
        norm = np.linalg.norm(w)
        if norm < 1e-30:
            # No variance at all: every point projects to zero.
            return np.zeros(X.shape[1]), np.zeros(X.shape[0])
        w /= norm
        if np.linalg.norm(w - v) < tol:
            v = w
            break
        v = w
    pivot = int(np.argmax(np.abs(v)))
    if v[pivot] < 0:
        v = -v
    return v, Xc @ v


@dataclass(frozen=True)
class ProjectionPoint:
    graph_id: int
    x: float
    y: float
    label: int
    confidence: float


def project(
    frequencies,
    embeddings,
    labels,
    confidences,
    swap_axes: bool = False,
    seed: int = 0,
) -> list[ProjectionPoint]:
    """Scatter coordinates: x is PC1 of the 29-D frequency vectors, y is
    PC1 of the graph embeddings (swap_axes flips the convention)."""
    F = check_frequency_matrix(frequencies)
    E = np.asarray(embeddings, dtype=float)
    labels = np.asarray(labels, dtype=np.int64)
    confidences = np.asarray(confidences, dtype=float)
    if not (len(F) == len(E) == len(labels) == len(confidences)):
        raise ValueError("frequencies, embeddings, labels and confidences must align")
    _, fx = top_principal_component(F, seed=seed)
    _, ey = top_principal_component(E, seed=seed)
    xs, ys = (ey, fx) if swap_axes else (fx, ey)
    return [
        ProjectionPoint(i, float(xs[i]), float(ys[i]), int(labels[i]), float(confidences[i]))
        for i in range(len(labels))
    ]


# --------------------------------------------------------------------------
# Selection


@dataclass(frozen=True)
class Selection:
    graph_ids: tuple[int, ...]
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(set(self.graph_ids)) != len(self.graph_ids):
            raise ValueError("selection contains duplicate graph ids")


def point_in_polygon(x: float, y: float, polygon) -> bool:
    """Ray-casting test; points on the boundary count as inside."""
    n = len(polygon)
    inside = False
    for i in range(n):
        x1, y1 = polygon[i]
        x2, y2 = polygon[(i + 1) % n]
        # On-segment check keeps hull vertices selected.
        cross = (x2 - x1) * (y - y1) - (y2 - y1) * (x - x1)
        if abs(cross) < 1e-12:
            if min(x1, x2) - 1e-12 <= x <= max(x1, x2) + 1e-12 and min(y1, y2) - 1e-12 <= y <= max(
                y1, y2
            ) + 1e-12:
                return True
        if (y1 > y) != (y2 > y):
            x_at = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if x_at > x:
                inside = not inside
    return inside


def select_group(
    points: list[ProjectionPoint],
    threshold: float | None = None,
    direction: str = "higher",
    polygon=None,
    brushes: dict[int, tuple[float, float]] | None = None,
) -> Selection:
    """Apply the three optional stages: confidence threshold, lasso
    polygon, then per-class confidence brushes.

    Brushes are the selection for their class: once any brush exists,
    only graphs whose class has a brush (and whose confidence lies in
    it) survive.
    """
    if direction not in ("higher", "lower"):
        raise ValueError(f"direction must be 'higher' or 'lower', got {direction!r}")
    if polygon is not None and len(polygon) < 3:
        raise ValueError("lasso polygon needs at least 3 vertices")
    kept = list(points)
    if threshold is not None:
        if direction == "higher":
            kept = [p for p in kept if p.confidence > threshold]
        else:
            kept = [p for p in kept if p.confidence < threshold]
    if polygon is not None:
        kept = [p for p in kept if point_in_polygon(p.x, p.y, polygon)]
    if brushes:
        norm = {int(c): (float(lo), float(hi)) for c, (lo, hi) in brushes.items()}
        kept = [
            p
            for p in kept
            if p.label in norm and norm[p.label][0] <= p.confidence <= norm[p.label][1]
        ]
    provenance = {
        "threshold": threshold,
        "direction": direction if threshold is not None else None,
        "polygon": [list(v) for v in polygon] if polygon is not None else None,
        "brushes": {str(c): list(r) for c, r in (brushes or {}).items()} or None,
    }
    return Selection(tuple(p.graph_id for p in kept), provenance)


# --------------------------------------------------------------------------
# Frequency-space perturbation


def perturb(
    f, target: int, catalog: GraphletCatalog, renormalize: bool = True
) -> np.ndarray:
    """Remove a graphlet from a frequency vector.

    Zeroes the target and all transitive containers, then walks sizes
    5 -> 4 -> 3: every graphlet reduced so far spreads its reduction over
    its dependents, weighted by a softmax of the dependents' original
    frequencies, subtracted and clamped at zero. Reductions at one size
    accumulate before the next size is processed.

    Finally every size group that lost mass is rescaled to sum to one
    again (groups that kept their mass are returned bit-identical, so a
    removal that touches nothing is a no-op). Renormalization treats the
    frequencies as ratios of subgraph counts: deleting occurrences of one
    type re-weights the survivors. Pass ``renormalize=False`` to keep the
    raw deficit instead.
    """
    original = np.asarray(f, dtype=float)
    if original.shape != (N_GRAPHLETS,):
        raise ValueError(f"frequency vector must have shape ({N_GRAPHLETS},)")
    catalog._check_index(target)
    out = original.copy()
    out[target] = 0.0
    for c in catalog.containers(target):
        out[c] = 0.0
    for size in (5, 4):
        for h in catalog.indices_of_size(size):
            delta = original[h] - out[h]
            if delta <= 0.0:
                continue
            deps = catalog.dependents(h)
            weights = redistribution_weights(original[list(deps)])
            for d, w in zip(deps, weights):
                out[d] = max(0.0, out[d] - delta * w)
    if renormalize:
        for size in (3, 4, 5):
            idx = list(catalog.indices_of_size(size))
            total = out[idx].sum()
            if total > 0 and np.any(out[idx] != original[idx]):
                out[idx] /= total
    return out


def redistribution_weights(dependent_frequencies) -> np.ndarray:
    """Softmax (temperature 1) over dependents' original frequencies;
    zero-frequency dependents still receive weight exp(0)."""
    v = np.asarray(dependent_frequencies, dtype=float)
    e = np.exp(v - v.max())
    return e / e.sum()


# --------------------------------------------------------------------------
# Scores


@dataclass(frozen=True)
class FactualScore:
    graphlet: int
    rho: float
    degenerate: bool
    n: int

    @property
    def score(self) -> float:
        return abs(self.rho)


@dataclass(frozen=True)
class CounterfactualScore:
    graphlet: int
    graph_ids: tuple[int, ...]
    deltas: np.ndarray
    l1_distances: np.ndarray
    total: float

    @property
    def score(self) -> float:
        return self.total


def _take(selection: Selection, arrays):
    ids = np.asarray(selection.graph_ids, dtype=np.int64)
    if len(ids) == 0:
        raise ValueError("selection is empty")
    return [np.asarray(a)[ids] for a in arrays]


def factual_score(selection: Selection, frequencies, class_probs, labels, graphlet: int) -> FactualScore:
    """Spearman correlation between one graphlet's frequency and the
    classification probability over the selection."""
    F, p1, y = _take(selection, (frequencies, class_probs, labels))
    if len(set(y.tolist())) < 2:
        raise ValueError("factual scoring requires both classes in the selection")
    r = spearman(F[:, graphlet], p1)
    return FactualScore(graphlet, r.rho, r.degenerate, len(p1))


def counterfactual_score(
    selection: Selection,
    frequencies,
    labels,
    graphlet: int,
    surrogate,
    catalog: GraphletCatalog,
) -> CounterfactualScore:
    """Two surrogate inference runs per graph: original vs perturbed.

    Signed delta is the confidence change (perturbed minus baseline);
    the headline total is the sum of per-graph L1 distances between the
    two probability vectors.
    """
    F, y = _take(selection, (frequencies, labels))
    base = surrogate.predict_proba(F)
    pert_inputs = np.vstack([perturb(row, graphlet, catalog) for row in F])
    pert = surrogate.predict_proba(pert_inputs)
    rows = np.arange(len(y))
    deltas = pert[rows, y] - base[rows, y]
    l1 = np.abs(pert - base).sum(axis=1)
    return CounterfactualScore(
        graphlet,
        tuple(int(i) for i in selection.graph_ids),
        deltas,
        l1,
        float(l1.sum()),
    )


def rank_factual(selection: Selection, frequencies, class_probs, labels) -> list[FactualScore]:
    scores = [
        factual_score(selection, frequencies, class_probs, labels, g) for g in range(N_GRAPHLETS)
    ]
    return sorted(scores, key=lambda s: (-s.score, s.graphlet))


def rank_counterfactual(
    selection: Selection, frequencies, labels, surrogate, catalog: GraphletCatalog
) -> list[CounterfactualScore]:
    scores = [
        counterfactual_score(selection, frequencies, labels, g, surrogate, catalog)
        for g in range(N_GRAPHLETS)
    ]
    return sorted(scores, key=lambda s: (-s.score, s.graphlet))


def rank_graphlets(
    selection: Selection,
    mode: str,
    frequencies,
    labels,
    class_probs=None,
    surrogate=None,
    catalog: GraphletCatalog | None = None,
):
    """All 29 graphlets scored and sorted by descending relevance;
    ties break toward the lower graphlet index."""
    if mode == "factual":
        if class_probs is None:
            raise ValueError("factual ranking needs classifier probabilities")
        return rank_factual(selection, frequencies, class_probs, labels)
    if mode == "counterfactual":
        if surrogate is None or catalog is None:
            raise ValueError("counterfactual ranking needs a trained surrogate and the catalog")
        return rank_counterfactual(selection, frequencies, labels, surrogate, catalog)
    raise ValueError(f"unknown explanation mode {mode!r}")


# --------------------------------------------------------------------------
# Histograms and representative graphs


@dataclass(frozen=True)
class Histogram:
    graphlet: int
    edges: np.ndarray
    counts: np.ndarray  # (2, n_bins), one row per class


def class_histograms(selection: Selection, frequencies, labels, graphlet: int, n_bins: int) -> Histogram:
    """Class-wise counts over shared bins spanning [0, max frequency]."""
    if n_bins < 1:
        raise ValueError("n_bins must be >= 1")
    F, y = _take(selection, (frequencies, labels))
    col = F[:, graphlet]
    top = float(col.max()) if len(col) and col.max() > 0 else 1.0
    edges = np.linspace(0.0, top, n_bins + 1)
    counts = np.vstack(
        [np.histogram(col[y == c], bins=edges)[0] for c in (0, 1)]
    )
    return Histogram(graphlet, edges, counts)


@dataclass(frozen=True)
class Representatives:
    mode: str
    graphlet: int
    top: int
    bottom: int
    top_rule: str
    bottom_rule: str


def representatives(
    selection: Selection,
    frequencies,
    labels,
    graphlet: int,
    mode: str,
    cf_score: CounterfactualScore | None = None,
) -> Representatives:
    """Pick the two graphs shown in the impact views.

    Factual mode: the top view is the lowest-frequency graph from the
    class whose mean frequency is lower, the bottom view the
    highest-frequency graph from the other class. Counterfactual mode:
    smallest and largest per-graph L1 change. Ties go to the lowest id.
    """
    F, y = _take(selection, (frequencies, labels))
    ids = np.asarray(selection.graph_ids, dtype=np.int64)
    col = F[:, graphlet]
    if mode == "factual":
        if len(set(y.tolist())) < 2:
            raise ValueError("factual representatives need both classes in the selection")
        mean0 = col[y == 0].mean()
        mean1 = col[y == 1].mean()
        low_class = 0 if mean0 <= mean1 else 1
        high_class = 1 - low_class
        low_pool = np.flatnonzero(y == low_class)
        high_pool = np.flatnonzero(y == high_class)
        top_local = low_pool[_argbest(col[low_pool], ids[low_pool], smallest=True)]
        bottom_local = high_pool[_argbest(col[high_pool], ids[high_pool], smallest=False)]
        return Representatives(
            mode,
            graphlet,
            int(ids[top_local]),
            int(ids[bottom_local]),
            f"lowest frequency in class {low_class} (lower-frequency class)",
            f"highest frequency in class {high_class} (higher-frequency class)",
        )
    if mode == "counterfactual":
        if cf_score is None:
            raise ValueError("counterfactual representatives need the counterfactual score")
        l1 = np.asarray(cf_score.l1_distances)
        top_local = _argbest(l1, ids, smallest=True)
        bottom_local = _argbest(l1, ids, smallest=False)
        return Representatives(
            mode,
            graphlet,
            int(ids[top_local]),
            int(ids[bottom_local]),
            "smallest confidence change after removal",
            "largest confidence change after removal",
        )
    raise ValueError(f"unknown explanation mode {mode!r}")


def _argbest(values: np.ndarray, ids: np.ndarray, smallest: bool) -> int:
    if len(values) == 0:
        raise ValueError("no graphs left in one class after filtering")
    key = values if smallest else -values
    best = np.flatnonzero(key == key.min())
    return int(best[np.argmin(ids[best])])
