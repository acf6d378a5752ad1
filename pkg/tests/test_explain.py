import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphlet_explain.explain import (
    ProjectionPoint,
    Selection,
    average_ranks,
    class_histograms,
    counterfactual_score,
    factual_score,
    perturb,
    point_in_polygon,
    project,
    rank_factual,
    rank_graphlets,
    redistribution_weights,
    representatives,
    select_group,
    spearman,
    top_principal_component,
)

from conftest import normalized_random_frequencies


# --------------------------------------------------------------------------
# Spearman


def rho_oracle(x, y):
    """Independent rank-correlation oracle: tie-corrected covariance of
    midranks computed straight from the definition."""
    def midranks(v):
        out = []
        for xi in v:
            less = sum(1 for o in v if o < xi)
            equal = sum(1 for o in v if o == xi)
            out.append(less + (equal + 1) / 2.0)
        return out

    rx, ry = midranks(x), midranks(y)
    n = len(x)
    mx, my = sum(rx) / n, sum(ry) / n
    num = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    dx = math.sqrt(sum((a - mx) ** 2 for a in rx))
    dy = math.sqrt(sum((b - my) ** 2 for b in ry))
    if dx == 0 or dy == 0:
        return None
    return num / (dx * dy)


def test_spearman_monotone():
    assert spearman([1, 2, 3], [10, 20, 30]).rho == pytest.approx(1.0)


def test_spearman_antimonotone():
    assert spearman([1, 2, 3], [3, 2, 1]).rho == pytest.approx(-1.0)


def test_spearman_ties_match_oracle():
    x = [1, 2, 2, 4]
    y = [1, 3, 2, 4]
    assert spearman(x, y).rho == pytest.approx(rho_oracle(x, y), abs=1e-12)


def test_spearman_degenerate_flag():
    r = spearman([5, 5, 5], [1, 2, 3])
    assert r.rho == 0.0 and r.degenerate


def test_spearman_needs_three():
    with pytest.raises(ValueError):
        spearman([1, 2], [1, 2])


def test_spearman_oracle_on_random_tied_vectors():
    rng = np.random.default_rng(0)
    for _ in range(300):
        n = rng.integers(3, 25)
        x = rng.integers(0, 6, n).astype(float)  # heavy ties
        y = rng.integers(0, 6, n).astype(float)
        ours = spearman(x, y)
        oracle = rho_oracle(x.tolist(), y.tolist())
        if oracle is None:
            assert ours.degenerate
        else:
            assert ours.rho == pytest.approx(oracle, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-1000, 1000), min_size=3, max_size=30))
def test_spearman_invariant_under_increasing_transform(xs):
    rng = np.random.default_rng(1)
    ys = rng.normal(size=len(xs))
    base = spearman(xs, ys)
    # v^3 + 10v is strictly increasing and exact in float64 on this range.
    transformed = spearman([v**3 + 10 * v for v in xs], ys)
    assert transformed.rho == pytest.approx(base.rho, abs=1e-9)
    assert transformed.degenerate == base.degenerate


def test_average_ranks_ties():
    assert average_ranks([10, 20, 20, 40]).tolist() == [1.0, 2.5, 2.5, 4.0]


# --------------------------------------------------------------------------
# PCA projection


def test_pca_matches_dense_eigensolver():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(10, 29)) * rng.uniform(0.1, 2.0, size=29)
    v, scores = top_principal_component(X)
    C = np.cov((X - X.mean(axis=0)).T)
    w, V = np.linalg.eigh(C)
    lead = V[:, -1]
    assert abs(float(lead @ v)) >= 1.0 - 1e-9
    assert np.allclose(scores, (X - X.mean(axis=0)) @ v)


def test_pca_sign_fixed_largest_loading_positive():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(20, 5))
    v, _ = top_principal_component(X)
    assert v[int(np.argmax(np.abs(v)))] > 0


def test_pca_recovers_rank_one_line():
    rng = np.random.default_rng(4)
    t = rng.normal(size=15)
    direction = np.array([1.0, -2.0, 0.5])
    X = np.outer(t, direction)
    v, scores = top_principal_component(X)
    # Scores are an affine image of the line coordinate: perfect linear fit.
    slope, intercept = np.polyfit(t, scores, 1)
    assert abs(np.corrcoef(t, scores)[0, 1]) >= 1.0 - 1e-9
    assert np.allclose(scores, slope * t + intercept, atol=1e-9)


def test_project_duplicated_dataset_duplicates_points():
    rng = np.random.default_rng(5)
    F = np.vstack([normalized_random_frequencies(rng) for _ in range(6)])
    E = rng.normal(size=(6, 80))
    y = np.array([0, 1, 0, 1, 0, 1])
    conf = rng.uniform(0.5, 1.0, 6)
    pts = project(np.vstack([F, F]), np.vstack([E, E]), np.hstack([y, y]), np.hstack([conf, conf]))
    for i in range(6):
        assert pts[i].x == pytest.approx(pts[i + 6].x, abs=1e-9)
        assert pts[i].y == pytest.approx(pts[i + 6].y, abs=1e-9)


def test_project_needs_two_rows():
    with pytest.raises(ValueError):
        top_principal_component(np.zeros((1, 4)))


def test_project_swap_axes():
    rng = np.random.default_rng(6)
    F = np.vstack([normalized_random_frequencies(rng) for _ in range(5)])
    E = rng.normal(size=(5, 80))
    y = np.zeros(5, dtype=int)
    conf = np.full(5, 0.9)
    a = project(F, E, y, conf)
    b = project(F, E, y, conf, swap_axes=True)
    assert [p.x for p in a] == [p.y for p in b]
    assert [p.y for p in a] == [p.x for p in b]


# --------------------------------------------------------------------------
# Selection


def _points():
    return [
        ProjectionPoint(0, 0.0, 0.0, 0, 0.95),
        ProjectionPoint(1, 1.0, 0.0, 1, 0.55),
        ProjectionPoint(2, 1.0, 1.0, 0, 0.45),
        ProjectionPoint(3, 0.0, 1.0, 1, 0.99),
        ProjectionPoint(4, 0.5, 0.5, 0, 0.75),
    ]


def test_threshold_higher_and_lower():
    assert select_group(_points(), threshold=0.5).graph_ids == (0, 1, 3, 4)
    assert select_group(_points(), threshold=0.5, direction="lower").graph_ids == (2,)


def test_hull_lasso_is_identity():
    hull = [(0, 0), (1, 0), (1, 1), (0, 1)]
    assert select_group(_points(), polygon=hull).graph_ids == (0, 1, 2, 3, 4)


def test_lasso_interior_only():
    small = [(0.25, 0.25), (0.75, 0.25), (0.75, 0.75), (0.25, 0.75)]
    assert select_group(_points(), polygon=small).graph_ids == (4,)


def test_brush_selects_only_brushed_class():
    sel = select_group(_points(), brushes={0: (0.9, 1.0)})
    assert sel.graph_ids == (0,)


def test_brushes_on_both_classes():
    sel = select_group(_points(), brushes={0: (0.9, 1.0), 1: (0.9, 1.0)})
    assert sel.graph_ids == (0, 3)


def test_stages_compose():
    sel = select_group(
        _points(),
        threshold=0.5,
        polygon=[(-0.1, -0.1), (1.1, -0.1), (1.1, 1.1), (-0.1, 1.1)],
        brushes={1: (0.9, 1.0)},
    )
    assert sel.graph_ids == (3,)


def test_polygon_needs_three_vertices():
    with pytest.raises(ValueError):
        select_group(_points(), polygon=[(0, 0), (1, 1)])


def test_bad_direction():
    with pytest.raises(ValueError):
        select_group(_points(), threshold=0.5, direction="sideways")


def test_point_in_polygon_boundary_counts():
    poly = [(0, 0), (2, 0), (2, 2), (0, 2)]
    assert point_in_polygon(0, 0, poly)
    assert point_in_polygon(1, 0, poly)
    assert point_in_polygon(1, 1, poly)
    assert not point_in_polygon(3, 1, poly)


def test_selection_rejects_duplicates():
    with pytest.raises(ValueError):
        Selection((1, 1, 2))


# --------------------------------------------------------------------------
# Perturbation


def test_redistribution_weights_match_hand_softmax():
    w = redistribution_weights([0.2, 0.1])
    z = math.exp(0.2) + math.exp(0.1)
    assert w[0] == pytest.approx(math.exp(0.2) / z, abs=1e-12)
    assert w[1] == pytest.approx(math.exp(0.1) / z, abs=1e-12)
    # Four-decimal values quoted for this example.
    assert w[0] == pytest.approx(0.5250, abs=5e-5)
    assert w[1] == pytest.approx(0.4750, abs=5e-5)


def test_perturb_noop_when_nothing_present(catalog):
    rng = np.random.default_rng(7)
    f = normalized_random_frequencies(rng)
    target = catalog.index_of_name("complete-5")
    f[target] = 0.0  # no containers exist for a 5-node graphlet
    out = perturb(f, target, catalog)
    assert np.array_equal(out, f)


def test_perturb_zeroes_target_and_containers(catalog):
    rng = np.random.default_rng(8)
    for target in range(29):
        f = normalized_random_frequencies(rng)
        out = perturb(f, target, catalog)
        assert out[target] == 0.0
        for c in catalog.containers(target):
            assert out[c] == 0.0
        assert out.min() >= 0.0


def test_perturb_idempotent(catalog):
    rng = np.random.default_rng(9)
    for _ in range(100):
        f = normalized_random_frequencies(rng)
        t = int(rng.integers(0, 29))
        once = perturb(f, t, catalog)
        twice = perturb(once, t, catalog)
        assert np.array_equal(once, twice)


def test_perturb_renormalizes_changed_groups(catalog):
    rng = np.random.default_rng(10)
    f = normalized_random_frequencies(rng)
    t = catalog.index_of_name("house")
    out = perturb(f, t, catalog)
    for lo, hi in ((0, 2), (2, 8), (8, 29)):
        s = out[lo:hi].sum()
        assert s == pytest.approx(1.0, abs=1e-9) or s == 0.0


def test_perturb_raw_deficit_flag(catalog):
    rng = np.random.default_rng(11)
    f = normalized_random_frequencies(rng)
    t = catalog.index_of_name("house")
    out = perturb(f, t, catalog, renormalize=False)
    assert out[8:29].sum() < 1.0 - 1e-6
    assert out[t] == 0.0


def test_perturb_star5_real_dag(catalog):
    # The 5-star's only node-deletion child is the 4-star (weight 1).
    f = np.zeros(29)
    s5, s4 = catalog.index_of_name("star-5"), catalog.index_of_name("star-4")
    f[s5], f[s4] = 0.4, 0.2
    out = perturb(f, s5, catalog, renormalize=False)
    assert out[s5] == 0.0
    assert out[s4] == 0.0  # max(0, 0.2 - 0.4 * 1.0)
    assert out.sum() == 0.0  # the cascade clears the 3-node path too


def test_perturb_4star_zeroes_5star_container(catalog):
    f = np.zeros(29)
    s5, s4 = catalog.index_of_name("star-5"), catalog.index_of_name("star-4")
    f[s5], f[s4] = 0.3, 0.5
    out = perturb(f, s4, catalog, renormalize=False)
    assert out[s4] == 0.0
    assert out[s5] == 0.0


def test_perturb_rejects_bad_shapes(catalog):
    with pytest.raises(ValueError):
        perturb(np.zeros(10), 0, catalog)
    with pytest.raises(IndexError):
        perturb(np.zeros(29), 99, catalog)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 28), st.integers(0, 2**32 - 1))
def test_perturb_properties_hypothesis(catalog, target, seed):
    f = normalized_random_frequencies(np.random.default_rng(seed))
    out = perturb(f, target, catalog)
    assert out.min() >= 0.0
    assert out[target] == 0.0
    assert all(out[c] == 0.0 for c in catalog.containers(target))
    again = perturb(out, target, catalog)
    assert np.array_equal(out, again)


# --------------------------------------------------------------------------
# Scores, histograms, representatives


class _LinearSurrogate:
    """Deterministic stand-in: p1 rises with total 5-node tree mass."""

    def predict_proba(self, F):
        F = np.asarray(F, dtype=float)
        score = F[:, 8:11].sum(axis=1)
        p1 = 1.0 / (1.0 + np.exp(-8 * (score - 0.35)))
        return np.column_stack([1 - p1, p1])


def _scoring_setup(n=12, seed=12):
    rng = np.random.default_rng(seed)
    F = np.vstack([normalized_random_frequencies(rng) for _ in range(n)])
    y = np.array([i % 2 for i in range(n)])
    p1 = rng.uniform(0, 1, n)
    sel = Selection(tuple(range(n)))
    return F, y, p1, sel


def test_factual_score_matches_direct_spearman(catalog):
    F, y, p1, sel = _scoring_setup()
    s = factual_score(sel, F, p1, y, graphlet=20)
    assert s.rho == pytest.approx(spearman(F[:, 20], p1).rho)
    assert s.n == 12


def test_factual_requires_both_classes():
    F, y, p1, sel = _scoring_setup()
    with pytest.raises(ValueError, match="both classes"):
        factual_score(Selection((0, 2, 4)), F, p1, y, graphlet=0)


def test_factual_ranking_sorted_and_complete(catalog):
    F, y, p1, sel = _scoring_setup(n=20)
    ranked = rank_factual(sel, F, p1, y)
    assert len(ranked) == 29
    assert sorted(s.graphlet for s in ranked) == list(range(29))
    scores = [s.score for s in ranked]
    assert scores == sorted(scores, reverse=True)


def test_constructed_perfect_correlation_ranks_first(catalog):
    F, y, p1, sel = _scoring_setup(n=16, seed=13)
    F = F.copy()
    F[:, 5] = p1  # frequency equals classification probability exactly
    ranked = rank_factual(sel, F, p1, y)
    assert ranked[0].graphlet == 5
    assert ranked[0].rho == pytest.approx(1.0)


def test_ranking_invariant_to_selection_order(catalog):
    F, y, p1, _ = _scoring_setup(n=14, seed=14)
    a = rank_factual(Selection(tuple(range(14))), F, p1, y)
    b = rank_factual(Selection(tuple(reversed(range(14)))), F, p1, y)
    assert [s.graphlet for s in a] == [s.graphlet for s in b]


def test_factual_abs_rho_invariant_under_class_relabel(catalog):
    F, y, p1, sel = _scoring_setup(n=14, seed=15)
    a = rank_factual(sel, F, p1, y)
    b = rank_factual(sel, F, p1, 1 - y)
    for s1, s2 in zip(a, b):
        assert s1.graphlet == s2.graphlet
        assert s1.score == pytest.approx(s2.score)


def test_counterfactual_score_definition(catalog):
    F, y, p1, sel = _scoring_setup(n=10, seed=16)
    sur = _LinearSurrogate()
    cf = counterfactual_score(sel, F, y, catalog.index_of_name("house"), sur, catalog)
    base = sur.predict_proba(F)
    pert = sur.predict_proba(np.vstack([perturb(f, catalog.index_of_name("house"), catalog) for f in F]))
    rows = np.arange(10)
    assert np.allclose(cf.deltas, pert[rows, y] - base[rows, y])
    assert np.allclose(cf.l1_distances, np.abs(pert - base).sum(axis=1))
    assert cf.total == pytest.approx(cf.l1_distances.sum())
    assert cf.total >= 0


def test_counterfactual_zero_when_target_absent(catalog):
    rng = np.random.default_rng(17)
    F = np.vstack([normalized_random_frequencies(rng) for _ in range(6)])
    t = catalog.index_of_name("complete-5")
    F[:, t] = 0.0  # no containers for a 5-node graphlet
    y = np.array([0, 1] * 3)
    cf = counterfactual_score(Selection(tuple(range(6))), F, y, t, _LinearSurrogate(), catalog)
    assert cf.total == 0.0


def test_counterfactual_total_order_invariant(catalog):
    F, y, p1, _ = _scoring_setup(n=10, seed=18)
    sur = _LinearSurrogate()
    a = counterfactual_score(Selection(tuple(range(10))), F, y, 8, sur, catalog)
    b = counterfactual_score(Selection(tuple(reversed(range(10)))), F, y, 8, sur, catalog)
    assert a.total == pytest.approx(b.total)


def test_counterfactual_empty_selection_rejected(catalog):
    F, y, p1, _ = _scoring_setup()
    with pytest.raises(ValueError, match="empty"):
        counterfactual_score(Selection(()), F, y, 0, _LinearSurrogate(), catalog)


def test_rank_graphlets_dispatch(catalog):
    F, y, p1, sel = _scoring_setup(n=10, seed=19)
    fact = rank_graphlets(sel, "factual", F, y, class_probs=p1)
    assert len(fact) == 29
    cf = rank_graphlets(sel, "counterfactual", F, y, surrogate=_LinearSurrogate(), catalog=catalog)
    assert len(cf) == 29
    totals = [s.total for s in cf]
    assert totals == sorted(totals, reverse=True)
    with pytest.raises(ValueError):
        rank_graphlets(sel, "factual", F, y)
    with pytest.raises(ValueError):
        rank_graphlets(sel, "magical", F, y)


def test_histogram_single_graph(catalog):
    F = np.zeros((1, 29))
    F[0, 20] = 0.4
    h = class_histograms(Selection((0,)), F, np.array([1]), 20, n_bins=1)
    assert h.counts.shape == (2, 1)
    assert h.counts[1, 0] == 1 and h.counts[0, 0] == 0


def test_histogram_counts_partition_classes(catalog):
    F, y, p1, sel = _scoring_setup(n=30, seed=20)
    h = class_histograms(sel, F, y, 10, n_bins=7)
    assert h.counts[0].sum() == int(np.sum(y == 0))
    assert h.counts[1].sum() == int(np.sum(y == 1))
    assert len(h.edges) == 8
    assert h.edges[0] == 0.0


def test_representatives_factual_rule(catalog):
    F = np.zeros((4, 29))
    F[:, 3] = [0.1, 0.9, 0.2, 0.8]
    y = np.array([0, 1, 0, 1])
    r = representatives(Selection((0, 1, 2, 3)), F, y, 3, "factual")
    # class 0 has the lower mean: top = lowest-frequency class-0 graph.
    assert r.top == 0
    assert r.bottom == 1


def test_representatives_two_graphs(catalog):
    F = np.zeros((2, 29))
    F[:, 4] = [0.3, 0.6]
    r = representatives(Selection((0, 1)), F, np.array([0, 1]), 4, "factual")
    assert {r.top, r.bottom} == {0, 1}


def test_representatives_frequency_tie_lowest_id(catalog):
    F = np.zeros((4, 29))
    F[:, 6] = [0.5, 0.5, 0.5, 0.5]
    y = np.array([0, 0, 1, 1])
    r = representatives(Selection((0, 1, 2, 3)), F, y, 6, "factual")
    assert r.top == 0  # tie broken by lowest graph id
    assert r.bottom == 2


def test_representatives_counterfactual_extremes(catalog):
    F, y, p1, sel = _scoring_setup(n=8, seed=21)
    cf = counterfactual_score(sel, F, y, 9, _LinearSurrogate(), catalog)
    r = representatives(sel, F, y, 9, "counterfactual", cf_score=cf)
    l1 = cf.l1_distances
    assert l1[list(sel.graph_ids).index(r.top)] == l1.min()
    assert l1[list(sel.graph_ids).index(r.bottom)] == l1.max()


def test_representatives_counterfactual_needs_score(catalog):
    F, y, p1, sel = _scoring_setup()
    with pytest.raises(ValueError):
        representatives(sel, F, y, 0, "counterfactual")
