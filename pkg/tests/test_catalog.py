import random
from itertools import permutations

import pytest

from graphlet_explain.catalog import (
    GRAPHLET_SIZES,
    build_catalog,
    canonical_form,
    pair_bit,
)


def test_sizes_2_6_21(catalog):
    sizes = [g.n_nodes for g in catalog.graphlets]
    assert sizes.count(3) == 2
    assert sizes.count(4) == 6
    assert sizes.count(5) == 21
    assert len(catalog) == 29
    assert catalog.size_offsets == (0, 2, 8, 29)


def test_three_node_slice(catalog):
    assert [g.n_edges for g in catalog.graphlets[0:2]] == [2, 3]
    assert catalog[0].name == "path-3"
    assert catalog[1].name == "triangle"


def test_four_node_slice_edge_counts(catalog):
    # P4, star, paw, C4, diamond, K4 in some order: edge counts 3,3,4,4,5,6.
    assert sorted(g.n_edges for g in catalog.graphlets[2:8]) == [3, 3, 4, 4, 5, 6]
    names = {g.name for g in catalog.graphlets[2:8]}
    assert names == {"path-4", "star-4", "paw", "cycle-4", "diamond", "complete-4"}


def test_all_pairwise_distinct(catalog):
    forms = {canonical_form(g.mask, g.n_nodes) for g in catalog.graphlets}
    assert len(forms) == 29


def test_canonical_form_isomorphic_relabelings():
    # P3 as 0-1,1-2 vs 0-2,2-1: same canonical form.
    m1 = (1 << pair_bit(0, 1)) | (1 << pair_bit(1, 2))
    m2 = (1 << pair_bit(0, 2)) | (1 << pair_bit(1, 2))
    assert canonical_form(m1, 3) == canonical_form(m2, 3)


def test_canonical_form_k4_all_bits():
    k4 = (1 << 6) - 1
    form = canonical_form(k4, 4)
    assert int.from_bytes(form[1:], "big") == k4


def test_house_and_c5_distinct_by_permutation_oracle(catalog):
    house = catalog[catalog.index_of_name("house")]
    c5 = catalog[catalog.index_of_name("cycle-5")]
    # Brute-force permutation check confirms non-isomorphism.
    tgt = set(c5.edges)
    for p in permutations(range(5)):
        mapped = {tuple(sorted((p[a], p[b]))) for (a, b) in house.edges}
        assert mapped != tgt
    assert canonical_form(house.mask, 5) != canonical_form(c5.mask, 5)


def test_canonical_form_is_class_function(catalog):
    rng = random.Random(7)
    for _ in range(1000):
        mask = rng.randrange(1 << 10)
        base = canonical_form(mask, 5)
        perm = list(range(5))
        rng.shuffle(perm)
        remapped = 0
        for j in range(5):
            for i in range(j):
                if mask >> pair_bit(i, j) & 1:
                    remapped |= 1 << pair_bit(perm[i], perm[j])
        assert canonical_form(remapped, 5) == base


def test_dag_edges_cross_one_level_down(catalog):
    for g in catalog.graphlets:
        for d in catalog.dependents(g.index):
            assert catalog.size_of(d) == g.n_nodes - 1


def test_every_4_5_node_graphlet_has_a_dependent(catalog):
    for g in catalog.graphlets:
        if g.n_nodes in (4, 5):
            assert len(catalog.dependents(g.index)) >= 1
        else:
            assert catalog.dependents(g.index) == ()


def test_dependents_containers_mutually_consistent(catalog):
    direct_up = {i: set() for i in range(29)}
    for h in range(29):
        for d in catalog.dependents(h):
            direct_up[d].add(h)
    for d in range(29):
        for h in direct_up[d]:
            assert d in catalog.dependents(h)
    # containers = transitive closure of direct_up
    for idx in range(29):
        seen = set()
        stack = list(direct_up[idx])
        while stack:
            h = stack.pop()
            if h not in seen:
                seen.add(h)
                stack.extend(direct_up[h])
        assert set(catalog.containers(idx)) == seen


def test_dag_is_acyclic_by_size(catalog):
    for idx in range(29):
        assert all(catalog.size_of(c) > catalog.size_of(idx) for c in catalog.containers(idx))
        assert idx not in catalog.containers(idx)


def test_known_dag_relations(catalog):
    star5 = catalog.index_of_name("star-5")
    star4 = catalog.index_of_name("star-4")
    assert catalog.dependents(star5) == (star4,)
    k5 = catalog.index_of_name("complete-5")
    k4 = catalog.index_of_name("complete-4")
    assert catalog.dependents(k5) == (k4,)
    p5 = catalog.index_of_name("path-5")
    p4 = catalog.index_of_name("path-4")
    # Deleting interior nodes of the 5-path disconnects; only end deletion survives.
    assert catalog.dependents(p5) == (p4,)


def test_containers_of_path4_include_path5(catalog):
    p4 = catalog.index_of_name("path-4")
    ups = catalog.containers(p4)
    assert catalog.index_of_name("path-5") in ups
    assert all(catalog.size_of(u) == 5 for u in ups)


def test_containers_of_k4_include_k5(catalog):
    k4 = catalog.index_of_name("complete-4")
    assert catalog.index_of_name("complete-5") in catalog.containers(k4)


def test_containers_of_path3_reach_all_reachable_sizes(catalog):
    p3 = catalog.index_of_name("path-3")
    ups = catalog.containers(p3)
    assert {catalog.size_of(u) for u in ups} == {4, 5}
    # Every 4-node graphlet except K4 deletes down to a P3 somewhere.
    four_node_ups = [u for u in ups if catalog.size_of(u) == 4]
    assert len(four_node_ups) >= 4


def test_index_of_edges_roundtrip(catalog):
    for g in catalog.graphlets:
        assert catalog.index_of_edges(g.n_nodes, g.edges) == g.index


def test_index_of_edges_rejects_disconnected(catalog):
    with pytest.raises(ValueError):
        catalog.index_of_edges(4, [(0, 1), (2, 3)])


def test_describe_lists_all(catalog):
    text = catalog.describe()
    assert len(text.splitlines()) == 30
    assert "house" in text


def test_build_catalog_deterministic():
    a = build_catalog()
    b = build_catalog()
    assert [g.mask for g in a.graphlets] == [g.mask for g in b.graphlets]
    assert all(a.dependents(i) == b.dependents(i) for i in range(29))


def test_classify_table_marks_disconnected(catalog):
    for k in GRAPHLET_SIZES:
        table = catalog.classify_table(k)
        assert table[0] == -1  # empty graph is disconnected for k >= 2
        with pytest.raises(ValueError):
            catalog.classify_mask(0, k)
