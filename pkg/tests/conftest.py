import random
from itertools import combinations, permutations

import numpy as np
import pytest

from graphlet_explain.catalog import build_catalog
from graphlet_explain.generators import HOUSE_EDGES
from graphlet_explain.graphs import Graph, make_graph


@pytest.fixture(scope="session")
def catalog():
    return build_catalog()


@pytest.fixture(scope="session")
def house_graph():
    return Graph(0, 5, tuple(sorted(HOUSE_EDGES)), 0)


def random_graph(rng: random.Random, n: int, p: float, gid: int = 0, label: int = 0) -> Graph:
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return make_graph(gid, n, edges, label)


def naive_census(g: Graph, catalog, k: int):
    """Independent census oracle: test every C(n, k) node subset for
    connectivity (BFS) and classify by permutation search against the
    catalog edge lists. Shares no code with the ESU path."""
    adj = [set() for _ in range(g.n_nodes)]
    for (u, v) in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    counts: dict[int, int] = {}
    total = 0
    candidates = [gl for gl in catalog.graphlets if gl.n_nodes == k]
    for sub in combinations(range(g.n_nodes), k):
        ss = set(sub)
        seen = {sub[0]}
        frontier = [sub[0]]
        while frontier:
            nxt = []
            for x in frontier:
                for yv in adj[x]:
                    if yv in ss and yv not in seen:
                        seen.add(yv)
                        nxt.append(yv)
            frontier = nxt
        if len(seen) != k:
            continue
        total += 1
        local = {
            (i, j)
            for i in range(k)
            for j in range(i + 1, k)
            if sub[j] in adj[sub[i]]
        }
        deg = sorted(sum(1 for e in local if v in e) for v in range(k))
        matched = None
        for gl in candidates:
            if gl.n_edges != len(local):
                continue
            gl_deg = sorted(sum(1 for e in gl.edges if v in e) for v in range(k))
            if gl_deg != deg:
                continue
            tgt = set(gl.edges)
            for p in permutations(range(k)):
                mapped = {tuple(sorted((p[a], p[b]))) for (a, b) in local}
                if mapped == tgt:
                    matched = gl.index
                    break
            if matched is not None:
                break
        assert matched is not None, "subset matched no catalog graphlet"
        counts[matched] = counts.get(matched, 0) + 1
    return counts, total


def normalized_random_frequencies(rng: np.random.Generator) -> np.ndarray:
    """A random 29-D vector whose three size groups each sum to 1."""
    v = rng.uniform(0.0, 1.0, 29)
    for lo, hi in ((0, 2), (2, 8), (8, 29)):
        s = v[lo:hi].sum()
        v[lo:hi] = v[lo:hi] / s if s > 0 else 0.0
    return v
