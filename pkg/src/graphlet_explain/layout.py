"""Deterministic force-directed layouts and graphlet instance highlights."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .catalog import GraphletCatalog, pair_bit
from .census import bit_adjacency, enumerate_connected
from .graphs import Graph

__all__ = ["LayoutGraph", "layout_graph", "find_instances", "greedy_disjoint_instances"]


@dataclass(frozen=True)
class LayoutGraph:
    graph_id: int
    positions: np.ndarray  # (n, 2) in [0, 1]
    edges: tuple[tuple[int, int], ...]
    highlight_nodes: tuple[int, ...]
    highlight_edges: tuple[tuple[int, int], ...]


def fruchterman_reingold(g: Graph, seed: int = 0, iterations: int = 300) -> np.ndarray:
    """Spring layout, seeded by (seed, graph id); 300 iterations default."""
    n = g.n_nodes
    rng = np.random.default_rng([seed, g.id])
    pos = rng.uniform(size=(n, 2))
    if n == 1:
        return np.array([[0.5, 0.5]])
    k = np.sqrt(1.0 / n)
    t = 0.1
    dt = t / (iterations + 1)
    edge_idx = np.array(g.edges, dtype=np.int64).reshape(-1, 2)
    for _ in range(iterations):
        diff = pos[:, None, :] - pos[None, :, :]
        dist = np.linalg.norm(diff, axis=-1)
        np.fill_diagonal(dist, 1.0)
        dist = np.maximum(dist, 1e-9)
        repulse = (k * k / dist**2)[:, :, None] * diff
        disp = repulse.sum(axis=1)
        if len(edge_idx):
            d = pos[edge_idx[:, 0]] - pos[edge_idx[:, 1]]
            dn = np.maximum(np.linalg.norm(d, axis=1, keepdims=True), 1e-9)
            pull = d * (dn / k)
            np.add.at(disp, edge_idx[:, 0], -pull)
            np.add.at(disp, edge_idx[:, 1], pull)
        length = np.maximum(np.linalg.norm(disp, axis=1, keepdims=True), 1e-9)
        pos += disp / length * np.minimum(length, t)
        t -= dt
    span = pos.max(axis=0) - pos.min(axis=0)
    span[span < 1e-12] = 1.0
    return (pos - pos.min(axis=0)) / span


def find_instances(g: Graph, catalog: GraphletCatalog, graphlet: int) -> list[tuple[int, ...]]:
    """All node sets whose induced subgraph is the given graphlet, in
    deterministic enumeration order."""
    k = catalog.size_of(graphlet)
    adj = bit_adjacency(g)
    table = catalog.classify_table(k)
    hits = []
    for sub in enumerate_connected(g, k):
        mask = 0
        for j in range(1, k):
            aw = adj[sub[j]]
            for i in range(j):
                if aw >> sub[i] & 1:
                    mask |= 1 << pair_bit(i, j)
        if table[mask] == graphlet:
            hits.append(tuple(sorted(sub)))
    hits.sort()
    return hits


def greedy_disjoint_instances(instances: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """One maximal set of node-disjoint instances, greedy in sorted order."""
    used: set[int] = set()
    chosen = []
    for inst in sorted(instances):
        if not used.intersection(inst):
            chosen.append(inst)
            used.update(inst)
    return chosen


def layout_graph(
    g: Graph,
    catalog: GraphletCatalog | None = None,
    highlight: int | None = None,
    seed: int = 0,
    iterations: int = 300,
) -> LayoutGraph:
    """Layout plus, optionally, a maximal disjoint set of highlighted
    instances of one graphlet."""
    pos = fruchterman_reingold(g, seed=seed, iterations=iterations)
    h_nodes: tuple[int, ...] = ()
    h_edges: tuple[tuple[int, int], ...] = ()
    if highlight is not None:
        if catalog is None:
            raise ValueError("highlighting needs the graphlet catalog")
        chosen = greedy_disjoint_instances(find_instances(g, catalog, highlight))
        nodes: set[int] = set()
        edges: set[tuple[int, int]] = set()
        edge_set = set(g.edges)
        for inst in chosen:
            nodes.update(inst)
            for a in range(len(inst)):
                for b in range(a + 1, len(inst)):
                    e = (inst[a], inst[b])
                    if e in edge_set:
                        edges.add(e)
        h_nodes = tuple(sorted(nodes))
        h_edges = tuple(sorted(edges))
    return LayoutGraph(g.id, pos, g.edges, h_nodes, h_edges)
