"""Synthetic BA-House dataset: BA base graphs, half with house motifs.

Even-indexed graphs are plain Barabási–Albert graphs (class 0); odd ones
get a BA base plus a uniform number of house motifs (class 1). Each house
is five fresh nodes wired as a 4-cycle with a triangle roof, attached to
the base through exactly one branch edge from a uniformly chosen house
node to a uniformly chosen base node.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .graphs import Dataset, Graph

__all__ = ["BaHouseConfig", "generate_ba_house", "ba_graph_edges", "HOUSE_EDGES"]

# House on local nodes 0..4: square 0-1-3-2-0 with roof apex 4 over 2-3.
HOUSE_EDGES = ((0, 1), (0, 2), (1, 3), (2, 3), (2, 4), (3, 4))


@dataclass(frozen=True)
class BaHouseConfig:
    n_graphs: int = 300
    node_range: tuple[int, int] = (10, 40)
    houses_range: tuple[int, int] = (2, 10)
    ba_attachment: int = 2
    seed: int = 0

    def __post_init__(self):
        lo, hi = self.node_range
        if lo < 5 or hi < lo:
            raise ValueError(f"node_range must satisfy 5 <= min <= max, got {self.node_range}")
        hlo, hhi = self.houses_range
        if hlo < 1 or hhi < hlo:
            raise ValueError(f"houses_range must satisfy 1 <= min <= max, got {self.houses_range}")
        if not 1 <= self.ba_attachment < lo:
            raise ValueError(
                f"ba_attachment must be in [1, node_range.min), got {self.ba_attachment}"
            )
        if self.n_graphs < 1:
            raise ValueError("n_graphs must be >= 1")


def ba_graph_edges(n: int, m: int, rng: random.Random) -> list[tuple[int, int]]:
    """Preferential-attachment edge list on nodes 0..n-1.

    Node m links to all of 0..m-1; each later node draws m distinct
    targets with probability proportional to current degree.
    """
    if not 1 <= m < n:
        raise ValueError(f"need 1 <= m < n, got m={m}, n={n}")
    edges: list[tuple[int, int]] = []
    repeated: list[int] = []
    targets = list(range(m))
    for source in range(m, n):
        edges.extend((t, source) for t in targets)
        repeated.extend(targets)
        repeated.extend([source] * m)
        # Sample m distinct targets weighted by degree.
        chosen: set[int] = set()
        while len(chosen) < m:
            chosen.add(repeated[rng.randrange(len(repeated))])
        targets = sorted(chosen)
    return edges


def _attach_house(edges: list[tuple[int, int]], n_base: int, house_idx: int, rng: random.Random) -> None:
    base_node = rng.randrange(n_base)
    offset = n_base + 5 * house_idx
    edges.extend((offset + u, offset + v) for (u, v) in HOUSE_EDGES)
    branch_from = offset + rng.randrange(5)
    edges.append((base_node, branch_from))


def generate_ba_house(cfg: BaHouseConfig) -> Dataset:
    """Build the synthetic dataset; fully determined by ``cfg.seed``."""
    rng = random.Random(cfg.seed)
    graphs = []
    for gid in range(cfg.n_graphs):
        n_base = rng.randint(*cfg.node_range)
        edges = ba_graph_edges(n_base, cfg.ba_attachment, rng)
        if gid % 2 == 0:
            graphs.append(Graph(gid, n_base, tuple(sorted(set(edges))), 0))
        else:
            n_houses = rng.randint(*cfg.houses_range)
            for h in range(n_houses):
                _attach_house(edges, n_base, h, rng)
            norm = sorted({(u, v) if u < v else (v, u) for (u, v) in edges})
            graphs.append(Graph(gid, n_base + 5 * n_houses, tuple(norm), 1))
    return Dataset(name="ba-house", graphs=tuple(graphs), class_names=("non_house", "house"))
