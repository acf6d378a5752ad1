"""Canonical catalog of the 29 connected 3-, 4- and 5-node graphlets.

A graphlet on k nodes is stored as a bitmask over the C(k,2) unordered
vertex pairs, with pair (i, j), i < j, mapped to bit ``j*(j-1)//2 + i``.
Two masks describe isomorphic graphs exactly when their canonical forms
(the minimum mask over all k! vertex relabelings) are equal, which makes
equality of canonical forms the isomorphism test everywhere below.

The catalog also carries the node-deletion dependency DAG: an edge
``h -> d`` means deleting one node of graphlet ``h`` leaves a connected
induced subgraph isomorphic to ``d``. Edges always go down exactly one
size level (5 -> 4 -> 3).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

__all__ = [
    "Graphlet",
    "GraphletCatalog",
    "build_catalog",
    "canonical_form",
    "pair_bit",
    "N_GRAPHLETS",
    "SIZE_OFFSETS",
]

GRAPHLET_SIZES = (3, 4, 5)
SIZE_OFFSETS = (0, 2, 8, 29)
N_GRAPHLETS = 29


def pair_bit(i: int, j: int) -> int:
    """Bit position of the unordered pair (i, j) in a k-node mask."""
    if i > j:
        i, j = j, i
    return j * (j - 1) // 2 + i


def _n_pair_bits(k: int) -> int:
    return k * (k - 1) // 2


def _perm_bit_maps(k: int) -> list[list[int]]:
    """For every permutation of k labels, old bit position -> new position."""
    pairs = [(i, j) for j in range(k) for i in range(j)]
    maps = []
    for perm in permutations(range(k)):
        maps.append([pair_bit(perm[i], perm[j]) for (i, j) in [(i, j) for (i, j) in pairs]])
    return maps


_PERM_MAPS = {k: _perm_bit_maps(k) for k in GRAPHLET_SIZES}


def _remap(mask: int, bit_map: list[int]) -> int:
    out = 0
    b = 0
    while mask:
        if mask & 1:
            out |= 1 << bit_map[b]
        mask >>= 1
        b += 1
    return out


def canonical_form(mask: int, k: int) -> bytes:
    """Minimum adjacency mask over all k! relabelings, as bytes.

    Equal return values are equivalent to graph isomorphism for k <= 5.
    """
    if k not in _PERM_MAPS:
        raise ValueError(f"unsupported graphlet size {k}")
    best = min(_remap(mask, m) for m in _PERM_MAPS[k])
    return bytes([k]) + best.to_bytes(2, "big")


def _is_connected_mask(mask: int, k: int) -> bool:
    if k == 1:
        return True
    adj = [0] * k
    for j in range(k):
        for i in range(j):
            if mask >> pair_bit(i, j) & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        v = 0
        f = frontier
        while f:
            if f & 1:
                nxt |= adj[v]
            f >>= 1
            v += 1
        frontier = nxt & ~seen
        seen |= frontier
    return seen == (1 << k) - 1


def _mask_edges(mask: int, k: int) -> tuple[tuple[int, int], ...]:
    return tuple((i, j) for j in range(k) for i in range(j) if mask >> pair_bit(i, j) & 1)


def _degree_sequence(mask: int, k: int) -> tuple[int, ...]:
    deg = [0] * k
    for (i, j) in _mask_edges(mask, k):
        deg[i] += 1
        deg[j] += 1
    return tuple(sorted(deg))


def _triangle_count(mask: int, k: int) -> int:
    t = 0
    for a in range(k):
        for b in range(a + 1, k):
            for c in range(b + 1, k):
                if (
                    mask >> pair_bit(a, b) & 1
                    and mask >> pair_bit(a, c) & 1
                    and mask >> pair_bit(b, c) & 1
                ):
                    t += 1
    return t


# Human names for the structures we can identify unambiguously from
# (nodes, edges, degree sequence, triangles); the rest fall back to g<i>.
_NAMES = {
    (3, 2, (1, 1, 2), 0): "path-3",
    (3, 3, (2, 2, 2), 1): "triangle",
    (4, 3, (1, 1, 2, 2), 0): "path-4",
    (4, 3, (1, 1, 1, 3), 0): "star-4",
    (4, 4, (2, 2, 2, 2), 0): "cycle-4",
    (4, 4, (1, 2, 2, 3), 1): "paw",
    (4, 5, (2, 2, 3, 3), 2): "diamond",
    (4, 6, (3, 3, 3, 3), 4): "complete-4",
    (5, 4, (1, 1, 2, 2, 2), 0): "path-5",
    (5, 4, (1, 1, 1, 1, 4), 0): "star-5",
    (5, 4, (1, 1, 1, 2, 3), 0): "fork",
    (5, 5, (2, 2, 2, 2, 2), 0): "cycle-5",
    (5, 5, (1, 1, 2, 3, 3), 1): "bull",
    (5, 5, (1, 2, 2, 2, 3), 1): "tadpole",
    (5, 5, (1, 2, 2, 2, 3), 0): "banner",
    (5, 5, (1, 1, 2, 2, 4), 1): "cricket",
    (5, 6, (2, 2, 2, 3, 3), 1): "house",
    (5, 6, (2, 2, 2, 2, 4), 2): "butterfly",
    (5, 7, (1, 3, 3, 3, 4), 4): "lollipop",
    (5, 7, (2, 2, 3, 3, 4), 3): "gem",
    (5, 8, (2, 3, 3, 4, 4), 5): "wheel",
    (5, 9, (3, 3, 4, 4, 4), 8): "complete-5-minus-edge",
    (5, 10, (4, 4, 4, 4, 4), 10): "complete-5",
}


@dataclass(frozen=True)
class Graphlet:
    """One canonical graphlet: its index, size and edge structure."""

    index: int
    n_nodes: int
    n_edges: int
    mask: int
    edges: tuple[tuple[int, int], ...]
    name: str


class GraphletCatalog:
    """The 29 graphlets plus their node-deletion dependency DAG.

    Indices are ordered by (node count, edge count, canonical bytes):
    0-1 are the 3-node graphlets, 2-7 the 4-node ones, 8-28 the 5-node
    ones. ``classify_table(k)[local_mask]`` maps any k-node adjacency
    mask to its graphlet index (-1 when disconnected), which is how the
    census classifies enumerated subgraphs without re-canonicalizing.
    """

    def __init__(
        self,
        graphlets: list[Graphlet],
        dependents: list[tuple[int, ...]],
        tables: dict[int, list[int]],
    ):
        self.graphlets = tuple(graphlets)
        self.size_offsets = SIZE_OFFSETS
        self._dependents = tuple(dependents)
        self._tables = tables
        self._containers = self._close_upward()
        self._index_by_canon = {g.n_nodes * 65536 + g.mask: g.index for g in graphlets}

    def __len__(self) -> int:
        return len(self.graphlets)

    def __getitem__(self, idx: int) -> Graphlet:
        return self.graphlets[idx]

    def size_of(self, idx: int) -> int:
        return self.graphlets[idx].n_nodes

    def indices_of_size(self, k: int) -> range:
        s = GRAPHLET_SIZES.index(k)
        return range(self.size_offsets[s], self.size_offsets[s + 1])

    def classify_table(self, k: int) -> list[int]:
        return self._tables[k]

    def classify_mask(self, mask: int, k: int) -> int:
        """Graphlet index of a connected k-node adjacency mask."""
        idx = self._tables[k][mask]
        if idx < 0:
            raise ValueError("mask describes a disconnected graph")
        return idx

    def dependents(self, idx: int) -> tuple[int, ...]:
        """Graphlets one size smaller reachable by single node deletion."""
        self._check_index(idx)
        return self._dependents[idx]

    def containers(self, idx: int) -> tuple[int, ...]:
        """All larger graphlets from which ``idx`` is transitively reachable."""
        self._check_index(idx)
        return self._containers[idx]

    def index_of_edges(self, k: int, edges) -> int:
        """Catalog index of the k-node graph given by an edge list."""
        mask = 0
        for (u, v) in edges:
            if not (0 <= u < k and 0 <= v < k) or u == v:
                raise ValueError(f"bad edge ({u}, {v}) for a {k}-node graphlet")
            mask |= 1 << pair_bit(u, v)
        if not _is_connected_mask(mask, k):
            raise ValueError("edge list describes a disconnected graph")
        canon = int.from_bytes(canonical_form(mask, k)[1:], "big")
        return self._index_by_canon[k * 65536 + canon]

    def index_of_name(self, name: str) -> int:
        for g in self.graphlets:
            if g.name == name:
                return g.index
        raise KeyError(name)

    def describe(self) -> str:
        """Plain-text table mapping indices to structures."""
        lines = ["idx  nodes  edges  name                    edge list"]
        for g in self.graphlets:
            edges = " ".join(f"{u}-{v}" for (u, v) in g.edges)
            lines.append(f"{g.index:>3}  {g.n_nodes:>5}  {g.n_edges:>5}  {g.name:<22}  {edges}")
        return "\n".join(lines)

    def _check_index(self, idx: int) -> None:
        if not 0 <= idx < len(self.graphlets):
            raise IndexError(f"graphlet index {idx} out of range")

    def _close_upward(self) -> tuple[tuple[int, ...], ...]:
        direct_up: list[set[int]] = [set() for _ in self.graphlets]
        for h, deps in enumerate(self._dependents):
            for d in deps:
                direct_up[d].add(h)
        closed: list[tuple[int, ...]] = []
        for idx in range(len(self.graphlets)):
            seen: set[int] = set()
            stack = list(direct_up[idx])
            while stack:
                h = stack.pop()
                if h not in seen:
                    seen.add(h)
                    stack.extend(direct_up[h])
            closed.append(tuple(sorted(seen)))
        return tuple(closed)


def _delete_node_mask(mask: int, k: int, victim: int) -> int:
    keep = [v for v in range(k) if v != victim]
    out = 0
    for b, u in enumerate(keep):
        for a in range(b):
            if mask >> pair_bit(keep[a], u) & 1:
                out |= 1 << pair_bit(a, b)
    return out


def build_catalog() -> GraphletCatalog:
    """Generate, dedupe and order all 29 graphlets; derive the DAG."""
    by_size: dict[int, list[tuple[bytes, int]]] = {}
    for k in GRAPHLET_SIZES:
        seen: dict[bytes, int] = {}
        for mask in range(1 << _n_pair_bits(k)):
            if not _is_connected_mask(mask, k):
                continue
            canon = canonical_form(mask, k)
            if canon not in seen:
                seen[canon] = int.from_bytes(canon[1:], "big")
        ordered = sorted(seen.items(), key=lambda kv: (bin(kv[1]).count("1"), kv[0]))
        by_size[k] = ordered

    graphlets: list[Graphlet] = []
    for k in GRAPHLET_SIZES:
        for canon, mask in by_size[k]:
            idx = len(graphlets)
            edges = _mask_edges(mask, k)
            key = (k, len(edges), _degree_sequence(mask, k), _triangle_count(mask, k))
            name = _NAMES.get(key, f"g{idx}")
            graphlets.append(Graphlet(idx, k, len(edges), mask, edges, name))
    assert [g.n_nodes for g in graphlets].count(3) == 2
    assert [g.n_nodes for g in graphlets].count(4) == 6
    assert [g.n_nodes for g in graphlets].count(5) == 21

    index_by_canon = {(g.n_nodes, g.mask): g.index for g in graphlets}

    tables: dict[int, list[int]] = {}
    for k in GRAPHLET_SIZES:
        table = [-1] * (1 << _n_pair_bits(k))
        for mask in range(len(table)):
            if _is_connected_mask(mask, k):
                canon = int.from_bytes(canonical_form(mask, k)[1:], "big")
                table[mask] = index_by_canon[(k, canon)]
        tables[k] = table

    dependents: list[tuple[int, ...]] = []
    for g in graphlets:
        if g.n_nodes == 3:
            dependents.append(())
            continue
        k = g.n_nodes
        found: set[int] = set()
        for victim in range(k):
            sub = _delete_node_mask(g.mask, k, victim)
            if _is_connected_mask(sub, k - 1):
                found.add(tables[k - 1][sub])
        dependents.append(tuple(sorted(found)))

    return GraphletCatalog(graphlets, dependents, tables)
