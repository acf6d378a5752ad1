"""Graph and dataset model, TU-format ingestion and node features.

Graphs are undirected and simple: edges are stored as a sorted tuple of
(u, v) pairs with u < v, no self-loops, no duplicates. Datasets carry
binary labels; raw label values are remapped to {0, 1} by ascending sort
order so class indexing is deterministic.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "Graph",
    "Dataset",
    "load_tu_dataset",
    "save_tu_dataset",
    "load_dataset_json",
    "save_dataset_json",
    "dataset_to_dict",
    "dataset_from_dict",
    "filter_by_node_count",
    "degree_onehot",
    "degrees",
]


@dataclass(frozen=True)
class Graph:
    """One undirected simple graph with a binary class label."""

    id: int
    n_nodes: int
    edges: tuple[tuple[int, int], ...]
    label: int

    def __post_init__(self):
        if self.n_nodes < 1:
            raise ValueError(f"graph {self.id}: n_nodes must be >= 1")
        if self.label not in (0, 1):
            raise ValueError(f"graph {self.id}: label must be 0 or 1, got {self.label}")
        seen = set()
        for (u, v) in self.edges:
            if u == v:
                raise ValueError(f"graph {self.id}: self-loop at node {u}")
            if not (0 <= u < v < self.n_nodes):
                raise ValueError(f"graph {self.id}: edge ({u}, {v}) out of range or unsorted")
            if (u, v) in seen:
                raise ValueError(f"graph {self.id}: duplicate edge ({u}, {v})")
            seen.add((u, v))

    @property
    def n_edges(self) -> int:
        return len(self.edges)


def make_graph(gid: int, n_nodes: int, edges, label: int) -> Graph:
    """Normalize an arbitrary edge iterable (dedupe, sort, orient u < v)."""
    norm = {(u, v) if u < v else (v, u) for (u, v) in edges if u != v}
    return Graph(gid, n_nodes, tuple(sorted(norm)), label)


@dataclass(frozen=True)
class Dataset:
    """An ordered list of graphs with dense ids 0..N-1 and two classes."""

    name: str
    graphs: tuple[Graph, ...]
    class_names: tuple[str, str] = ("class_0", "class_1")
    source_ids: tuple[int, ...] = field(default=())

    def __post_init__(self):
        for i, g in enumerate(self.graphs):
            if g.id != i:
                raise ValueError(f"dataset {self.name}: graph ids must be dense, got {g.id} at {i}")
        if self.source_ids and len(self.source_ids) != len(self.graphs):
            raise ValueError(f"dataset {self.name}: source_ids length mismatch")

    def __len__(self) -> int:
        return len(self.graphs)

    @property
    def labels(self) -> np.ndarray:
        return np.array([g.label for g in self.graphs], dtype=np.int64)

    def class_counts(self) -> tuple[int, int]:
        y = self.labels
        return int(np.sum(y == 0)), int(np.sum(y == 1))

    def require_both_classes(self) -> None:
        n0, n1 = self.class_counts()
        if n0 == 0 or n1 == 0:
            raise ValueError(f"dataset {self.name}: both classes must be present ({n0}/{n1})")


def degrees(g: Graph) -> np.ndarray:
    deg = np.zeros(g.n_nodes, dtype=np.int64)
    for (u, v) in g.edges:
        deg[u] += 1
        deg[v] += 1
    return deg


def degree_onehot(g: Graph, cap: int) -> np.ndarray:
    """Per-node one-hot of min(degree, cap); feature width is cap + 1."""
    if cap < 1:
        raise ValueError("degree cap must be >= 1")
    deg = np.minimum(degrees(g), cap)
    feats = np.zeros((g.n_nodes, cap + 1), dtype=float)
    feats[np.arange(g.n_nodes), deg] = 1.0
    return feats


def _read_int_lines(path: Path) -> list[int]:
    return [int(line.strip()) for line in path.read_text().splitlines() if line.strip()]


def load_tu_dataset(dir_path: str | os.PathLike, name: str | None = None) -> Dataset:
    """Load the standard TU triplet (DS_A, DS_graph_indicator, DS_graph_labels).

    Node ids in DS_A are 1-based and global; the indicator assigns each
    node to its (1-based) graph. Labels are remapped to {0, 1} preserving
    ascending order of the raw values.
    """
    dir_path = Path(dir_path)
    if name is None:
        name = dir_path.name
    prefix = None
    for cand in (name, dir_path.name, "DS"):
        if (dir_path / f"{cand}_A.txt").exists():
            prefix = cand
            break
    if prefix is None:
        matches = sorted(dir_path.glob("*_A.txt"))
        if not matches:
            raise FileNotFoundError(f"no *_A.txt edge file under {dir_path}")
        prefix = matches[0].name[: -len("_A.txt")]

    paths = {part: dir_path / f"{prefix}_{part}.txt" for part in ("A", "graph_indicator", "graph_labels")}
    for part, p in paths.items():
        if not p.exists():
            raise FileNotFoundError(f"missing TU file {p}")

    indicator = _read_int_lines(paths["graph_indicator"])
    raw_labels = _read_int_lines(paths["graph_labels"])
    n_graphs = len(raw_labels)
    if sorted(set(indicator)) != list(range(1, n_graphs + 1)):
        raise ValueError("graph indicator does not cover graphs 1..N densely")

    label_values = sorted(set(raw_labels))
    if len(label_values) != 2:
        raise ValueError(f"expected a binary label set, got {label_values}")
    remap = {v: i for i, v in enumerate(label_values)}

    # Global 1-based node id -> (graph index, local 0-based id).
    node_graph = np.asarray(indicator, dtype=np.int64) - 1
    local_id = np.zeros(len(indicator), dtype=np.int64)
    counts = np.zeros(n_graphs, dtype=np.int64)
    for i, gidx in enumerate(node_graph):
        local_id[i] = counts[gidx]
        counts[gidx] += 1

    edge_sets: list[set[tuple[int, int]]] = [set() for _ in range(n_graphs)]
    for lineno, line in enumerate(paths["A"].read_text().splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 2:
            raise ValueError(f"{paths['A']}:{lineno}: expected 'u, v', got {line!r}")
        u, v = int(parts[0]) - 1, int(parts[1]) - 1
        if not (0 <= u < len(indicator) and 0 <= v < len(indicator)):
            raise ValueError(f"{paths['A']}:{lineno}: node id out of range")
        if node_graph[u] != node_graph[v]:
            raise ValueError(f"{paths['A']}:{lineno}: edge crosses graph boundary")
        if u == v:
            continue
        a, b = int(local_id[u]), int(local_id[v])
        if a > b:
            a, b = b, a
        edge_sets[node_graph[u]].add((a, b))

    graphs = tuple(
        Graph(i, int(counts[i]), tuple(sorted(edge_sets[i])), remap[raw_labels[i]])
        for i in range(n_graphs)
    )
    return Dataset(name=name, graphs=graphs, class_names=(str(label_values[0]), str(label_values[1])))


def save_tu_dataset(ds: Dataset, dir_path: str | os.PathLike, prefix: str = "DS") -> None:
    """Write a dataset back out as a TU triplet (round-trip counterpart)."""
    dir_path = Path(dir_path)
    dir_path.mkdir(parents=True, exist_ok=True)
    offsets = np.cumsum([0] + [g.n_nodes for g in ds.graphs])
    a_lines, ind_lines, label_lines = [], [], []
    for g in ds.graphs:
        base = int(offsets[g.id])
        ind_lines.extend([str(g.id + 1)] * g.n_nodes)
        for (u, v) in g.edges:
            a_lines.append(f"{base + u + 1}, {base + v + 1}")
            a_lines.append(f"{base + v + 1}, {base + u + 1}")
        label_lines.append(str(g.label))
    (dir_path / f"{prefix}_A.txt").write_text("\n".join(a_lines) + "\n")
    (dir_path / f"{prefix}_graph_indicator.txt").write_text("\n".join(ind_lines) + "\n")
    (dir_path / f"{prefix}_graph_labels.txt").write_text("\n".join(label_lines) + "\n")


def filter_by_node_count(ds: Dataset, max_nodes: int) -> Dataset:
    """Keep graphs with n_nodes strictly below ``max_nodes``; re-densify ids.

    Original ids survive in ``source_ids``. Rejects empty or single-class
    results because neither can be trained on.
    """
    if max_nodes < 1:
        raise ValueError("max_nodes must be >= 1")
    kept = [g for g in ds.graphs if g.n_nodes < max_nodes]
    if not kept:
        raise ValueError(f"filter at {max_nodes} nodes leaves no graphs")
    labels = {g.label for g in kept}
    if len(labels) < 2:
        raise ValueError(f"filter at {max_nodes} nodes leaves a single class")
    source = tuple(
        (ds.source_ids[g.id] if ds.source_ids else g.id) for g in kept
    )
    graphs = tuple(
        Graph(i, g.n_nodes, g.edges, g.label) for i, g in enumerate(kept)
    )
    return Dataset(name=ds.name, graphs=graphs, class_names=ds.class_names, source_ids=source)


def dataset_to_dict(ds: Dataset) -> dict:
    d = {
        "name": ds.name,
        "class_names": list(ds.class_names),
        "graphs": [
            {"id": g.id, "n": g.n_nodes, "edges": [[u, v] for (u, v) in g.edges], "label": g.label}
            for g in ds.graphs
        ],
    }
    if ds.source_ids:
        d["source_ids"] = list(ds.source_ids)
    return d


def dataset_from_dict(d: dict) -> Dataset:
    graphs = tuple(
        Graph(int(g["id"]), int(g["n"]), tuple(tuple(e) for e in g["edges"]), int(g["label"]))
        for g in d["graphs"]
    )
    return Dataset(
        name=str(d["name"]),
        graphs=graphs,
        class_names=tuple(d.get("class_names", ("class_0", "class_1"))),
        source_ids=tuple(d.get("source_ids", ())),
    )


def save_dataset_json(ds: Dataset, path: str | os.PathLike) -> None:
    Path(path).write_text(json.dumps(dataset_to_dict(ds), indent=2) + "\n")


def load_dataset_json(path: str | os.PathLike) -> Dataset:
    return dataset_from_dict(json.loads(Path(path).read_text()))
