"""HTTP service exposing datasets, artifacts, selections and rankings.

All numbers the UI displays are computed here. Reads are pure and
cacheable; mutations (training, selection creation) are serialized per
dataset. Training runs in background threads behind 202 + a polling job
endpoint. Artifacts (census cache, classifier and surrogate checkpoints)
are persisted as JSON under the artifact directory and reloaded on start.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware

from .catalog import GraphletCatalog, N_GRAPHLETS, build_catalog
from .census import CensusResult, census_dataset
from .explain import (
    Selection,
    class_histograms,
    counterfactual_score,
    factual_score,
    project,
    rank_graphlets,
    representatives,
    select_group,
)
from .gcn import GcnClassifier
from .graphs import Dataset, load_dataset_json
from .layout import layout_graph
from .surrogate import GraphletSurrogate

__all__ = ["ServiceConfig", "load_config", "create_app"]

ENV_PREFIX = "GA_"


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8750
    data_dir: str = "data"
    artifact_dir: str = "artifacts"
    census_mode: str = "auto"
    census_samples: int = 20000
    census_seed: int = 0
    exhaustive_max_nodes: int = 120
    layout_seed: int = 0
    allow_training: bool = True


def load_config(path: str | os.PathLike | None = None, env: dict | None = None) -> ServiceConfig:
    """JSON config file plus GA_* environment overrides."""
    env = dict(os.environ if env is None else env)
    cfg = ServiceConfig()
    if path is not None:
        raw = json.loads(Path(path).read_text())
        census = raw.pop("census", {})
        for key, value in raw.items():
            if not hasattr(cfg, key):
                raise ValueError(f"unknown config key {key!r}")
            setattr(cfg, key, type(getattr(cfg, key))(value))
        for key, value in census.items():
            attr = f"census_{key}" if not key.startswith("census_") else key
            if attr == "census_exhaustive_max_nodes":
                attr = "exhaustive_max_nodes"
            if not hasattr(cfg, attr):
                raise ValueError(f"unknown census config key {key!r}")
            setattr(cfg, attr, type(getattr(cfg, attr))(value))
    for attr in vars(cfg):
        var = ENV_PREFIX + attr.upper()
        if var in env:
            current = getattr(cfg, attr)
            if isinstance(current, bool):
                setattr(cfg, attr, env[var].lower() in ("1", "true", "yes"))
            else:
                setattr(cfg, attr, type(current)(env[var]))
    return cfg


@dataclass
class _Bundle:
    """Everything derived from one dataset's artifacts, built lazily."""

    dataset: Dataset
    census: list[CensusResult] | None = None
    gcn: GcnClassifier | None = None
    surrogate: GraphletSurrogate | None = None
    frequencies: np.ndarray | None = None
    probabilities: np.ndarray | None = None
    embeddings: np.ndarray | None = None
    points: list | None = None
    artifact_error: str | None = None
    lock: threading.RLock = field(default_factory=threading.RLock)


class _State:
    def __init__(self, config: ServiceConfig):
        self.config = config
        self.catalog: GraphletCatalog = build_catalog()
        self.bundles: dict[str, _Bundle] = {}
        self.selections: dict[str, tuple[str, Selection]] = {}
        self.rankings: dict[tuple[str, str], list] = {}
        self.jobs: dict[str, dict] = {}
        self.active_dataset: str | None = None
        self.lock = threading.Lock()
        self._next_selection = 1
        self._next_job = 1
        self._discover()

    # -- discovery / persistence ------------------------------------------

    def _discover(self) -> None:
        data_dir = Path(self.config.data_dir)
        if data_dir.is_dir():
            for path in sorted(data_dir.glob("*.json")):
                try:
                    ds = load_dataset_json(path)
                except (ValueError, KeyError) as exc:
                    raise RuntimeError(f"corrupt dataset file {path}: {exc}") from exc
                self.bundles[path.stem] = _Bundle(dataset=ds)
        if len(self.bundles) == 1:
            self.active_dataset = next(iter(self.bundles))
        art = Path(self.config.artifact_dir)
        for did, bundle in self.bundles.items():
            census_path = art / f"{did}.census.json"
            gcn_path = art / f"{did}.gcn.json"
            sur_path = art / f"{did}.surrogate.json"
            # A corrupt artifact must not take the service down: endpoints
            # that need it answer 500 with the diagnostic instead.
            try:
                if census_path.exists():
                    rows = json.loads(census_path.read_text())
                    bundle.census = [CensusResult.from_dict(r) for r in rows]
                if gcn_path.exists():
                    bundle.gcn = GcnClassifier.load(gcn_path)
                if sur_path.exists():
                    bundle.surrogate = GraphletSurrogate.load(sur_path)
            except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
                bundle.census = None
                bundle.gcn = None
                bundle.surrogate = None
                bundle.artifact_error = f"corrupt artifact for dataset {did!r}: {exc}"

    def _persist_census(self, did: str, results: list[CensusResult]) -> None:
        art = Path(self.config.artifact_dir)
        art.mkdir(parents=True, exist_ok=True)
        (art / f"{did}.census.json").write_text(
            json.dumps([r.to_dict() for r in results]) + "\n"
        )

    # -- bundle access -----------------------------------------------------

    def bundle_raw(self, did: str) -> _Bundle:
        if did not in self.bundles:
            raise HTTPException(404, f"unknown dataset {did!r}")
        return self.bundles[did]

    def bundle(self, did: str) -> _Bundle:
        b = self.bundle_raw(did)
        if b.artifact_error is not None:
            raise HTTPException(500, b.artifact_error)
        return b

    def ensure_census(self, did: str) -> _Bundle:
        b = self.bundle(did)
        with b.lock:
            if b.census is None:
                cfg = self.config
                b.census = census_dataset(
                    b.dataset.graphs,
                    self.catalog,
                    mode=cfg.census_mode,
                    samples=cfg.census_samples,
                    seed=cfg.census_seed,
                    exhaustive_max_nodes=cfg.exhaustive_max_nodes,
                )
                self._persist_census(did, b.census)
            if b.frequencies is None:
                b.frequencies = np.array([r.frequencies for r in b.census])
        return b

    def ensure_gcn_outputs(self, did: str) -> _Bundle:
        b = self.bundle(did)
        if b.gcn is None:
            raise HTTPException(409, f"dataset {did!r} has no trained classifier yet")
        with b.lock:
            if b.probabilities is None:
                graphs = list(b.dataset.graphs)
                b.probabilities = b.gcn.predict_proba(graphs)
                b.embeddings = b.gcn.embed(graphs)
        return b

    def ensure_points(self, did: str) -> _Bundle:
        b = self.ensure_census(did)
        self.ensure_gcn_outputs(did)
        with b.lock:
            if b.points is None:
                y = b.dataset.labels
                conf = b.probabilities[np.arange(len(y)), y]
                b.points = project(b.frequencies, b.embeddings, y, conf)
        return b

    def selection(self, sid: str) -> tuple[str, Selection]:
        if sid not in self.selections:
            raise HTTPException(404, f"unknown selection {sid!r}")
        return self.selections[sid]

    # -- jobs ---------------------------------------------------------------

    def submit_job(self, kind: str, did: str, work) -> str:
        with self.lock:
            jid = f"job-{self._next_job}"
            self._next_job += 1
            self.jobs[jid] = {"id": jid, "kind": kind, "dataset": did, "status": "pending", "error": None}

        def run():
            self.jobs[jid]["status"] = "running"
            try:
                work()
            except Exception as exc:  # surfaced through the job endpoint
                self.jobs[jid]["status"] = "error"
                self.jobs[jid]["error"] = f"{type(exc).__name__}: {exc}"
                return
            self.jobs[jid]["status"] = "done"

        threading.Thread(target=run, daemon=True).start()
        return jid


def _selection_arrays(state: _State, sid: str):
    did, sel = state.selection(sid)
    b = state.ensure_points(did)
    y = b.dataset.labels
    return did, sel, b, y


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    state = _State(config)
    app = FastAPI(title="graphlet-explain service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.service = state

    # -- datasets -----------------------------------------------------------

    @app.get("/api/datasets")
    def list_datasets():
        out = []
        for did, b in sorted(state.bundles.items()):
            n0, n1 = b.dataset.class_counts()
            out.append(
                {
                    "id": did,
                    "name": b.dataset.name,
                    "n_graphs": len(b.dataset),
                    "class_names": list(b.dataset.class_names),
                    "class_counts": [n0, n1],
                    "has_census": b.census is not None,
                    "has_gcn": b.gcn is not None,
                    "has_surrogate": b.surrogate is not None,
                    "active": did == state.active_dataset,
                }
            )
        return out

    @app.post("/api/datasets/{did}/activate")
    def activate(did: str):
        state.bundle(did)
        state.active_dataset = did
        return {"active": did}

    # -- training jobs ------------------------------------------------------

    @app.post("/api/datasets/{did}/train-gcn", status_code=202)
    def train_gcn(did: str, body: dict | None = None):
        if not config.allow_training:
            raise HTTPException(403, "training endpoints are disabled")
        # Raw access: retraining is how a corrupt checkpoint gets repaired.
        b = state.bundle_raw(did)
        body = body or {}

        def work():
            with b.lock:
                clf = GcnClassifier(
                    epochs=int(body.get("epochs", 200)),
                    learning_rate=float(body.get("learning_rate", 1e-3)),
                    seed=int(body.get("seed", 0)),
                )
                clf.fit(list(b.dataset.graphs))
                art = Path(config.artifact_dir)
                art.mkdir(parents=True, exist_ok=True)
                clf.save(art / f"{did}.gcn.json")
                b.gcn = clf
                b.probabilities = clf.report_.probabilities
                b.embeddings = clf.report_.embeddings
                b.points = None
                b.artifact_error = None

        return {"job_id": state.submit_job("train-gcn", did, work)}

    @app.post("/api/datasets/{did}/train-surrogate", status_code=202)
    def train_surrogate(did: str, body: dict | None = None):
        if not config.allow_training:
            raise HTTPException(403, "training endpoints are disabled")
        b = state.bundle(did)
        if b.gcn is None:
            raise HTTPException(409, "train the classifier before the surrogate")
        body = body or {}

        def work():
            state.ensure_census(did)
            state.ensure_gcn_outputs(did)
            with b.lock:
                sur = GraphletSurrogate(
                    steps=int(body.get("steps", 5000)),
                    learning_rate=float(body.get("learning_rate", 1e-3)),
                    seed=int(body.get("seed", 0)),
                )
                sur.fit(
                    b.frequencies,
                    b.embeddings,
                    b.probabilities,
                    b.gcn.head_weight_.data,
                    b.gcn.head_bias_.data,
                )
                art = Path(config.artifact_dir)
                art.mkdir(parents=True, exist_ok=True)
                sur.save(art / f"{did}.surrogate.json")
                b.surrogate = sur

        return {"job_id": state.submit_job("train-surrogate", did, work)}

    @app.get("/api/jobs/{jid}")
    def job(jid: str):
        if jid not in state.jobs:
            raise HTTPException(404, f"unknown job {jid!r}")
        return state.jobs[jid]

    # -- projection + selections ---------------------------------------------

    @app.get("/api/datasets/{did}/projection")
    def projection(did: str):
        b = state.ensure_points(did)
        return {
            "dataset": did,
            "points": [
                {
                    "graph_id": p.graph_id,
                    "x": p.x,
                    "y": p.y,
                    "label": p.label,
                    "confidence": p.confidence,
                }
                for p in b.points
            ],
        }

    @app.post("/api/datasets/{did}/selections", status_code=201)
    def create_selection(did: str, body: dict):
        b = state.ensure_points(did)
        polygon = body.get("polygon")
        if polygon is not None and len(polygon) < 3:
            raise HTTPException(400, "lasso polygon needs at least 3 vertices")
        brushes = body.get("brushes") or None
        if brushes is not None:
            brushes = {int(c): tuple(r) for c, r in brushes.items()}
        try:
            sel = select_group(
                b.points,
                threshold=body.get("threshold"),
                direction=body.get("direction", "higher"),
                polygon=polygon,
                brushes=brushes,
            )
        except ValueError as exc:
            raise HTTPException(400, str(exc))
        if not sel.graph_ids:
            raise HTTPException(400, "selection is empty")
        with state.lock:
            sid = f"sel-{state._next_selection}"
            state._next_selection += 1
            state.selections[sid] = (did, sel)
            state.active_dataset = did
        y = b.dataset.labels
        ids = np.asarray(sel.graph_ids)
        return {
            "id": sid,
            "dataset": did,
            "graph_ids": list(sel.graph_ids),
            "n_graphs": len(sel.graph_ids),
            "class_counts": [int(np.sum(y[ids] == c)) for c in (0, 1)],
        }

    # -- rankings, fidelity, histograms, representatives ----------------------

    def _require_mode(mode: str) -> str:
        if mode not in ("factual", "counterfactual"):
            raise HTTPException(400, f"mode must be factual or counterfactual, got {mode!r}")
        return mode

    def _surrogate_or_409(b: _Bundle) -> GraphletSurrogate:
        if b.surrogate is None:
            raise HTTPException(409, "counterfactual mode needs a trained surrogate")
        return b.surrogate

    @app.get("/api/selections/{sid}/ranking")
    def ranking(sid: str, mode: str = "factual"):
        _require_mode(mode)
        key = (sid, mode)
        if key in state.rankings:
            return {"selection": sid, "mode": mode, "entries": state.rankings[key]}
        did, sel, b, y = _selection_arrays(state, sid)
        try:
            if mode == "factual":
                scores = rank_graphlets(
                    sel, "factual", b.frequencies, y, class_probs=b.probabilities[:, 1]
                )
                entries = [
                    {
                        "graphlet": s.graphlet,
                        "name": state.catalog[s.graphlet].name,
                        "score": s.score,
                        "rho": s.rho,
                        "degenerate": s.degenerate,
                    }
                    for s in scores
                ]
            else:
                surrogate = _surrogate_or_409(b)
                scores = rank_graphlets(
                    sel, "counterfactual", b.frequencies, y,
                    surrogate=surrogate, catalog=state.catalog,
                )
                entries = [
                    {
                        "graphlet": s.graphlet,
                        "name": state.catalog[s.graphlet].name,
                        "score": s.score,
                        "total": s.total,
                    }
                    for s in scores
                ]
        except ValueError as exc:
            raise HTTPException(400, str(exc))
        with state.lock:
            state.rankings[key] = entries
        return {"selection": sid, "mode": mode, "entries": entries}

    @app.get("/api/selections/{sid}/graphlets/{gidx}/fidelity")
    def fidelity(sid: str, gidx: int, mode: str = "factual"):
        _require_mode(mode)
        if not 0 <= gidx < N_GRAPHLETS:
            raise HTTPException(404, f"graphlet index {gidx} out of range")
        did, sel, b, y = _selection_arrays(state, sid)
        ids = np.asarray(sel.graph_ids)
        freqs = b.frequencies[ids, gidx]
        try:
            if mode == "factual":
                score = factual_score(sel, b.frequencies, b.probabilities[:, 1], y, gidx)
                points = [
                    {
                        "graph_id": int(i),
                        "frequency": float(f),
                        "class_prob": float(b.probabilities[i, 1]),
                        "label": int(y[i]),
                    }
                    for i, f in zip(ids, freqs)
                ]
                return {
                    "selection": sid,
                    "mode": mode,
                    "graphlet": gidx,
                    "rho": score.rho,
                    "degenerate": score.degenerate,
                    "points": points,
                }
            surrogate = _surrogate_or_409(b)
            score = counterfactual_score(sel, b.frequencies, y, gidx, surrogate, state.catalog)
        except ValueError as exc:
            raise HTTPException(400, str(exc))
        points = [
            {
                "graph_id": int(i),
                "frequency": float(f),
                "delta": float(d),
                "l1": float(l1),
                "label": int(y[i]),
            }
            for i, f, d, l1 in zip(ids, freqs, score.deltas, score.l1_distances)
        ]
        return {
            "selection": sid,
            "mode": mode,
            "graphlet": gidx,
            "total": score.total,
            "points": points,
        }

    @app.get("/api/selections/{sid}/graphlets/{gidx}/histogram")
    def histogram(sid: str, gidx: int, bins: int = 10):
        if not 0 <= gidx < N_GRAPHLETS:
            raise HTTPException(404, f"graphlet index {gidx} out of range")
        if bins < 1:
            raise HTTPException(400, "bins must be >= 1")
        did, sel, b, y = _selection_arrays(state, sid)
        h = class_histograms(sel, b.frequencies, y, gidx, bins)
        return {
            "selection": sid,
            "graphlet": gidx,
            "edges": [float(e) for e in h.edges],
            "counts": [[int(c) for c in row] for row in h.counts],
        }

    @app.get("/api/selections/{sid}/representatives")
    def reps(sid: str, graphlet: int, mode: str = "factual"):
        _require_mode(mode)
        if not 0 <= graphlet < N_GRAPHLETS:
            raise HTTPException(404, f"graphlet index {graphlet} out of range")
        did, sel, b, y = _selection_arrays(state, sid)
        try:
            cf = None
            if mode == "counterfactual":
                surrogate = _surrogate_or_409(b)
                cf = counterfactual_score(sel, b.frequencies, y, graphlet, surrogate, state.catalog)
            r = representatives(sel, b.frequencies, y, graphlet, mode, cf_score=cf)
        except ValueError as exc:
            raise HTTPException(400, str(exc))
        return {
            "selection": sid,
            "mode": mode,
            "graphlet": graphlet,
            "top": {"graph_id": r.top, "rule": r.top_rule},
            "bottom": {"graph_id": r.bottom, "rule": r.bottom_rule},
        }

    # -- layouts --------------------------------------------------------------

    @app.get("/api/graphs/{graph_id}/layout")
    def graph_layout(graph_id: int, highlight: int | None = None, dataset: str | None = None):
        did = dataset or state.active_dataset
        if did is None:
            raise HTTPException(400, "no active dataset; pass ?dataset=")
        b = state.bundle(did)
        if not 0 <= graph_id < len(b.dataset):
            raise HTTPException(404, f"unknown graph id {graph_id}")
        if highlight is not None and not 0 <= highlight < N_GRAPHLETS:
            raise HTTPException(404, f"graphlet index {highlight} out of range")
        g = b.dataset.graphs[graph_id]
        lg = layout_graph(
            g, catalog=state.catalog, highlight=highlight, seed=config.layout_seed
        )
        return {
            "graph_id": graph_id,
            "dataset": did,
            "label": g.label,
            "nodes": [
                {"id": i, "x": float(x), "y": float(y)} for i, (x, y) in enumerate(lg.positions)
            ],
            "edges": [[u, v] for (u, v) in lg.edges],
            "highlight": (
                {
                    "graphlet": highlight,
                    "nodes": list(lg.highlight_nodes),
                    "edges": [[u, v] for (u, v) in lg.highlight_edges],
                }
                if highlight is not None
                else None
            ),
        }

    @app.get("/api/catalog")
    def catalog_table():
        return [
            {
                "index": g.index,
                "n_nodes": g.n_nodes,
                "n_edges": g.n_edges,
                "name": g.name,
                "edges": [[u, v] for (u, v) in g.edges],
            }
            for g in state.catalog.graphlets
        ]

    return app
