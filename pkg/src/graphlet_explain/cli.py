"""Batch command line entry points for the full pipeline.

Every subcommand is deterministic given its flags and seed, writes
artifacts atomically (temp file + rename), and exits 0 on success, 1 on
a validation problem (bad inputs, missing files, unmet preconditions)
and 2 on unexpected runtime failure.
"""

from __future__ import annotations

import json
import os
import sys
import tempfile
from pathlib import Path

import click
import numpy as np

from .catalog import build_catalog
from .census import CensusResult, census_dataset
from .explain import (
    Selection,
    project,
    rank_graphlets,
    representatives,
    select_group,
)
from .gcn import GcnClassifier
from .generators import BaHouseConfig, generate_ba_house
from .graphs import load_dataset_json, dataset_to_dict
from .surrogate import GraphletSurrogate

__all__ = ["main"]


class ValidationFailure(click.ClickException):
    exit_code = 1


class RuntimeFailure(click.ClickException):
    exit_code = 2


def _atomic_write(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_json(path: str, what: str) -> dict | list:
    p = Path(path)
    if not p.exists():
        raise ValidationFailure(f"{what} file not found: {path}")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ValidationFailure(f"{what} file {path} is not valid JSON: {exc}")


def _guard(fn, *args, **kwargs):
    """Map domain errors to exit code 1 and the rest to exit code 2."""
    try:
        return fn(*args, **kwargs)
    except click.ClickException:
        raise
    except (ValueError, FileNotFoundError, KeyError) as exc:
        raise ValidationFailure(str(exc))
    except Exception as exc:
        raise RuntimeFailure(f"{type(exc).__name__}: {exc}")


@click.group()
def main():
    """Graphlet-census surrogate explanations for graph classifiers."""


@main.command("gen-bahouse")
@click.option("--n-graphs", default=300, show_default=True)
@click.option("--node-range", nargs=2, type=int, default=(10, 40), show_default=True)
@click.option("--houses-range", nargs=2, type=int, default=(2, 10), show_default=True)
@click.option("--attachment", "-m", default=2, show_default=True, help="BA edges per new node.")
@click.option("--seed", default=0, show_default=True)
@click.option("--out", required=True, type=click.Path())
def gen_bahouse(n_graphs, node_range, houses_range, attachment, seed, out):
    """Generate the synthetic BA-House dataset."""

    def run():
        cfg = BaHouseConfig(
            n_graphs=n_graphs,
            node_range=tuple(node_range),
            houses_range=tuple(houses_range),
            ba_attachment=attachment,
            seed=seed,
        )
        ds = generate_ba_house(cfg)
        _atomic_write(out, json.dumps(dataset_to_dict(ds), indent=2) + "\n")
        click.echo(f"wrote {len(ds)} graphs to {out}")

    _guard(run)


@main.command("census")
@click.option("--dataset", required=True, type=click.Path())
@click.option("--mode", type=click.Choice(["exhaustive", "sample", "auto"]), default="auto",
              show_default=True)
@click.option("--samples", default=20000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--exhaustive-max-nodes", default=120, show_default=True)
@click.option("--out", required=True, type=click.Path())
def census_cmd(dataset, mode, samples, seed, exhaustive_max_nodes, out):
    """Compute 29-D graphlet frequency vectors for every graph."""

    def run():
        ds = load_dataset_json_checked(dataset)
        catalog = build_catalog()
        mapped = {"sample": "sampled"}.get(mode, mode)
        results = census_dataset(
            ds.graphs, catalog, mode=mapped, samples=samples, seed=seed,
            exhaustive_max_nodes=exhaustive_max_nodes,
        )
        _atomic_write(out, json.dumps([r.to_dict() for r in results]) + "\n")
        click.echo(f"wrote census of {len(results)} graphs to {out}")

    _guard(run)


@main.command("train-gcn")
@click.option("--dataset", required=True, type=click.Path())
@click.option("--epochs", default=200, show_default=True)
@click.option("--learning-rate", default=1e-3, show_default=True)
@click.option("--train-fraction", default=1.0, show_default=True)
@click.option("--degree-cap", default=None, type=int)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", required=True, type=click.Path())
def train_gcn(dataset, epochs, learning_rate, train_fraction, degree_cap, seed, out):
    """Train the graph convolutional classifier; writes a checkpoint."""

    def run():
        ds = load_dataset_json_checked(dataset)
        ds.require_both_classes()
        clf = GcnClassifier(
            epochs=epochs,
            learning_rate=learning_rate,
            train_fraction=train_fraction,
            degree_cap=degree_cap,
            seed=seed,
        )
        clf.fit(list(ds.graphs))
        _atomic_write(out, json.dumps(clf.to_dict()) + "\n")
        click.echo(f"accuracy {clf.report_.accuracy:.4f}; checkpoint at {out}")

    _guard(run)


@main.command("train-surrogate")
@click.option("--dataset", required=True, type=click.Path())
@click.option("--census", "census_path", required=True, type=click.Path())
@click.option("--gcn", "gcn_path", required=True, type=click.Path())
@click.option("--steps", default=5000, show_default=True)
@click.option("--learning-rate", default=1e-3, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", required=True, type=click.Path())
def train_surrogate(dataset, census_path, gcn_path, steps, learning_rate, seed, out):
    """Train the frequency-vector surrogate against a trained classifier."""

    def run():
        ds = load_dataset_json_checked(dataset)
        F = _census_matrix(census_path, len(ds))
        gcn = GcnClassifier.from_dict(_load_json(gcn_path, "classifier checkpoint"))
        graphs = list(ds.graphs)
        probs = gcn.predict_proba(graphs)
        embeddings = gcn.embed(graphs)
        sur = GraphletSurrogate(steps=steps, learning_rate=learning_rate, seed=seed)
        sur.fit(F, embeddings, probs, gcn.head_weight_.data, gcn.head_bias_.data)
        _atomic_write(out, json.dumps(sur.to_dict()) + "\n")
        click.echo(
            f"cosine similarity {sur.report_.cosine_similarity:.4f}; checkpoint at {out}"
        )

    _guard(run)


@main.command("explain")
@click.option("--dataset", required=True, type=click.Path())
@click.option("--census", "census_path", required=True, type=click.Path())
@click.option("--gcn", "gcn_path", required=True, type=click.Path())
@click.option("--surrogate", "surrogate_path", default=None, type=click.Path())
@click.option("--selection", "selection_path", default=None, type=click.Path(),
              help="JSON: either {graph_ids: [...]} or {threshold, direction, polygon, brushes}.")
@click.option("--mode", type=click.Choice(["factual", "counterfactual"]), default="factual",
              show_default=True)
@click.option("--out", required=True, type=click.Path())
def explain_cmd(dataset, census_path, gcn_path, surrogate_path, selection_path, mode, out):
    """Rank all 29 graphlets for a selection and pick representatives."""

    def run():
        ds = load_dataset_json_checked(dataset)
        F = _census_matrix(census_path, len(ds))
        gcn = GcnClassifier.from_dict(_load_json(gcn_path, "classifier checkpoint"))
        surrogate = None
        if mode == "counterfactual":
            if surrogate_path is None:
                raise ValidationFailure("counterfactual mode requires --surrogate")
            surrogate = GraphletSurrogate.from_dict(
                _load_json(surrogate_path, "surrogate checkpoint")
            )
        catalog = build_catalog()
        graphs = list(ds.graphs)
        y = ds.labels
        probs = gcn.predict_proba(graphs)
        embeddings = gcn.embed(graphs)
        conf = probs[np.arange(len(y)), y]

        if selection_path is None:
            sel = Selection(tuple(range(len(graphs))), {"all": True})
        else:
            spec_sel = _load_json(selection_path, "selection")
            if "graph_ids" in spec_sel:
                sel = Selection(tuple(int(i) for i in spec_sel["graph_ids"]), {"explicit": True})
                bad = [i for i in sel.graph_ids if not 0 <= i < len(graphs)]
                if bad:
                    raise ValidationFailure(f"selection references unknown graph ids {bad}")
            else:
                points = project(F, embeddings, y, conf)
                brushes = spec_sel.get("brushes")
                if brushes is not None:
                    brushes = {int(c): tuple(r) for c, r in brushes.items()}
                sel = select_group(
                    points,
                    threshold=spec_sel.get("threshold"),
                    direction=spec_sel.get("direction", "higher"),
                    polygon=spec_sel.get("polygon"),
                    brushes=brushes,
                )
        if not sel.graph_ids:
            raise ValidationFailure("selection is empty")

        ids = np.asarray(sel.graph_ids)
        if mode == "factual":
            scores = rank_graphlets(sel, "factual", F, y, class_probs=probs[:, 1])
            ranking = [
                {
                    "graphlet": s.graphlet,
                    "name": catalog[s.graphlet].name,
                    "score": s.score,
                    "rho": s.rho,
                    "degenerate": s.degenerate,
                    "per_graph": [
                        {"id": int(i), "x": float(F[i, s.graphlet]), "y": float(probs[i, 1])}
                        for i in ids
                    ],
                }
                for s in scores
            ]
            top = scores[0]
            reps = representatives(sel, F, y, top.graphlet, "factual")
        else:
            scores = rank_graphlets(sel, "counterfactual", F, y, surrogate=surrogate, catalog=catalog)
            ranking = [
                {
                    "graphlet": s.graphlet,
                    "name": catalog[s.graphlet].name,
                    "score": s.score,
                    "total": s.total,
                    "per_graph": [
                        {"id": int(i), "x": float(F[i, s.graphlet]), "delta": float(d)}
                        for i, d in zip(ids, s.deltas)
                    ],
                }
                for s in scores
            ]
            top = scores[0]
            reps = representatives(sel, F, y, top.graphlet, "counterfactual", cf_score=top)

        report = {
            "dataset": ds.name,
            "mode": mode,
            "selection": {"graph_ids": list(sel.graph_ids), "provenance": sel.provenance},
            "ranking": ranking,
            "representatives": {
                "graphlet": reps.graphlet,
                "top": {"graph_id": reps.top, "rule": reps.top_rule},
                "bottom": {"graph_id": reps.bottom, "rule": reps.bottom_rule},
            },
        }
        _atomic_write(out, json.dumps(report, indent=2) + "\n")
        click.echo(f"wrote {mode} explanation report to {out}")

    _guard(run)


@main.command("report")
@click.option("--explanation", required=True, type=click.Path())
@click.option("--top", "top_k", default=10, show_default=True)
@click.option("--out", required=True, type=click.Path())
def report_cmd(explanation, top_k, out):
    """Render an explanation report as human-readable Markdown."""

    def run():
        rep = _load_json(explanation, "explanation report")
        mode = rep["mode"]
        lines = [
            f"# {mode.capitalize()} explanation for {rep['dataset']}",
            "",
            f"Selected graphs: {len(rep['selection']['graph_ids'])}",
            "",
            "| rank | graphlet | name | score |",
            "|-----:|---------:|------|------:|",
        ]
        for rank, entry in enumerate(rep["ranking"][:top_k], start=1):
            lines.append(
                f"| {rank} | {entry['graphlet']} | {entry['name']} | {entry['score']:.4f} |"
            )
        reps = rep["representatives"]
        lines += [
            "",
            f"Representatives for graphlet {reps['graphlet']}:",
            f"- top view: graph {reps['top']['graph_id']} ({reps['top']['rule']})",
            f"- bottom view: graph {reps['bottom']['graph_id']} ({reps['bottom']['rule']})",
            "",
        ]
        _atomic_write(out, "\n".join(lines))
        click.echo(f"wrote Markdown summary to {out}")

    _guard(run)


@main.command("serve")
@click.option("--config", "config_path", default=None, type=click.Path())
@click.option("--host", default=None)
@click.option("--port", default=None, type=int)
@click.option("--data-dir", default=None, type=click.Path())
@click.option("--artifact-dir", default=None, type=click.Path())
def serve_cmd(config_path, host, port, data_dir, artifact_dir):
    """Run the HTTP service for the interactive frontend."""

    def run():
        import uvicorn

        from .service import create_app, load_config

        cfg = load_config(config_path)
        if host is not None:
            cfg.host = host
        if port is not None:
            cfg.port = port
        if data_dir is not None:
            cfg.data_dir = data_dir
        if artifact_dir is not None:
            cfg.artifact_dir = artifact_dir
        app = create_app(cfg)
        uvicorn.run(app, host=cfg.host, port=cfg.port, log_level="warning")

    _guard(run)


def load_dataset_json_checked(path: str):
    p = Path(path)
    if not p.exists():
        raise ValidationFailure(f"dataset file not found: {path}")
    try:
        return load_dataset_json(p)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise ValidationFailure(f"dataset file {path} is invalid: {exc}")


def _census_matrix(path: str, n_graphs: int) -> np.ndarray:
    rows = _load_json(path, "census")
    if not isinstance(rows, list) or len(rows) != n_graphs:
        raise ValidationFailure(
            f"census file {path} must hold one entry per graph ({n_graphs}), got {len(rows)}"
        )
    results = [CensusResult.from_dict(r) for r in rows]
    return np.array([r.frequencies for r in results])


if __name__ == "__main__":
    sys.exit(main())
