"""Regenerate the UI contract fixtures from a fixed BA-House session.

Spins the real service on a seeded dataset with pretrained artifacts and
snapshots the exact response bytes the UI tests compare against:

    python frontend/scripts/make_fixtures.py

Run from the repository root with the package installed.
"""

import json
import tempfile
from pathlib import Path

import numpy as np
from fastapi.testclient import TestClient

from graphlet_explain.catalog import build_catalog
from graphlet_explain.census import census_dataset
from graphlet_explain.gcn import GcnClassifier
from graphlet_explain.generators import BaHouseConfig, generate_ba_house
from graphlet_explain.graphs import save_dataset_json
from graphlet_explain.service import ServiceConfig, create_app
from graphlet_explain.surrogate import GraphletSurrogate

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

DATASET = "ba-fixed"
SEED = 2


def build_session(root: Path) -> TestClient:
    data_dir = root / "data"
    art_dir = root / "artifacts"
    data_dir.mkdir()
    art_dir.mkdir()
    ds = generate_ba_house(BaHouseConfig(n_graphs=40, node_range=(10, 16), seed=SEED))
    save_dataset_json(ds, data_dir / f"{DATASET}.json")
    catalog = build_catalog()
    census = census_dataset(ds.graphs, catalog)
    (art_dir / f"{DATASET}.census.json").write_text(json.dumps([r.to_dict() for r in census]))
    F = np.array([r.frequencies for r in census])
    clf = GcnClassifier(epochs=60, seed=0).fit(ds.graphs)
    clf.save(art_dir / f"{DATASET}.gcn.json")
    sur = GraphletSurrogate(steps=400, seed=0).fit(
        F,
        clf.report_.embeddings,
        clf.report_.probabilities,
        clf.head_weight_.data,
        clf.head_bias_.data,
    )
    sur.save(art_dir / f"{DATASET}.surrogate.json")
    cfg = ServiceConfig(data_dir=str(data_dir), artifact_dir=str(art_dir))
    return TestClient(create_app(cfg))


def snap(name: str, response) -> dict:
    assert response.status_code in (200, 201), (name, response.status_code, response.text)
    FIXTURES.joinpath(f"{name}.json").write_bytes(response.content)
    return response.json()


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        client = build_session(Path(tmp))
        snap("datasets", client.get("/api/datasets"))
        projection = snap("projection", client.get(f"/api/datasets/{DATASET}/projection"))

        # Mirror the UI flow exactly: the slider stage is always posted,
        # and the hull is drawn around the graphs that pass it.
        stage = {"threshold": 0.5, "direction": "higher"}
        all_sel = snap(
            "selection_all",
            client.post(f"/api/datasets/{DATASET}/selections", json=stage),
        )
        visible = [p for p in projection["points"] if p["confidence"] > stage["threshold"]]
        xs = [p["x"] for p in visible]
        ys = [p["y"] for p in visible]
        pad = 1e-6
        hull = [
            [min(xs) - pad, min(ys) - pad],
            [max(xs) + pad, min(ys) - pad],
            [max(xs) + pad, max(ys) + pad],
            [min(xs) - pad, max(ys) + pad],
        ]
        hull_sel = snap(
            "selection_hull",
            client.post(f"/api/datasets/{DATASET}/selections", json={**stage, "polygon": hull}),
        )
        assert hull_sel["graph_ids"] == all_sel["graph_ids"], "hull lasso must select everything"
        FIXTURES.joinpath("hull_polygon.json").write_text(json.dumps(hull))

        sid, hid = all_sel["id"], hull_sel["id"]
        factual = snap("ranking_factual", client.get(f"/api/selections/{sid}/ranking?mode=factual"))
        snap("ranking_counterfactual", client.get(f"/api/selections/{sid}/ranking?mode=counterfactual"))
        snap("ranking_factual_hull", client.get(f"/api/selections/{hid}/ranking?mode=factual"))

        top = factual["entries"][0]["graphlet"]
        snap("fidelity_factual", client.get(f"/api/selections/{sid}/graphlets/{top}/fidelity?mode=factual"))
        snap(
            "fidelity_counterfactual",
            client.get(f"/api/selections/{sid}/graphlets/{top}/fidelity?mode=counterfactual"),
        )
        snap("histogram", client.get(f"/api/selections/{sid}/graphlets/{top}/histogram?bins=10"))
        reps = snap(
            "representatives",
            client.get(f"/api/selections/{sid}/representatives?graphlet={top}&mode=factual"),
        )
        snap(
            "layout_top",
            client.get(f"/api/graphs/{reps['top']['graph_id']}/layout?highlight={top}&dataset={DATASET}"),
        )
        snap(
            "layout_bottom",
            client.get(
                f"/api/graphs/{reps['bottom']['graph_id']}/layout?highlight={top}&dataset={DATASET}"
            ),
        )
        meta = {"dataset": DATASET, "selection": sid, "hull_selection": hid, "top_graphlet": top}
        FIXTURES.joinpath("meta.json").write_text(json.dumps(meta, indent=2) + "\n")
    print(f"fixtures written to {FIXTURES}")


if __name__ == "__main__":
    main()
