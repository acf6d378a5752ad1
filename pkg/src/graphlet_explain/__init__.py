"""Graphlet-census surrogate explanations for graph classifiers.

The pipeline: summarize each graph as a 29-D vector of connected 3/4/5
node graphlet frequencies, train a small graph convolutional classifier,
approximate it with an encoder-decoder surrogate over the frequency
vectors, and score every graphlet's relevance to the classifier's
behavior on any analyst-chosen group of graphs, factually (rank
correlation) and counterfactually (frequency-space removal).
"""

from .catalog import GraphletCatalog, build_catalog, canonical_form
from .census import CensusResult, census, census_dataset, enumerate_connected, sample_connected
from .estimators import GraphletCensus
from .explain import (
    CounterfactualScore,
    FactualScore,
    Selection,
    class_histograms,
    counterfactual_score,
    factual_score,
    perturb,
    project,
    rank_graphlets,
    representatives,
    select_group,
    spearman,
)
from .gcn import GcnClassifier, TrainReport
from .generators import BaHouseConfig, generate_ba_house
from .graphs import (
    Dataset,
    Graph,
    degree_onehot,
    filter_by_node_count,
    load_dataset_json,
    load_tu_dataset,
    save_dataset_json,
    save_tu_dataset,
)
from .surrogate import GraphletSurrogate, SurrogateReport

__version__ = "0.1.0"

__all__ = [
    "BaHouseConfig",
    "CensusResult",
    "CounterfactualScore",
    "Dataset",
    "FactualScore",
    "GcnClassifier",
    "Graph",
    "GraphletCatalog",
    "GraphletCensus",
    "GraphletSurrogate",
    "Selection",
    "SurrogateReport",
    "TrainReport",
    "build_catalog",
    "canonical_form",
    "census",
    "census_dataset",
    "class_histograms",
    "counterfactual_score",
    "degree_onehot",
    "enumerate_connected",
    "factual_score",
    "filter_by_node_count",
    "generate_ba_house",
    "load_dataset_json",
    "load_tu_dataset",
    "perturb",
    "project",
    "rank_graphlets",
    "representatives",
    "sample_connected",
    "save_dataset_json",
    "save_tu_dataset",
    "select_group",
    "spearman",
]
