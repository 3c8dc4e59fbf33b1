"""Seeded random graphs for tests, demos and the bundled dataset."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .graph import Graph


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.random((n, n)) < p, k=1)
    return Graph.from_edges(n, zip(*np.nonzero(upper)))


def stochastic_block_model(
    sizes,
    p_in: float,
    p_out: float,
    n_features: int = 8,
    feature_shift: float = 0.5,
    seed: int = 0,
) -> Graph:
    """Planted-partition graph with Gaussian features.

    Vertex features are ``N(mu_c, I)`` where ``mu_c`` equals ``feature_shift``
    on the coordinates ``j`` with ``j % num_blocks == c`` and zero elsewhere.
    """
    rng = np.random.default_rng(seed)
    labels = np.repeat(np.arange(len(sizes)), sizes)
    n = labels.size
    prob = np.where(labels[:, None] == labels[None, :], p_in, p_out)
    upper = np.triu(rng.random((n, n)) < prob, k=1)
    means = np.zeros((len(sizes), n_features))
    for c in range(len(sizes)):
        means[c, c::len(sizes)] = feature_shift
    X = means[labels] + rng.standard_normal((n, n_features))
    return Graph.from_edges(n, zip(*np.nonzero(upper)), X=X, labels=labels)


def write_dataset(graph: Graph, directory) -> dict:
    """Write ``edges.txt``, ``features.csv`` and ``labels.txt``; return the paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = {
        "edges": directory / "edges.txt",
        "features": directory / "features.csv",
        "labels": directory / "labels.txt",
    }
    with paths["edges"].open("w") as fh:
        for u, v in sorted(graph.edges):
            fh.write(f"{u} {v}\n")
    if graph.X is not None:
        np.savetxt(paths["features"], graph.X, delimiter=",", fmt="%.10g")
    if graph.labels is not None:
        np.savetxt(paths["labels"], graph.labels, fmt="%d")
    return paths


def bundled_dataset_dir() -> Path:
    """Directory of the packaged 200-vertex two-block demo graph."""
    return Path(__file__).parent / "data" / "sbm200"
