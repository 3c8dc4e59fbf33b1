"""Undirected attributed graphs, file ingestion and edge flips."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Optional

import numpy as np
from scipy.sparse import csgraph, csr_matrix


class GraphError(ValueError):
    """Raised for malformed graphs, input files or invalid flips."""


class ParseError(GraphError):
    pass


class DimensionError(GraphError):
    pass


class FlipStateError(GraphError):
    pass


def _canon(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Flip:
    """Toggle of the edge ``(u, v)``; ``sign`` is +1 for insertion, -1 for deletion."""

    u: int
    v: int
    sign: int

    def __post_init__(self):
        if self.u == self.v:
            raise GraphError(f"flip endpoints must differ, got ({self.u}, {self.v})")
        if self.sign not in (1, -1):
            raise GraphError(f"flip sign must be +1 or -1, got {self.sign}")

    def reverse(self) -> "Flip":
        return Flip(self.u, self.v, -self.sign)

    def other(self, target: int) -> int:
        """Endpoint that is not ``target``."""
        return self.v if self.u == target else self.u

    def to_dict(self) -> dict:
        return {"u": self.u, "v": self.v, "sign": self.sign}


@dataclass(frozen=True)
class DegreeProfile:
    degrees: np.ndarray
    volume: int
    d_min: int


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph with optional features and labels.

    ``edges`` holds each undirected edge once as ``(min, max)``. ``origin`` maps
    the current vertex ids back to the ids of the graph the data was loaded
    from (identity unless a component was extracted).
    """

    n: int
    edges: frozenset
    X: Optional[np.ndarray] = None
    labels: Optional[np.ndarray] = None
    origin: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        if self.n < 0:
            raise GraphError("vertex count must be non-negative")
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < v < self.n):
                raise GraphError(f"edge ({u}, {v}) is not canonical or out of range for n={self.n}")
        if self.X is not None:
            X = np.array(self.X, dtype=float)
            if X.ndim != 2 or X.shape[0] != self.n:
                raise DimensionError(f"feature matrix has shape {X.shape}, expected ({self.n}, l)")
            X.setflags(write=False)
            object.__setattr__(self, "X", X)
        if self.labels is not None:
            y = np.array(self.labels, dtype=np.int64)
            if y.shape != (self.n,):
                raise DimensionError(f"label vector has shape {y.shape}, expected ({self.n},)")
            if y.size and y.min() < 0:
                raise GraphError("labels must be non-negative")
            y.setflags(write=False)
            object.__setattr__(self, "labels", y)
        origin = np.arange(self.n) if self.origin is None else np.array(self.origin, dtype=np.int64)
        origin.setflags(write=False)
        object.__setattr__(self, "origin", origin)

    @classmethod
    def from_edges(cls, n: int, pairs: Iterable[tuple[int, int]], X=None, labels=None) -> "Graph":
        return cls(n, frozenset(_canon(int(u), int(v)) for u, v in pairs), X, labels)

    @property
    def num_classes(self) -> int:
        if self.labels is None or self.labels.size == 0:
            return 0
        return int(self.labels.max()) + 1

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(x)) for x in nbrs)

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.array([len(x) for x in self.neighbors], dtype=np.int64)
        deg.setflags(write=False)
        return deg

    def has_edge(self, u: int, v: int) -> bool:
        return _canon(u, v) in self.edges

    def adjacency(self) -> np.ndarray:
        """Dense 0/1 adjacency matrix."""
        A = np.zeros((self.n, self.n))
        if self.edges:
            idx = np.array(sorted(self.edges))
            A[idx[:, 0], idx[:, 1]] = 1.0
            A[idx[:, 1], idx[:, 0]] = 1.0
        return A

    def sparse_adjacency(self) -> csr_matrix:
        if not self.edges:
            return csr_matrix((self.n, self.n))
        idx = np.array(sorted(self.edges))
        rows = np.concatenate([idx[:, 0], idx[:, 1]])
        cols = np.concatenate([idx[:, 1], idx[:, 0]])
        return csr_matrix((np.ones(rows.size), (rows, cols)), shape=(self.n, self.n))

    def with_features(self, X) -> "Graph":
        return Graph(self.n, self.edges, X, self.labels, self.origin)

    def with_labels(self, labels) -> "Graph":
        return Graph(self.n, self.edges, self.X, labels, self.origin)

    def with_edges(self, edges: frozenset) -> "Graph":
        return Graph(self.n, edges, self.X, self.labels, self.origin)

    def same_as(self, other: "Graph") -> bool:
        """Exact equality of vertex count, edges, features and labels."""

        def arr_eq(a, b):
            if a is None or b is None:
                return a is b
            return a.shape == b.shape and bool(np.array_equal(a, b))

        return (
            self.n == other.n
            and self.edges == other.edges
            and arr_eq(self.X, other.X)
            and arr_eq(self.labels, other.labels)
        )


def load_edge_list(path) -> Graph:
    """Read a whitespace-separated ``u v`` edge list.

    Duplicate and reversed pairs collapse to one undirected edge. The vertex
    count is one more than the largest id seen.
    """
    path = Path(path)
    edges = set()
    max_id = -1
    with path.open() as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 2:
                raise ParseError(f"{path}:{lineno}: expected two vertex ids, got {line.strip()!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(f"{path}:{lineno}: non-integer vertex id in {line.strip()!r}") from None
            if u < 0 or v < 0:
                raise ParseError(f"{path}:{lineno}: negative vertex id in {line.strip()!r}")
            if u == v:
                raise ParseError(f"{path}:{lineno}: self-loop on vertex {u}")
            edges.add(_canon(u, v))
            max_id = max(max_id, u, v)
    return Graph(max_id + 1, frozenset(edges))


def _read_csv_rows(path: Path) -> list[list[str]]:
    with path.open(newline="") as fh:
        return [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]


def load_features(path, graph: Graph) -> Graph:
    """Attach a comma-separated feature table with one row per vertex."""
    path = Path(path)
    rows = _read_csv_rows(path)
    if len(rows) != graph.n:
        raise DimensionError(f"{path}: {len(rows)} feature rows for a graph with {graph.n} vertices")
    width = len(rows[0])
    X = np.empty((graph.n, width))
    for i, row in enumerate(rows):
        if len(row) != width:
            raise DimensionError(f"{path}:{i + 1}: row has {len(row)} columns, expected {width}")
        try:
            X[i] = [float(c) for c in row]
        except ValueError:
            raise ParseError(f"{path}:{i + 1}: non-numeric cell in {row!r}") from None
    return graph.with_features(X)


def load_labels(path, graph: Graph) -> Graph:
    path = Path(path)
    values = []
    with path.open() as fh:
        for lineno, line in enumerate(fh, start=1):
            s = line.strip()
            if not s:
                continue
            try:
                y = int(s)
            except ValueError:
                raise ParseError(f"{path}:{lineno}: label {s!r} is not an integer") from None
            if y < 0:
                raise GraphError(f"{path}:{lineno}: negative label {y}")
            values.append(y)
    if len(values) != graph.n:
        raise DimensionError(f"{path}: {len(values)} labels for a graph with {graph.n} vertices")
    return graph.with_labels(np.array(values, dtype=np.int64))


def largest_connected_component(graph: Graph) -> Graph:
    """Induced subgraph on the largest component.

    Kept vertices are renumbered 0..m-1 in their original order; ties between
    equally large components go to the one containing the smallest vertex id.
    """
    if graph.n == 0:
        raise GraphError("graph has no vertices")
    _, comp = csgraph.connected_components(graph.sparse_adjacency(), directed=False)
    sizes = np.bincount(comp)
    # np.argmax picks the first maximum; component ids are ordered by first vertex
    keep = np.flatnonzero(comp == np.argmax(sizes))
    if keep.size == graph.n:
        return graph
    relabel = np.full(graph.n, -1, dtype=np.int64)
    relabel[keep] = np.arange(keep.size)
    edges = frozenset(
        (int(relabel[u]), int(relabel[v])) for u, v in graph.edges if relabel[u] >= 0
    )
    X = None if graph.X is None else graph.X[keep]
    labels = None if graph.labels is None else graph.labels[keep]
    return Graph(keep.size, edges, X, labels, graph.origin[keep])


def degree_profile(graph: Graph) -> DegreeProfile:
    deg = graph.degrees
    return DegreeProfile(
        degrees=deg,
        volume=int(deg.sum()),
        d_min=int(deg.min()) if deg.size else 0,
    )


def _check_no_isolated(graph: Graph) -> np.ndarray:
    deg = graph.degrees
    zero = np.flatnonzero(deg == 0)
    if zero.size:
        raise GraphError(f"vertex {int(zero[0])} has degree zero")
    return deg


def normalized_adjacency(graph: Graph) -> np.ndarray:
    """Dense ``D^{-1/2} A D^{-1/2}``."""
    deg = _check_no_isolated(graph)
    s = 1.0 / np.sqrt(deg)
    return graph.adjacency() * s[:, None] * s[None, :]


def apply_flip(graph: Graph, flip: Flip) -> Graph:
    return apply_flips(graph, [flip])


def apply_flips(graph: Graph, flips: Iterable[Flip]) -> Graph:
    """Return a new graph with every flip applied; the input is untouched."""
    edges = set(graph.edges)
    for f in flips:
        if not (0 <= f.u < graph.n and 0 <= f.v < graph.n):
            raise GraphError(f"flip ({f.u}, {f.v}) out of range for n={graph.n}")
        e = _canon(f.u, f.v)
        if f.sign == 1:
            if e in edges:
                raise FlipStateError(f"cannot insert existing edge {e}")
            edges.add(e)
        else:
            if e not in edges:
                raise FlipStateError(f"cannot delete absent edge {e}")
            edges.remove(e)
    return graph.with_edges(frozenset(edges))
