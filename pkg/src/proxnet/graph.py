"""Spatial graphs: immutable CSR adjacency over embedded nodes, plus an alive
mask so node removals replay in O(1) without rebuilding."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .points import PointSet


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph with node coordinates.

    coords: (n, 2) float64; indptr/indices: CSR adjacency with neighbor lists
    sorted ascending; alive: (n,) bool. Everything is read-only; derive a
    variant view with ``with_alive``.
    """

    coords: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    alive: np.ndarray

    def __post_init__(self):
        for name in ("coords", "indptr", "indices", "alive"):
            arr = getattr(self, name)
            arr.setflags(write=False)

    @classmethod
    def from_edges(cls, coords, edges) -> "Graph":
        """Build from an (m, 2) edge array. Rejects self-loops and duplicates."""
        coords = np.ascontiguousarray(coords, dtype=np.float64)
        if coords.ndim != 2 or coords.shape[1] != 2 or coords.shape[0] == 0:
            raise ValueError("coords must be a non-empty (n, 2) array")
        n = coords.shape[0]
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if len(edges):
            if edges.min() < 0 or edges.max() >= n:
                raise ValueError("edge endpoint outside 0..n-1")
            lo = edges.min(axis=1)
            hi = edges.max(axis=1)
            if (lo == hi).any():
                raise ValueError("self-loops are not allowed")
            canon = np.column_stack([lo, hi])
            keys = canon[:, 0] * n + canon[:, 1]
            if len(np.unique(keys)) != len(keys):
                raise ValueError("duplicate edges are not allowed")
            half = np.concatenate([canon, canon[:, ::-1]])
            order = np.lexsort((half[:, 1], half[:, 0]))
            half = half[order]
            indptr = np.zeros(n + 1, dtype=np.int64)
            np.add.at(indptr, half[:, 0] + 1, 1)
            indptr = np.cumsum(indptr)
            indices = np.ascontiguousarray(half[:, 1])
        else:
            indptr = np.zeros(n + 1, dtype=np.int64)
            indices = np.empty(0, dtype=np.int64)
        return cls(coords=coords, indptr=indptr, indices=indices,
                   alive=np.ones(n, dtype=bool))

    @classmethod
    def from_points(cls, ps: PointSet, edges) -> "Graph":
        return cls.from_edges(ps.points, edges)

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def edge_total(self) -> int:
        """Edge count ignoring the alive mask."""
        return len(self.indices) // 2

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def edges(self) -> np.ndarray:
        """(m, 2) array with u < v, sorted lexicographically. Ignores alive."""
        out = []
        for u in range(self.n):
            nb = self.neighbors(u)
            for v in nb[nb > u]:
                out.append((u, int(v)))
        return np.array(out, dtype=np.int64).reshape(-1, 2)

    def with_alive(self, alive) -> "Graph":
        alive = np.asarray(alive, dtype=bool).copy()
        if alive.shape != (self.n,):
            raise ValueError("alive mask must have one entry per node")
        return Graph(coords=self.coords, indptr=self.indptr,
                     indices=self.indices, alive=alive)


def alive_count(g: Graph) -> int:
    return int(g.alive.sum())


def degrees(g: Graph) -> np.ndarray:
    """Alive-restricted degree of every node; dead nodes report 0."""
    deg = np.zeros(g.n, dtype=np.int64)
    for u in range(g.n):
        if g.alive[u]:
            deg[u] = int(g.alive[g.neighbors(u)].sum())
    return deg


def alive_edge_count(g: Graph) -> int:
    return int(degrees(g).sum()) // 2


def average_degree(g: Graph) -> float:
    """Mean alive-restricted degree, 2M/n over alive nodes."""
    n = alive_count(g)
    if n == 0:
        raise ValueError("graph has no alive nodes")
    return 2.0 * alive_edge_count(g) / n


def degree_distribution(g: Graph) -> dict[int, int]:
    """Map degree -> count over alive nodes."""
    vals, counts = np.unique(degrees(g)[g.alive], return_counts=True)
    return {int(v): int(c) for v, c in zip(vals, counts)}


def components(g: Graph) -> list[set[int]]:
    """Connected components of the alive subgraph, largest first; equal sizes
    ordered by smallest member id."""
    labels = _kernels.component_labels(g.indptr, g.indices, g.alive)
    groups: dict[int, set[int]] = {}
    for node, lab in enumerate(labels):
        if lab >= 0:
            groups.setdefault(int(lab), set()).add(node)
    return sorted(groups.values(), key=lambda s: (-len(s), min(s)))


def betweenness(g: Graph) -> np.ndarray:
    """Shortest-path betweenness of every node, counting unordered pairs.

    Dead nodes score 0 and never appear on paths. Pairs with no connecting
    path contribute nothing.
    """
    return _kernels.betweenness_scores(g.indptr, g.indices, g.alive)


def save_edges(g: Graph, path) -> None:
    """Write the edge CSV: header u,v then one sorted u<v row per edge."""
    out = ["u,v"]
    for u, v in g.edges():
        out.append(f"{u},{v}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")


def load_edges(path) -> np.ndarray:
    """Read an edge CSV back into an (m, 2) int array."""
    with open(path, encoding="utf-8", newline="") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != "u,v":
        raise ValueError(f"line 1: expected header 'u,v' in {path}")
    edges = []
    for ln, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ValueError(f"line {ln}: expected 'u,v' row, got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValueError(f"line {ln}: malformed row {line!r}") from None
        if u >= v:
            raise ValueError(f"line {ln}: edges must satisfy u < v, got {u},{v}")
        edges.append((u, v))
    return np.array(edges, dtype=np.int64).reshape(-1, 2)
