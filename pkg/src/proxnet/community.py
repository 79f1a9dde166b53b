"""Community structure and link-length composition measures."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, alive_count, alive_edge_count, degrees


@dataclass(frozen=True)
class Partition:
    """Node labels, dense 0-based community ids; excluded nodes hold -1."""

    labels: np.ndarray

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        used = np.unique(labels[labels >= 0])
        if len(used) and not np.array_equal(used, np.arange(len(used))):
            raise ValueError("community ids must be dense 0..C-1")
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    @property
    def n_communities(self) -> int:
        return int(self.labels.max()) + 1 if (self.labels >= 0).any() else 0

    def communities(self) -> list[set[int]]:
        out: dict[int, set[int]] = {}
        for node, lab in enumerate(self.labels):
            if lab >= 0:
                out.setdefault(int(lab), set()).add(node)
        return [out[c] for c in sorted(out)]

    @classmethod
    def from_communities(cls, n: int, groups) -> "Partition":
        labels = np.full(n, -1, dtype=np.int64)
        for c, group in enumerate(groups):
            for node in group:
                labels[node] = c
        return cls(labels)


def _alive_edges(g: Graph) -> np.ndarray:
    e = g.edges()
    if len(e) == 0:
        return e
    keep = g.alive[e[:, 0]] & g.alive[e[:, 1]]
    return e[keep]


def modularity(g: Graph, partition: Partition) -> float:
    """Q = (1/2M) sum_ij [A_ij - k_i k_j / 2M] delta(c_i, c_j) over alive nodes."""
    m = alive_edge_count(g)
    if m == 0:
        raise ValueError("modularity needs at least one edge")
    labels = partition.labels
    if (labels[g.alive] < 0).any():
        raise ValueError("partition must label every alive node")
    deg = degrees(g)
    ncomm = partition.n_communities
    intra = np.zeros(ncomm, dtype=np.float64)
    for u, v in _alive_edges(g):
        if labels[u] == labels[v]:
            intra[labels[u]] += 1.0
    dsum = np.zeros(ncomm, dtype=np.float64)
    for u in np.flatnonzero(g.alive):
        dsum[labels[u]] += deg[u]
    return float((intra / m - (dsum / (2.0 * m)) ** 2).sum())


def _louvain_level(adj, loop, k, m2, order):
    """One local-move phase. adj: list of dicts, loop: self weights (doubled
    internal weight), k: strengths. Returns (community array, moved flag)."""
    n = len(adj)
    comm = np.arange(n, dtype=np.int64)
    sig_tot = k.copy()
    moved_any = False
    while True:
        moved = False
        for u in order:
            cu = comm[u]
            ku = k[u]
            # weight from u to each neighboring community
            wc: dict[int, float] = {}
            for v, w in adj[u].items():
                wc[comm[v]] = wc.get(comm[v], 0.0) + w
            sig_tot[cu] -= ku
            base = wc.get(cu, 0.0) - ku * sig_tot[cu] / m2
            best_c, best_gain = cu, base
            for c in sorted(wc):
                if c == cu:
                    continue
                gain = wc[c] - ku * sig_tot[c] / m2
                if gain > best_gain + 1e-12:
                    best_c, best_gain = c, gain
            sig_tot[best_c] += ku
            if best_c != cu:
                comm[u] = best_c
                moved = True
                moved_any = True
        if not moved:
            break
    return comm, moved_any


def _aggregate(adj, loop, comm):
    labels = np.unique(comm)
    remap = {int(c): i for i, c in enumerate(labels)}
    nn = len(labels)
    new_adj = [dict() for _ in range(nn)]
    new_loop = np.zeros(nn, dtype=np.float64)
    for u in range(len(adj)):
        cu = remap[int(comm[u])]
        new_loop[cu] += loop[u]
        for v, w in adj[u].items():
            cv = remap[int(comm[v])]
            if cu == cv:
                new_loop[cu] += w
            else:
                new_adj[cu][cv] = new_adj[cu].get(cv, 0.0) + w
    return new_adj, new_loop, np.array([remap[int(c)] for c in comm], dtype=np.int64)


def louvain(g: Graph, seed: int) -> Partition:
    """Greedy two-phase modularity maximization at resolution 1.

    Local moves sweep nodes in a seeded shuffled order until no move helps,
    then communities collapse to nodes and the procedure repeats. Returns the
    final flat partition of the alive nodes.
    """
    part, _ = louvain_with_trace(g, seed)
    return part


def louvain_with_trace(g: Graph, seed: int) -> tuple[Partition, list[float]]:
    """louvain plus the Q value recorded after every level."""
    if alive_edge_count(g) == 0:
        raise ValueError("community detection needs at least one edge")
    rng = np.random.default_rng(seed)
    nodes = np.flatnonzero(g.alive)
    n_sub = len(nodes)
    pos = {int(u): i for i, u in enumerate(nodes)}
    adj = [dict() for _ in range(n_sub)]
    for u, v in _alive_edges(g):
        iu, iv = pos[int(u)], pos[int(v)]
        adj[iu][iv] = adj[iu].get(iv, 0.0) + 1.0
        adj[iv][iu] = adj[iv].get(iu, 0.0) + 1.0
    loop = np.zeros(n_sub, dtype=np.float64)
    k = np.array([loop[i] + sum(adj[i].values()) for i in range(n_sub)])
    m2 = float(k.sum())

    flat = np.arange(n_sub, dtype=np.int64)
    trace: list[float] = []
    while True:
        order = rng.permutation(len(adj))
        comm, moved = _louvain_level(adj, loop, k, m2, order)
        adj, loop, dense = _aggregate(adj, loop, comm)
        flat = dense[flat]
        k = np.array([loop[i] + sum(adj[i].values()) for i in range(len(adj))])
        trace.append(_q_of_levels(loop, k, m2))
        if not moved or len(adj) == 1:
            break

    labels = np.full(g.n, -1, dtype=np.int64)
    # dense relabel in order of first appearance by node id
    remap: dict[int, int] = {}
    for i, u in enumerate(nodes):
        c = int(flat[i])
        if c not in remap:
            remap[c] = len(remap)
        labels[u] = remap[c]
    return Partition(labels), trace


def _q_of_levels(loop, k, m2) -> float:
    """Q of the aggregated graph where each node is one community."""
    return float((loop / m2 - (k / m2) ** 2).sum())


def edge_weight_profile(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """Link-length weight classes of the alive subgraph.

    Lengths are normalized by the longest link, quantized to 9 decimals, and
    grouped by exact value. Returns (class weights ascending, class counts).
    """
    e = _alive_edges(g)
    if len(e) == 0:
        raise ValueError("weight profile needs at least one edge")
    d = g.coords[e[:, 0]] - g.coords[e[:, 1]]
    lengths = np.sqrt((d * d).sum(axis=1))
    w = np.round(lengths / lengths.max(), 9)
    classes, counts = np.unique(w, return_counts=True)
    return classes, counts.astype(np.int64)


def sparsity_index(g: Graph) -> float:
    """Weighted link-composition index in [0, 1]; higher means link weight
    mass sits in few classes relative to the n^2 possible links.

    With weights w_j ascending and counts f_j,
    SI = 1 - (1/(n^2 T1)) * sum_j w_j f_j (f_j + 2 sum_{l>j} f_l),
    T1 = sum_j w_j f_j.
    """
    w, f = edge_weight_profile(g)
    n = alive_count(g)
    f = f.astype(np.float64)
    t1 = float((w * f).sum())
    tail = np.concatenate([np.cumsum(f[::-1])[::-1][1:], [0.0]])
    s = float((w * f * (f + 2.0 * tail)).sum())
    return 1.0 - s / (n * n * t1)


def grid_like_ratio(g: Graph) -> float:
    """Fraction of alive nodes of degree 4 whose four alive neighbors all have
    degree 4 as well."""
    n = alive_count(g)
    if n == 0:
        raise ValueError("graph has no alive nodes")
    deg = degrees(g)
    count = 0
    for u in np.flatnonzero(g.alive):
        if deg[u] != 4:
            continue
        nb = g.neighbors(u)
        nb = nb[g.alive[nb]]
        if (deg[nb] == 4).all():
            count += 1
    return count / n


def save_partition(partition: Partition, path) -> None:
    """Write the partition CSV: header node,community; labeled nodes only."""
    out = ["node,community"]
    for node in np.flatnonzero(partition.labels >= 0):
        out.append(f"{node},{partition.labels[node]}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")


def load_partition(path, n: int | None = None) -> Partition:
    with open(path, encoding="utf-8", newline="") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != "node,community":
        raise ValueError(f"line 1: expected header 'node,community' in {path}")
    pairs = []
    for ln, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ValueError(f"line {ln}: expected 'node,community', got {line!r}")
        pairs.append((int(parts[0]), int(parts[1])))
    if not pairs:
        raise ValueError("partition file holds no rows")
    size = n if n is not None else max(p[0] for p in pairs) + 1
    labels = np.full(size, -1, dtype=np.int64)
    for node, c in pairs:
        labels[node] = c
    return Partition(labels)
