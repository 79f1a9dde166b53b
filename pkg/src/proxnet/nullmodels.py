"""Null models: degree-preserving rewiring and relocation onto a square lattice."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph, degrees
from .points import lattice_points


@dataclass(frozen=True)
class RewireSpec:
    seed: int
    swaps_per_edge: int = 10

    def __post_init__(self):
        if self.swaps_per_edge < 0:
            raise ValueError("swaps_per_edge must be nonnegative")


@dataclass(frozen=True)
class RewireReport:
    attempted: int
    accepted: int
    rejected: int


def rewire_degree_preserving(g: Graph, spec: RewireSpec) -> tuple[Graph, RewireReport]:
    """Randomize link structure by double-edge swaps, keeping every degree.

    Attempts swaps_per_edge * M swaps of random edge pairs (u,v),(x,y) ->
    (u,x),(v,y); any swap that would create a self-loop or duplicate edge is
    skipped and counted. Coordinates stay put, so rewired links ignore
    geometry.
    """
    edges = g.edges()
    m = len(edges)
    if m < 2:
        return Graph.from_edges(g.coords, edges), RewireReport(0, 0, 0)
    rng = np.random.default_rng(spec.seed)
    n = g.n
    have = {int(u) * n + int(v) for u, v in edges}
    elist = [(int(u), int(v)) for u, v in edges]

    def key(a, b):
        return (a * n + b) if a < b else (b * n + a)

    attempts = spec.swaps_per_edge * m
    accepted = 0
    for _ in range(attempts):
        i, j = rng.integers(0, m, size=2)
        if i == j:
            continue
        u, v = elist[i]
        x, y = elist[j]
        if rng.integers(0, 2):
            x, y = y, x
        if u == x or v == y:
            continue
        k1, k2 = key(u, x), key(v, y)
        if k1 == k2 or k1 in have or k2 in have:
            continue
        have.discard(key(u, v))
        have.discard(key(x, y))
        have.add(k1)
        have.add(k2)
        elist[i] = (u, x) if u < x else (x, u)
        elist[j] = (v, y) if v < y else (y, v)
        accepted += 1
    out = Graph.from_edges(g.coords, np.array(sorted(elist), dtype=np.int64))
    return out, RewireReport(attempted=attempts, accepted=accepted,
                             rejected=attempts - accepted)


@dataclass(frozen=True)
class RelocationSpec:
    side: int
    seed: int
    spacing: float = 1.0

    def __post_init__(self):
        if self.side <= 0:
            raise ValueError("side must be positive")
        if self.spacing <= 0:
            raise ValueError("spacing must be positive")


@dataclass(frozen=True)
class RelocationReport:
    dropped_stubs: int
    long_link_count: int
    max_link_length: float


def relocate_to_lattice(g: Graph, spec: RelocationSpec) -> tuple[Graph, RelocationReport]:
    """Rebuild g's degree sequence on a side x side lattice.

    The degree sequence is permuted uniformly (seeded) onto the lattice
    sites as free stub counts. A first pass sweeps sites row-major, wiring
    each site's stubs to its East then South 4-neighborhood neighbor, so
    every first-pass link has length exactly one lattice spacing. A second
    pass repeatedly joins the two nearest non-adjacent sites that still hold
    free stubs (ties: smallest site index pair). Stubs that cannot be placed
    are dropped and reported.
    """
    n = g.n
    if spec.side * spec.side != n:
        raise ValueError(f"lattice of side {spec.side} has {spec.side**2} sites, "
                         f"graph has {n} nodes")
    side = spec.side
    rng = np.random.default_rng(spec.seed)
    deg = degrees(g)
    stubs = deg[rng.permutation(n)].astype(np.int64)

    edges: list[tuple[int, int]] = []
    have: set[int] = set()

    def add(a, b):
        edges.append((a, b) if a < b else (b, a))
        have.add(a * n + b if a < b else b * n + a)
        stubs[a] -= 1
        stubs[b] -= 1

    # first trial: 4-neighborhood links, East then South, row-major sweep
    for s in range(n):
        i, j = divmod(s, side)
        if j + 1 < side and stubs[s] > 0 and stubs[s + 1] > 0:
            add(s, s + 1)
        if i + 1 < side and stubs[s] > 0 and stubs[s + side] > 0:
            add(s, s + side)
    first_pass = len(edges)

    # second trial: nearest available pairs, regardless of distance
    cols = np.arange(n) % side
    rows = np.arange(n) // side
    while True:
        free = np.flatnonzero(stubs > 0)
        if len(free) < 2:
            break
        best = None
        for ai in range(len(free) - 1):
            a = int(free[ai])
            for bi in range(ai + 1, len(free)):
                b = int(free[bi])
                if (a * n + b) in have:
                    continue
                d2 = int((rows[a] - rows[b]) ** 2 + (cols[a] - cols[b]) ** 2)
                cand = (d2, a, b)
                if best is None or cand < best:
                    best = cand
        if best is None:
            break
        add(best[1], best[2])
    dropped = int(stubs.sum())

    coords = lattice_points(side, spec.spacing).points
    out = Graph.from_edges(coords, np.array(sorted(edges), dtype=np.int64).reshape(-1, 2))
    if edges:
        e = out.edges()
        d = coords[e[:, 0]] - coords[e[:, 1]]
        max_len = float(np.sqrt((d * d).sum(axis=1)).max())
    else:
        max_len = 0.0
    report = RelocationReport(dropped_stubs=dropped,
                              long_link_count=len(edges) - first_pass,
                              max_link_length=max_len)
    return out, report
