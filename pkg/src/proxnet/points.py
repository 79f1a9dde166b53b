"""Node placements: turn a mesh or region into an ordered set of 2-d points."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mesh import PopulationMesh


@dataclass(frozen=True)
class PointSet:
    """An ordered set of distinct 2-d points. Node ids are array positions."""

    points: np.ndarray
    provenance: str = "external"
    seed: int | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] == 0:
            raise ValueError("points must be a non-empty (n, 2) array")
        if not np.isfinite(pts).all():
            raise ValueError("points must be finite")
        if len(np.unique(pts, axis=0)) != len(pts):
            raise ValueError("points must be pairwise distinct")
        if self.provenance not in ("pop", "inv", "uni", "lattice", "external"):
            raise ValueError(f"unknown provenance {self.provenance!r}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]


def _ranked_cells(mesh: PopulationMesh) -> np.ndarray:
    """Nonzero cells as (row, col) rows in the canonical ranking: descending
    population, ties ascending (row, col). Population and inverse placements
    read this one ranking from opposite ends, which keeps their selections
    disjoint whenever 2n does not exceed the nonzero-cell count."""
    cells = mesh.nonzero_cells()
    pops = mesh.pop[cells[:, 0], cells[:, 1]]
    order = np.lexsort((cells[:, 1], cells[:, 0], -pops))
    return cells[order]


def _centers(mesh: PopulationMesh, cells: np.ndarray) -> np.ndarray:
    xs = (cells[:, 1] + 0.5) * mesh.cell_size
    ys = (cells[:, 0] + 0.5) * mesh.cell_size
    return np.column_stack([xs, ys])


def _emit(mesh: PopulationMesh, sel: np.ndarray, provenance: str,
          seed: int | None) -> PointSet:
    # With a seed, emit the selected cells in shuffled order so node ids carry
    # no population-rank gradient; id-based tie-breaking downstream (attacks
    # remove the smallest id among equals) then treats every placement alike.
    # Without a seed the selection order itself is emitted.
    if seed is not None:
        sel = sel[np.random.default_rng(seed).permutation(len(sel))]
    return PointSet(_centers(mesh, sel), provenance=provenance, seed=seed)


def place_population(mesh: PopulationMesh, n: int, seed: int | None = None) -> PointSet:
    """Centers of the n most populated cells (the top of the ranking).

    The emitted order is a seeded shuffle of the selection (descending
    population when seed is None).
    """
    cells = _ranked_cells(mesh)
    if n <= 0:
        raise ValueError("n must be positive")
    if n > len(cells):
        raise ValueError(f"n={n} exceeds the {len(cells)} populated cells")
    return _emit(mesh, cells[:n], "pop", seed)


def place_inverse(mesh: PopulationMesh, n: int, seed: int | None = None) -> PointSet:
    """Centers of the n least populated nonzero cells (the bottom of the
    ranking, read upward).

    The emitted order is a seeded shuffle of the selection (ascending
    population when seed is None).
    """
    cells = _ranked_cells(mesh)
    if n <= 0:
        raise ValueError("n must be positive")
    if n > len(cells):
        raise ValueError(f"n={n} exceeds the {len(cells)} populated cells")
    return _emit(mesh, cells[len(cells) - n:][::-1], "inv", seed)


def place_uniform(region: tuple[float, float, float, float], n: int, seed: int,
                  snap_cell_size: float | None = None) -> PointSet:
    """n points uniform over region (x0, y0, x1, y1), exact duplicates resampled.

    With snap_cell_size set, coordinates snap to the centers of a square grid
    of that pitch anchored at (x0, y0); snapped collisions are resampled too.
    """
    x0, y0, x1, y1 = (float(v) for v in region)
    if not (x1 > x0 and y1 > y0):
        raise ValueError(f"degenerate region {region}")
    if n <= 0:
        raise ValueError("n must be positive")
    if snap_cell_size is not None and snap_cell_size <= 0:
        raise ValueError("snap_cell_size must be positive")
    rng = np.random.default_rng(seed)

    def draw(k):
        pts = rng.uniform([x0, y0], [x1, y1], size=(k, 2))
        if snap_cell_size is not None:
            s = snap_cell_size
            pts[:, 0] = x0 + (np.floor((pts[:, 0] - x0) / s) + 0.5) * s
            pts[:, 1] = y0 + (np.floor((pts[:, 1] - y0) / s) + 0.5) * s
        return pts

    pts = draw(n)
    # resample exact duplicates until all points are distinct
    for _ in range(1000):
        _, first = np.unique(pts, axis=0, return_index=True)
        dup = np.setdiff1d(np.arange(n), first)
        if len(dup) == 0:
            break
        pts[dup] = draw(len(dup))
    else:
        raise ValueError("could not draw distinct points (region too coarse for n)")
    return PointSet(pts, provenance="uni", seed=seed)


def lattice_points(side: int, spacing: float = 1.0) -> PointSet:
    """side x side square lattice, row-major ids: id i*side + j at (j, i) * spacing."""
    if side <= 0:
        raise ValueError("side must be positive")
    if spacing <= 0:
        raise ValueError("spacing must be positive")
    jj, ii = np.meshgrid(np.arange(side), np.arange(side))
    pts = np.column_stack([jj.ravel() * spacing, ii.ravel() * spacing])
    return PointSet(pts, provenance="lattice", seed=None)


def save_points(ps: PointSet, path) -> None:
    """Write the point CSV: header id,x,y then one row per node in id order."""
    out = ["id,x,y"]
    for i, (x, y) in enumerate(ps.points):
        out.append(f"{i},{repr(float(x))},{repr(float(y))}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")


def load_points(path) -> PointSet:
    with open(path, encoding="utf-8", newline="") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != "id,x,y":
        raise ValueError(f"line 1: expected header 'id,x,y' in {path}")
    pts = []
    for ln, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise ValueError(f"line {ln}: expected 'id,x,y' row, got {line!r}")
        try:
            i, x, y = int(parts[0]), float(parts[1]), float(parts[2])
        except ValueError:
            raise ValueError(f"line {ln}: malformed row {line!r}") from None
        if i != len(pts):
            raise ValueError(f"line {ln}: ids must run 0..n-1 in order, got {i}")
        pts.append((x, y))
    if not pts:
        raise ValueError("point file holds no points")
    return PointSet(np.array(pts, dtype=np.float64))
