"""Population meshes: regular grids of per-cell population counts.

A mesh is the spatial substrate that node placements draw from. Cells are
squares of side ``cell_size`` (meters); cell (i, j) covers
[j*cell_size, (j+1)*cell_size) x [i*cell_size, (i+1)*cell_size) and its
center sits at ((j + 0.5) * cell_size, (i + 0.5) * cell_size).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class MeshFormatError(ValueError):
    """Raised when a mesh CSV cannot be parsed."""


@dataclass(frozen=True)
class PopulationMesh:
    """A rows x cols grid of nonnegative integer population counts."""

    pop: np.ndarray
    cell_size: float = 500.0

    def __post_init__(self):
        pop = np.asarray(self.pop)
        if pop.ndim != 2 or pop.size == 0:
            raise ValueError("mesh population must be a non-empty 2-d array")
        if not np.issubdtype(pop.dtype, np.integer):
            if not np.all(pop == np.floor(pop)):
                raise ValueError("mesh populations must be integers")
        pop = pop.astype(np.int64)
        if (pop < 0).any():
            raise ValueError("mesh populations must be nonnegative")
        if not self.cell_size > 0:
            raise ValueError(f"cell_size must be positive, got {self.cell_size}")
        pop.setflags(write=False)
        object.__setattr__(self, "pop", pop)
        object.__setattr__(self, "cell_size", float(self.cell_size))

    @property
    def rows(self) -> int:
        return self.pop.shape[0]

    @property
    def cols(self) -> int:
        return self.pop.shape[1]

    def cell_center(self, row: int, col: int) -> tuple[float, float]:
        """Center coordinates (x, y) of cell (row, col)."""
        return ((col + 0.5) * self.cell_size, (row + 0.5) * self.cell_size)

    def frame(self) -> tuple[float, float, float, float]:
        """Bounding box (x0, y0, x1, y1) of the whole mesh."""
        return (0.0, 0.0, self.cols * self.cell_size, self.rows * self.cell_size)

    def nonzero_cells(self) -> np.ndarray:
        """(k, 2) array of (row, col) for populated cells, sorted by (row, col)."""
        rr, cc = np.nonzero(self.pop)
        return np.column_stack([rr, cc]).astype(np.int64)


def load_mesh(path) -> PopulationMesh:
    """Read a mesh CSV: header line ``rows,cols,cell_size`` then
    ``row,col,population`` lines. Cells not listed hold population 0."""
    with open(path, encoding="utf-8", newline="") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise MeshFormatError("line 1: empty mesh file")
    head = lines[0].split(",")
    if len(head) != 3:
        raise MeshFormatError(f"line 1: expected 'rows,cols,cell_size', got {lines[0]!r}")
    try:
        rows, cols, cell_size = int(head[0]), int(head[1]), float(head[2])
    except ValueError:
        raise MeshFormatError(f"line 1: malformed header {lines[0]!r}") from None
    if rows <= 0 or cols <= 0:
        raise MeshFormatError(f"line 1: mesh dimensions must be positive, got {rows}x{cols}")
    pop = np.zeros((rows, cols), dtype=np.int64)
    seen = set()
    for ln, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise MeshFormatError(f"line {ln}: expected 'row,col,population', got {line!r}")
        try:
            r, c, p = int(parts[0]), int(parts[1]), int(parts[2])
        except ValueError:
            raise MeshFormatError(f"line {ln}: malformed row {line!r}") from None
        if p < 0:
            raise MeshFormatError(f"line {ln}: negative population {p}")
        if not (0 <= r < rows and 0 <= c < cols):
            raise MeshFormatError(f"line {ln}: cell ({r},{c}) outside {rows}x{cols} mesh")
        if (r, c) in seen:
            raise MeshFormatError(f"line {ln}: duplicate cell ({r},{c})")
        seen.add((r, c))
        pop[r, c] = p
    return PopulationMesh(pop=pop, cell_size=cell_size)


def save_mesh(mesh: PopulationMesh, path) -> None:
    """Write the canonical mesh CSV: zero cells omitted, rows sorted by (row, col)."""
    out = [f"{mesh.rows},{mesh.cols},{repr(float(mesh.cell_size))}"]
    for r, c in mesh.nonzero_cells():
        out.append(f"{r},{c},{mesh.pop[r, c]}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")


# Concentration model internals. Rank noise is the standard deviation of the
# distance perturbation, as a fraction of max(rows, cols). A seeded fraction
# of cells is barren (think water, parkland, industry): pushed behind every
# ordinary cell in the ranking, so dense cores stay porous the way census
# rasters mix built-up and empty cells.
_CONC_RANK_NOISE = 0.03
_CONC_BARREN_FRAC = 0.375
_CONC_BARREN_PUSH = 4.0


def synthesize_mesh(rows: int, cols: int, total_population: int,
                    decay_rate: float, seed: int,
                    concentration: int = 0, cell_size: float = 500.0) -> PopulationMesh:
    """Generate a mesh whose rank-ordered cell populations decay exponentially.

    Rank r (r = 0 the largest) gets round(c * exp(-decay_rate * r)) people,
    with c chosen so the values sum to roughly ``total_population``. The
    ranked values are scattered uniformly over cells (seeded). With
    ``concentration`` > 0, that many attraction centers are drawn instead and
    ranks are laid out by noisy distance to the nearest center; a seeded
    fraction of barren cells is pushed to the tail of the ranking so dense
    cores stay porous. The rank-ordered value sequence is identical either way.
    """
    if rows <= 0 or cols <= 0:
        raise ValueError("mesh dimensions must be positive")
    if total_population <= 0:
        raise ValueError("total_population must be positive")
    if decay_rate < 0:
        raise ValueError("decay_rate must be nonnegative")
    k = rows * cols
    ranks = np.arange(k, dtype=np.float64)
    weights = np.exp(-decay_rate * ranks)
    values = np.rint(total_population * weights / weights.sum()).astype(np.int64)
    rng = np.random.default_rng(seed)
    if concentration <= 0:
        order = rng.permutation(k)
    else:
        # cells sorted by noisy distance to the nearest attraction center;
        # closest cell receives rank 0 (the largest population)
        scale = float(max(rows, cols))
        centers = rng.uniform([0, 0], [rows, cols], size=(concentration, 2))
        rr, cc = np.divmod(np.arange(k), cols)
        cells = np.column_stack([rr + 0.5, cc + 0.5]).astype(np.float64)
        d = np.sqrt(((cells[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)).min(axis=1)
        d += rng.normal(0.0, _CONC_RANK_NOISE * scale, size=k)
        barren = rng.random(k) < _CONC_BARREN_FRAC
        d[barren] += _CONC_BARREN_PUSH * scale
        order = np.argsort(d, kind="stable")
    pop = np.zeros(k, dtype=np.int64)
    pop[order] = values
    return PopulationMesh(pop=pop.reshape(rows, cols), cell_size=cell_size)
