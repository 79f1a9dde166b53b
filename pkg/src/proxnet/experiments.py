"""Experiment orchestration: sweep placement x kind x size x attack x variant
x seed, measure robustness and structure, and write the result files.

Every cell is a pure function of the config plus its derived seed, so a rerun
of the same config writes byte-identical outputs. Cells run sequentially in
sorted key order; a failing cell is recorded and skipped, not fatal.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, asdict
from pathlib import Path

import numpy as np

from .attack import AttackStrategy, critical_fraction, robustness_index, run_attack, save_curve
from .community import grid_like_ratio, louvain, modularity, sparsity_index
from .graph import Graph, average_degree
from .mesh import PopulationMesh, load_mesh, synthesize_mesh
from .nullmodels import (RelocationSpec, RewireSpec, relocate_to_lattice,
                         rewire_degree_preserving)
from .points import lattice_points, place_inverse, place_population, place_uniform
from .proximity import build_gg, build_rng
from .stats import anova_oneway, pearson

_PLACEMENTS = ("pop", "inv", "uni", "lattice")
_KINDS = ("rng", "gg")
_ATTACKS = ("rb", "id", "rf")
_VARIANTS = ("original", "rewired", "relocated")

RESULT_HEADER = "placement,kind,n,attack,variant,seed,R,qc,Q,SI,grid_ratio,avg_degree,community_count"


def stable_seed(*parts) -> int:
    """Deterministic 64-bit seed from the given parts, stable across runs."""
    text = "|".join(str(p) for p in parts)
    return int.from_bytes(hashlib.sha256(text.encode("utf-8")).digest()[:8], "big")


@dataclass(frozen=True)
class ExperimentConfig:
    placements: tuple = ("uni",)
    kinds: tuple = ("rng", "gg")
    sizes: tuple = (1024,)
    attacks: tuple = ("rb", "id", "rf")
    variants: tuple = ("original",)
    seeds: tuple = (0,)
    mesh: dict | None = None
    builder_method: str = "auto"
    swaps_per_edge: int = 10
    snap_uniform: bool = False
    rf_replicates: int = 1

    def __post_init__(self):
        def norm(name, vals, allowed):
            vals = tuple(vals)
            if not vals:
                raise ValueError(f"{name} must not be empty")
            bad = [v for v in vals if v not in allowed]
            if bad:
                raise ValueError(f"unknown {name} {bad}; allowed: {allowed}")
            if len(set(vals)) != len(vals):
                raise ValueError(f"duplicate entries in {name}")
            return vals

        object.__setattr__(self, "placements", norm("placements", self.placements, _PLACEMENTS))
        object.__setattr__(self, "kinds", norm("kinds", self.kinds, _KINDS))
        object.__setattr__(self, "attacks", norm("attacks", self.attacks, _ATTACKS))
        object.__setattr__(self, "variants", norm("variants", self.variants, _VARIANTS))
        sizes = tuple(int(s) for s in self.sizes)
        if not sizes or any(s <= 0 for s in sizes):
            raise ValueError("sizes must be positive")
        object.__setattr__(self, "sizes", sizes)
        seeds = tuple(int(s) for s in self.seeds)
        if not seeds:
            raise ValueError("seeds must not be empty")
        object.__setattr__(self, "seeds", seeds)
        if self.builder_method not in ("auto", "literal", "delaunay"):
            raise ValueError(f"unknown builder_method {self.builder_method!r}")
        object.__setattr__(self, "rf_replicates", int(self.rf_replicates))
        if self.rf_replicates < 1:
            raise ValueError("rf_replicates must be >= 1")
        needs_square = "relocated" in self.variants or "lattice" in self.placements
        if needs_square:
            for s in sizes:
                side = math.isqrt(s)
                if side * side != s:
                    raise ValueError(
                        f"size {s} is not a perfect square, required by lattice "
                        f"placement and relocation")
        needs_mesh = any(p in ("pop", "inv") for p in self.placements)
        if needs_mesh and self.mesh is None:
            raise ValueError("pop/inv placements need a mesh (file or synthesis params)")
        if self.mesh is not None:
            keys = set(self.mesh)
            if "path" in keys:
                if keys != {"path"}:
                    raise ValueError("mesh: give either path or synthesis params, not both")
            else:
                required = {"rows", "cols", "total_population", "decay_rate"}
                optional = {"concentration", "cell_size"}
                if not required <= keys or not keys <= required | optional:
                    raise ValueError(
                        f"mesh synthesis params must be {sorted(required)} "
                        f"plus optional {sorted(optional)}, got {sorted(keys)}")

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        data = json.loads(text)
        if not isinstance(data, dict):
            raise ValueError("config must be a JSON object")
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys {sorted(unknown)}")
        return cls(**data)

    def to_json(self) -> str:
        data = asdict(self)
        for key in ("placements", "kinds", "sizes", "attacks", "variants", "seeds"):
            data[key] = list(data[key])
        return json.dumps(data, indent=2, sort_keys=True)


@dataclass(frozen=True)
class ResultRecord:
    placement: str
    kind: str
    n: int
    attack: str
    variant: str
    seed: int
    R: float
    qc: float
    Q: float
    SI: float
    grid_ratio: float
    avg_degree: float
    community_count: int

    def key(self):
        return (self.placement, self.kind, self.n, self.attack, self.variant, self.seed)

    def csv_row(self) -> str:
        return ",".join([self.placement, self.kind, str(self.n), self.attack,
                         self.variant, str(self.seed), repr(self.R), repr(self.qc),
                         repr(self.Q), repr(self.SI), repr(self.grid_ratio),
                         repr(self.avg_degree), str(self.community_count)])


def _mesh_for(config: ExperimentConfig, rep_seed: int) -> PopulationMesh | None:
    if config.mesh is None:
        return None
    if "path" in config.mesh:
        return load_mesh(config.mesh["path"])
    params = dict(config.mesh)
    return synthesize_mesh(rows=params["rows"], cols=params["cols"],
                           total_population=params["total_population"],
                           decay_rate=params["decay_rate"],
                           seed=stable_seed(rep_seed, "mesh"),
                           concentration=params.get("concentration", 0),
                           cell_size=params.get("cell_size", 500.0))


def _place(config, placement, mesh, n, cell_seed):
    if placement == "lattice":
        side = math.isqrt(n)
        spacing = mesh.cell_size if mesh is not None else 1.0
        return lattice_points(side, spacing)
    if placement == "uni":
        region = mesh.frame() if mesh is not None else (0.0, 0.0, 1.0, 1.0)
        snap = mesh.cell_size if (config.snap_uniform and mesh is not None) else None
        return place_uniform(region, n, stable_seed(cell_seed, "place"),
                             snap_cell_size=snap)
    if mesh is None:
        raise ValueError(f"placement {placement} needs a mesh")
    fn = place_population if placement == "pop" else place_inverse
    return fn(mesh, n, stable_seed(cell_seed, "place"))


def _build_variant(config, graph, variant, n, mesh, cell_seed):
    if variant == "original":
        return graph, None
    if variant == "rewired":
        spec = RewireSpec(seed=stable_seed(cell_seed, "rewire"),
                          swaps_per_edge=config.swaps_per_edge)
        out, report = rewire_degree_preserving(graph, spec)
        return out, None
    spec = RelocationSpec(side=math.isqrt(n), seed=stable_seed(cell_seed, "relocate"),
                          spacing=mesh.cell_size if mesh is not None else 1.0)
    out, report = relocate_to_lattice(graph, spec)
    return out, report


def run_experiment(config: ExperimentConfig, out_dir) -> tuple[list[ResultRecord], list[dict]]:
    """Run the full grid, write results under out_dir, return (records, failures)."""
    out = Path(out_dir)
    (out / "curves").mkdir(parents=True, exist_ok=True)
    records: list[ResultRecord] = []
    failures: list[dict] = []

    graph_cells = sorted(
        (placement, kind, n, variant, rep_idx)
        for placement in config.placements
        for kind in config.kinds
        for n in config.sizes
        for variant in config.variants
        for rep_idx in range(len(config.seeds)))

    for placement, kind, n, variant, rep_idx in graph_cells:
        rep_seed = config.seeds[rep_idx]
        cell_seed = stable_seed(rep_seed, placement, kind, n, variant, rep_idx)
        cell_name = f"{placement}-{kind}-{n}-{variant}-{rep_seed}"
        try:
            mesh = _mesh_for(config, rep_seed)
            points = _place(config, placement, mesh, n, cell_seed)
            builder = build_rng if kind == "rng" else build_gg
            graph = builder(points, method=config.builder_method)
            graph, reloc_report = _build_variant(config, graph, variant, n, mesh,
                                                 cell_seed)
            if reloc_report is not None:
                rp = out / "reports"
                rp.mkdir(exist_ok=True)
                with open(rp / f"{cell_name}.json", "w", encoding="utf-8",
                          newline="\n") as fh:
                    json.dump({"dropped_stubs": reloc_report.dropped_stubs,
                               "long_link_count": reloc_report.long_link_count,
                               "max_link_length": reloc_report.max_link_length},
                              fh, sort_keys=True)
                    fh.write("\n")
            part = louvain(graph, stable_seed(cell_seed, "louvain"))
            q_mod = modularity(graph, part)
            si = sparsity_index(graph)
            ratio = grid_like_ratio(graph)
            avg_deg = average_degree(graph)
            ncomm = part.n_communities
            for atk in config.attacks:
                strategy = AttackStrategy(atk, seed=stable_seed(cell_seed, "attack", atk))
                curve = run_attack(graph, strategy)
                save_curve(curve, out / "curves" / f"{cell_name}-{atk}.csv")
                r_val = robustness_index(curve)
                qc_val = critical_fraction(curve)
                if atk == "rf" and config.rf_replicates > 1:
                    # random failure is the one stochastic attack; average its
                    # metrics over extra seeded runs (first run keeps the
                    # schedule seed, so rf_replicates=1 reproduces old outputs)
                    rs, qcs = [r_val], [qc_val]
                    for t in range(1, config.rf_replicates):
                        extra = run_attack(graph, AttackStrategy(
                            "rf", seed=stable_seed(cell_seed, "attack", "rf", t)))
                        rs.append(robustness_index(extra))
                        qcs.append(critical_fraction(extra))
                    r_val = float(np.mean(rs))
                    qc_val = float(np.mean(qcs))
                records.append(ResultRecord(
                    placement=placement, kind=kind, n=n, attack=atk,
                    variant=variant, seed=rep_seed,
                    R=r_val, qc=qc_val,
                    Q=q_mod, SI=si, grid_ratio=ratio, avg_degree=avg_deg,
                    community_count=ncomm))
        except Exception as exc:  # cell failures must not kill the sweep
            failures.append({"cell": cell_name, "error": f"{type(exc).__name__}: {exc}"})

    records.sort(key=ResultRecord.key)
    _write_results(records, out / "results.csv")
    _write_scatters(records, out)
    _write_summary(records, failures, out / "summary.json")
    return records, failures


def _write_results(records, path) -> None:
    lines = [RESULT_HEADER] + [r.csv_row() for r in records]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _write_scatters(records, out: Path) -> None:
    for fname, xf, yf in (("scatter_q_vs_r.csv", "Q", "R"),
                          ("scatter_si_vs_r.csv", "SI", "R"),
                          ("scatter_si_vs_qc.csv", "SI", "qc")):
        lines = [f"placement,kind,n,attack,variant,seed,{xf},{yf}"]
        for r in records:
            lines.append(",".join([r.placement, r.kind, str(r.n), r.attack,
                                   r.variant, str(r.seed),
                                   repr(getattr(r, xf)), repr(getattr(r, yf))]))
        with open(out / fname, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")


def _write_summary(records, failures, path) -> None:
    """Correlations and placement ANOVA per (kind, attack), original variant."""
    summary: dict = {"failed_cells": failures, "correlations": {}, "anova": {}}
    orig = [r for r in records if r.variant == "original"]
    for kind in sorted({r.kind for r in orig}):
        for atk in sorted({r.attack for r in orig}):
            rows = [r for r in orig if r.kind == kind and r.attack == atk]
            if len(rows) < 3:
                continue
            key = f"{kind}:{atk}"
            cors = {}
            for label, xs, ys in (("Q_vs_R", [r.Q for r in rows], [r.R for r in rows]),
                                  ("SI_vs_R", [r.SI for r in rows], [r.R for r in rows]),
                                  ("SI_vs_qc", [r.SI for r in rows], [r.qc for r in rows])):
                try:
                    res = pearson(xs, ys)
                    cors[label] = {"r": res.r, "p": res.p, "n": res.n}
                except ValueError as exc:
                    cors[label] = {"error": str(exc)}
            summary["correlations"][key] = cors
            groups_r = {}
            groups_qc = {}
            for r in rows:
                groups_r.setdefault(r.placement, []).append(r.R)
                groups_qc.setdefault(r.placement, []).append(r.qc)
            anova = {}
            for label, groups in (("R_by_placement", groups_r),
                                  ("qc_by_placement", groups_qc)):
                cells = [groups[p] for p in sorted(groups)]
                if len(cells) >= 2 and all(len(c) >= 2 for c in cells):
                    try:
                        res = anova_oneway(cells)
                        f_val = res.f_stat if math.isfinite(res.f_stat) else "inf"
                        anova[label] = {"F": f_val, "p": res.p,
                                        "eta_squared": res.eta_squared,
                                        "degenerate": res.degenerate}
                    except ValueError as exc:
                        anova[label] = {"error": str(exc)}
            if anova:
                summary["anova"][key] = anova
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
