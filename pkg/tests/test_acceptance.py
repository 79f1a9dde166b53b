"""Acceptance gate: one test per locked criterion, at the stated tolerance.

Shared heavy inputs (the 20-seed uniform graph suite, the synthetic-mesh
sweep) are module-scoped fixtures so each is built once.
"""
import time

import numpy as np
import pytest

import oracles
from proxnet.attack import AttackStrategy, critical_fraction, robustness_index, run_attack
from proxnet.community import grid_like_ratio
from proxnet.experiments import ExperimentConfig, run_experiment
from proxnet.graph import Graph, average_degree, betweenness, degrees
from proxnet.nullmodels import (RelocationSpec, RewireSpec, relocate_to_lattice,
                                rewire_degree_preserving)
from proxnet.points import PointSet, lattice_points, place_uniform
from proxnet.proximity import build_gg, build_rng, check_planar_embedding
from proxnet.stats import anova_oneway, pearson


@pytest.fixture(scope="module")
def uniform_suite():
    """20 seeded uniform placements at N=1024, both graph kinds."""
    t0 = time.monotonic()
    graphs = {}
    for seed in range(20):
        ps = place_uniform((0.0, 0.0, 1.0, 1.0), 1024, seed=seed)
        graphs[("rng", seed)] = build_rng(ps, method="auto")
        graphs[("gg", seed)] = build_gg(ps, method="auto")
    return graphs, time.monotonic() - t0


_SWEEP_CONFIG = ExperimentConfig(
    placements=("pop", "inv", "uni"),
    kinds=("rng", "gg"),
    sizes=(1024,),
    attacks=("rb", "id", "rf"),
    seeds=(0, 1, 2, 3, 4),
    mesh={"rows": 64, "cols": 64, "total_population": 1_000_000,
          "decay_rate": 0.0045, "concentration": 6},
    builder_method="auto",
    rf_replicates=10,
)


@pytest.fixture(scope="module")
def mesh_sweep(tmp_path_factory):
    out = tmp_path_factory.mktemp("sweep")
    t0 = time.monotonic()
    records, failures = run_experiment(_SWEEP_CONFIG, out)
    return records, failures, out, time.monotonic() - t0


def test_01_geometry_matches_literal_oracles():
    """100 random point sets (N <= 60): edge-for-edge oracle agreement,
    containment of the lune rule in the circle rule, planar embeddings."""
    t0 = time.monotonic()
    rng = np.random.default_rng(2026)
    for trial in range(100):
        n = int(rng.integers(4, 61))
        pts = rng.uniform(0, 100, size=(n, 2))
        ps = PointSet(pts)
        g_rng = build_rng(ps)
        g_gg = build_gg(ps)
        e_rng = [tuple(e) for e in g_rng.edges()]
        e_gg = [tuple(e) for e in g_gg.edges()]
        assert e_rng == oracles.rng_edges(pts), f"lune-rule mismatch, trial {trial}"
        assert e_gg == oracles.gg_edges(pts), f"circle-rule mismatch, trial {trial}"
        assert set(e_rng) <= set(e_gg), f"containment broken, trial {trial}"
        ok, pair = check_planar_embedding(g_gg)
        assert ok, f"crossing {pair}, trial {trial}"
    assert time.monotonic() - t0 < 60.0


def test_02_lattice_grid_ratio_exact():
    """32x32 lattice: grid_like_ratio is exactly 784/1024 for both kinds."""
    ps = lattice_points(32)
    for build in (build_rng, build_gg):
        g = build(ps, method="auto")
        assert grid_like_ratio(g) == 0.765625


def test_03_lattice_random_failure_threshold():
    """64x64 lattice under random failure, 20 seeds: mean q_c within 0.05
    of 0.4073."""
    t0 = time.monotonic()
    g = build_gg(lattice_points(64), method="auto")
    qcs = [critical_fraction(run_attack(g, AttackStrategy("rf", seed=s)))
           for s in range(20)]
    assert np.mean(qcs) == pytest.approx(0.4073, abs=0.05)
    assert time.monotonic() - t0 < 120.0


def test_04_uniform_attack_thresholds(uniform_suite):
    """Uniform N=1024, 20 seeds: mean q_c under random failure 0.205 (rng)
    and 0.365 (gg); under initial-degree attack 0.12 (rng) and 0.263 (gg);
    all within 0.05."""
    graphs, build_time = uniform_suite
    t0 = time.monotonic()
    want = {("rf", "rng"): 0.205, ("rf", "gg"): 0.365,
            ("id", "rng"): 0.12, ("id", "gg"): 0.263}
    for (atk, kind), target in want.items():
        qcs = []
        for seed in range(20):
            strat = AttackStrategy(atk, seed=seed if atk == "rf" else None)
            qcs.append(critical_fraction(run_attack(graphs[(kind, seed)], strat)))
        assert np.mean(qcs) == pytest.approx(target, abs=0.05), (atk, kind)
    assert build_time + time.monotonic() - t0 < 600.0


def test_05_uniform_average_degree(uniform_suite):
    """Uniform N=1024, 20 seeds: mean degree 2.50 +- 0.1 (rng) and
    3.86 +- 0.15 (gg)."""
    graphs, _ = uniform_suite
    k_rng = np.mean([average_degree(graphs[("rng", s)]) for s in range(20)])
    k_gg = np.mean([average_degree(graphs[("gg", s)]) for s in range(20)])
    assert k_rng == pytest.approx(2.50, abs=0.1)
    assert k_gg == pytest.approx(3.86, abs=0.15)


def test_06_betweenness_and_stats_oracles():
    """Betweenness equals path enumeration on 50 random graphs (n <= 30) to
    1e-9; correlation and variance analysis match reference formulas to 1e-6."""
    rng = np.random.default_rng(606)
    for trial in range(50):
        n = int(rng.integers(5, 31))
        p = rng.uniform(1.5, 4.0) / n
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                 if rng.random() < p]
        coords = rng.uniform(0, 10, size=(n, 2))
        g = Graph.from_edges(coords, np.array(edges, dtype=np.int64).reshape(-1, 2))
        want = oracles.betweenness_paths(n, edges)
        assert np.allclose(betweenness(g), want, atol=1e-9), f"trial {trial}"
    for trial in range(50):
        n = int(rng.integers(3, 50))
        x = rng.normal(size=n)
        y = 0.3 * x + rng.normal(scale=rng.uniform(0.2, 2.0), size=n)
        res = pearson(x, y)
        r_ref, p_ref = oracles.pearson_ref(x, y)
        assert res.r == pytest.approx(r_ref, abs=1e-6)
        assert res.p == pytest.approx(p_ref, abs=1e-6)
        k = int(rng.integers(2, 5))
        groups = [rng.normal(loc=rng.uniform(-1, 1), size=int(rng.integers(3, 15)))
                  for _ in range(k)]
        res = anova_oneway(groups)
        f_ref, p_ref, eta_ref = oracles.anova_ref(groups)
        assert res.f_stat == pytest.approx(f_ref, rel=1e-6, abs=1e-6)
        assert res.p == pytest.approx(p_ref, abs=1e-6)
        assert res.eta_squared == pytest.approx(eta_ref, abs=1e-6)


def test_07_null_model_contracts():
    """Rewiring preserves the exact degree sequence on 100 inputs; relocation
    loses exactly the reported dropped stubs; relocation with long links is
    non-planar on an N=1024 instance."""
    rng = np.random.default_rng(707)
    for trial in range(100):
        n = int(rng.integers(10, 80))
        p = rng.uniform(2.0, 5.0) / n
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                 if rng.random() < p]
        coords = rng.uniform(0, 10, size=(n, 2))
        g = Graph.from_edges(coords, np.array(edges, dtype=np.int64).reshape(-1, 2))
        rw, _ = rewire_degree_preserving(g, RewireSpec(seed=trial))
        assert degrees(rw).tolist() == degrees(g).tolist(), f"trial {trial}"
    for trial in range(30):
        side = int(rng.integers(4, 9))
        n = side * side
        p = rng.uniform(2.0, 6.0) / n
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                 if rng.random() < p]
        coords = rng.uniform(0, 10, size=(n, 2))
        g = Graph.from_edges(coords, np.array(edges, dtype=np.int64).reshape(-1, 2))
        out, report = relocate_to_lattice(g, RelocationSpec(side=side, seed=trial))
        deviation = int(degrees(g).sum()) - int(degrees(out).sum())
        assert deviation == report.dropped_stubs, f"trial {trial}"
    nonplanar = False
    for seed in range(3):
        ps = place_uniform((0.0, 0.0, 1.0, 1.0), 1024, seed=seed)
        g = build_gg(ps, method="auto")
        out, report = relocate_to_lattice(g, RelocationSpec(side=32, seed=seed))
        ok, _ = check_planar_embedding(out)
        if not ok and report.long_link_count > 0:
            nonplanar = True
            break
    assert nonplanar


def test_08_mesh_sweep_robustness_ordering(mesh_sweep):
    """Synthetic-mesh sweep at N=1024 over 5 seeds: (a) uniform placement is
    the most fragmentation-robust under recalculated-betweenness attack in
    both kinds, (b) modularity anti-correlates with that robustness, (c) the
    attack hierarchy R_rb < R_id < R_rf holds on every network."""
    records, failures, _, elapsed = mesh_sweep
    assert failures == []
    rb = [r for r in records if r.attack == "rb"]
    assert len(rb) == 3 * 2 * 5

    def mean_r(placement, kind):
        vals = [r.R for r in rb if r.placement == placement and r.kind == kind]
        assert len(vals) == 5
        return float(np.mean(vals))

    for kind in ("rng", "gg"):
        uni = mean_r("uni", kind)
        assert uni > mean_r("pop", kind), kind
        assert uni > mean_r("inv", kind), kind

    pooled = pearson([r.Q for r in rb], [r.R for r in rb])
    assert pooled.r < 0.0

    by_cell = {}
    for r in records:
        by_cell.setdefault((r.placement, r.kind, r.seed), {})[r.attack] = r.R
    assert len(by_cell) == 30
    for cell, rs in by_cell.items():
        assert rs["rb"] < rs["id"] < rs["rf"], (cell, rs)

    assert elapsed < 1800.0


def test_09_rerun_is_byte_identical(mesh_sweep, tmp_path):
    """The same config and seeds write a byte-identical results CSV."""
    _, _, first_out, _ = mesh_sweep
    run_experiment(_SWEEP_CONFIG, tmp_path)
    assert (tmp_path / "results.csv").read_bytes() == \
        (first_out / "results.csv").read_bytes()
