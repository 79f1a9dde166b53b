"""Population-driven planar proximity networks: construction, attack
robustness, community structure, and null models."""

from .attack import (AttackCurve, AttackStrategy, critical_fraction,
                     load_curve, robustness_index, run_attack, save_curve,
                     second_peak_degenerate)
from .community import (Partition, edge_weight_profile, grid_like_ratio,
                        load_partition, louvain, louvain_with_trace,
                        modularity, save_partition, sparsity_index)
from .graph import (Graph, alive_count, alive_edge_count, average_degree,
                    betweenness, components, degree_distribution, degrees,
                    load_edges, save_edges)
from .mesh import (MeshFormatError, PopulationMesh, load_mesh, save_mesh,
                   synthesize_mesh)
from .nullmodels import (RelocationReport, RelocationSpec, RewireReport,
                         RewireSpec, relocate_to_lattice,
                         rewire_degree_preserving)
from .points import (PointSet, lattice_points, load_points, place_inverse,
                     place_population, place_uniform, save_points)
from .proximity import build_gg, build_rng, check_planar_embedding
from .experiments import (ExperimentConfig, ResultRecord, run_experiment,
                          stable_seed)
from .stats import (AnovaResult, PearsonResult, anova_oneway, pearson,
                    regularized_incomplete_beta)

__version__ = "0.1.0"
