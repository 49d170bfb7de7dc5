"""Network depth: Projected Tukey depth of embedded networks.

Pipeline: a network's node distances (shortest paths or diffusion) are
embedded in R^p by multidimensional scaling, and every node receives the
projected Tukey depth of its point in the resulting cloud. The deepest node
is the network median; depth quantiles give central regions.
"""
from .graph import (Graph, GraphError, ParseStats, WeightTransform, apply_weight_transform,
                    from_edges, largest_connected_component, parse_edge_list,
                    parse_metadata, read_graph, serialize_edge_list)
from .metrics import (DistanceMatrix, HeatKernel, MetricSpec, UnreachableError,
                      average_diffusion_distance, compute_distance,
                      diffusion_distance_matrix, heat_kernel, rw_normalized_laplacian,
                      shortest_path_matrix)
from .embed import (Embedding, EmbeddingError, classical_mds, embed, nonmetric_smacof,
                    permutation_test_stress, scree_surface, smacof, stress_report, unfold)
from .depth import (DepthCell, DepthError, DepthPattern, DepthRegion, DepthSpace,
                    ScatterConfig, aggregate_depth, depth_contour_2d, depth_region,
                    depth_space, halfspace_depth_1d, median_nodes, network_depth,
                    ptd_point, scatter)
from .datasets import load_karate

__version__ = "0.1.0"
