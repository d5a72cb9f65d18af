"""Spectral toolkit for random group presentations.

Weighted multigraph random walk spectra, partite complex links, an
averaging-operator engine with a local spectral criterion, random
presentation models with exact word enumeration, certification of
fixed-point exponent ranges, and a seeded verification harness.
"""

from __future__ import annotations

import importlib

from ._version import __version__

# Imports stay lazy so the command line entry can pin BLAS threading
# before numpy initializes.
_EXPORTS = {
    "Bipartition": "graph_core",
    "GraphError": "graph_core",
    "IterationError": "graph_core",
    "SpectralReport": "graph_core",
    "WeightedMultigraph": "graph_core",
    "build_graph": "graph_core",
    "complete_bipartite_graph": "graph_core",
    "cycle_graph": "graph_core",
    "edge_space_cos_angle": "graph_core",
    "from_edge_list": "graph_core",
    "lambda_bipartite_direct": "graph_core",
    "random_bipartite_graph": "graph_core",
    "random_walk_spectrum": "graph_core",
    "strip_multi_edges": "graph_core",
    "to_edge_list": "graph_core",
    "union_graphs": "graph_core",
    "ComplexError": "partite_complex",
    "PartiteComplex": "partite_complex",
    "build_complex": "partite_complex",
    "complete_multipartite_complex": "partite_complex",
    "is_gallery_connected": "partite_complex",
    "link": "partite_complex",
    "random_tripartite_complex": "partite_complex",
    "ConvergenceError": "zuk_engine",
    "ConvergenceReport": "zuk_engine",
    "ZukVerdict": "zuk_engine",
    "admissible": "zuk_engine",
    "cos_angle": "zuk_engine",
    "iterate_to_limit": "zuk_engine",
    "project_nu": "zuk_engine",
    "t_matrix": "zuk_engine",
    "t_operator": "zuk_engine",
    "zuk_verdict": "zuk_engine",
    "DeskScaleError": "random_groups",
    "ModelParams": "random_groups",
    "Presentation": "random_groups",
    "count_cyclically_reduced": "random_groups",
    "count_wprime": "random_groups",
    "is_cyclically_reduced": "random_groups",
    "is_reduced": "random_groups",
    "phi_expand": "random_groups",
    "presentation_from_json": "random_groups",
    "rank_wprime": "random_groups",
    "sample_binomial": "random_groups",
    "sample_bprime": "random_groups",
    "sample_density": "random_groups",
    "sample_from_params": "random_groups",
    "sample_mplus": "random_groups",
    "unrank_wprime": "random_groups",
    "LinkDecomposition": "link_builder",
    "build_link": "link_builder",
    "Certificate": "certify",
    "certify_presentation": "certify",
    "confdim_bounds": "certify",
    "emit_bounds": "certify",
    "emit_bounds_mplus": "certify",
    "pmax_density": "certify",
    "pmax_from_lambda": "certify",
    "pmax_mplus": "certify",
    "reduction_params": "certify",
    "theta0_density": "certify",
    "theta0_mplus": "certify",
    "theta_bound": "certify",
    "zuk_threshold": "certify",
    "HarnessReport": "verify_harness",
    "TrialResult": "verify_harness",
    "verify_angle_convergence": "verify_harness",
    "verify_cos_equals_lambda": "verify_harness",
    "verify_degree_concentration": "verify_harness",
    "verify_deletion_lemma": "verify_harness",
    "verify_er_spectral": "verify_harness",
    "verify_mplus_link": "verify_harness",
    "verify_union_lemma": "verify_harness",
}

__all__ = ["__version__", *sorted(_EXPORTS)]


def __getattr__(name: str):
    module_name = _EXPORTS.get(name)
    if module_name is None:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
    module = importlib.import_module(f".{module_name}", __name__)
    return getattr(module, name)


def __dir__() -> list[str]:
    return sorted(__all__)
