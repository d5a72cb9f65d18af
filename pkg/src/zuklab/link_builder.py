"""Bipartite link of the identity vertex for positive triangular presentations.

Each length-3 positive relator (i, j, k) contributes one edge to each of
three bipartite layers on the vertex set S union S^{-1}:
{s_j, s_i^{-1}} to the first, {s_k, s_j^{-1}} to the second and
{s_i, s_k^{-1}} to the third.  Repeated incidences accumulate edge
multiplicity.  By vertex transitivity of the Cayley action one link
suffices for certification.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph_core import WeightedMultigraph, build_graph, union_graphs
from .random_groups import Presentation


@dataclass
class LinkDecomposition:
    """The three relator-position layers and their union.

    Vertices 0..m-1 are the generators s_1..s_m, vertices m..2m-1 their
    inverses.  isolated lists vertices with no incident edge in the
    union (generators absent from every relator in that position).
    """

    m: int
    L1: WeightedMultigraph
    L2: WeightedMultigraph
    L3: WeightedMultigraph
    full: WeightedMultigraph
    labels: tuple[str, ...]
    isolated: tuple[int, ...]


def _vertex_labels(m: int) -> tuple[str, ...]:
    return tuple([f"s{i}" for i in range(1, m + 1)] + [f"s{i}^-1" for i in range(1, m + 1)])


def build_link(p: Presentation) -> LinkDecomposition:
    """Construct the link decomposition of a positive presentation.

    Requires positive_only with length-3 relators.  The union graph
    carries 3 * len(relators) edges counted with multiplicity.
    """
    if not p.positive_only:
        raise ValueError("link construction needs a positive presentation")
    m = p.alphabet_size
    labels = _vertex_labels(m)
    n = 2 * m

    def s_pos(i: int) -> int:
        return i - 1

    def s_inv(i: int) -> int:
        return m + i - 1

    raw1: list[tuple[int, int, int]] = []
    raw2: list[tuple[int, int, int]] = []
    raw3: list[tuple[int, int, int]] = []
    for rel in p.relators:
        if len(rel) != 3 or any(c < 1 for c in rel):
            raise ValueError(f"relator {rel} is not a positive triple")
        i, j, k = rel
        raw1.append((s_pos(j), s_inv(i), 1))
        raw2.append((s_pos(k), s_inv(j), 1))
        raw3.append((s_pos(i), s_inv(k), 1))
    L1 = build_graph(n, raw1, labels=labels)
    L2 = build_graph(n, raw2, labels=labels)
    L3 = build_graph(n, raw3, labels=labels)
    full = union_graphs([L1, L2, L3])
    weights = full.vertex_weights()
    isolated = tuple(int(v) for v in range(n) if weights[v] == 0)
    return LinkDecomposition(
        m=m, L1=L1, L2=L2, L3=L3, full=full, labels=labels, isolated=isolated
    )
