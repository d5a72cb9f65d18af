"""Finite pure n-dimensional partite simplicial complexes.

A complex is stored purely by its top cells; every lower simplex is
derived, so purity holds by construction.  Vertices carry a type in
{0..n} and every top cell uses each type exactly once.  Weights count
top-cell incidences scaled by (n-k)!, links of codimension-2 faces are
bipartite multigraphs, and gallery connectivity is adjacency of top
cells through shared codimension-1 faces.
"""

from __future__ import annotations

import math
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graph_core import WeightedMultigraph, build_graph


class ComplexError(ValueError):
    """Malformed complex or simplex outside the complex."""


@dataclass
class PartiteComplex:
    """Pure n-dimensional type-colored complex given by its top cells.

    Parameters
    ----------
    n : int
        Top dimension; every cell has n+1 vertices.
    vertex_types : tuple of int
        Type in {0..n} for each vertex index.
    cells : tuple of sorted vertex tuples
        The top cells, sorted, no duplicates, one vertex of each type.
    """

    n: int
    vertex_types: tuple[int, ...]
    cells: tuple[tuple[int, ...], ...]

    @property
    def vertex_count(self) -> int:
        return len(self.vertex_types)

    def cell_index(self) -> dict[tuple[int, ...], int]:
        return {c: i for i, c in enumerate(self.cells)}

    def type_of(self, face: Sequence[int]) -> tuple[int, ...]:
        """Sorted tuple of vertex types appearing in the face."""
        return tuple(sorted(self.vertex_types[v] for v in face))

    def faces_of_dim(self, k: int) -> list[tuple[int, ...]]:
        """All k-dimensional faces of top cells, sorted, deduplicated."""
        if not (0 <= k <= self.n):
            raise ComplexError(f"face dimension {k} outside [0, {self.n}]")
        seen: set[tuple[int, ...]] = set()
        for cell in self.cells:
            seen.update(_subsets(cell, k + 1))
        return sorted(seen)

    def weight(self, face: Sequence[int]) -> int:
        """m(face) = (n-k)! times the number of top cells containing it."""
        tau = tuple(sorted(face))
        if len(set(tau)) != len(tau):
            raise ComplexError(f"repeated vertex in face {tau}")
        count = sum(1 for cell in self.cells if set(tau) <= set(cell))
        if count == 0:
            raise ComplexError(f"{tau} is not a face of the complex")
        k = len(tau) - 1
        return math.factorial(self.n - k) * count

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "types": list(self.vertex_types),
            "cells": [list(c) for c in self.cells],
        }


def build_complex(
    n: int,
    vertex_types: Sequence[int],
    top_cells: Iterable[Sequence[int]],
) -> PartiteComplex:
    """Validate and canonicalize a partite complex.

    Cells are sorted internally and as a list; duplicates and cells with
    a repeated type are rejected.
    """
    if n < 1:
        raise ComplexError("dimension must be >= 1")
    types = tuple(int(t) for t in vertex_types)
    if any(t < 0 or t > n for t in types):
        raise ComplexError(f"vertex types must lie in 0..{n}")
    nv = len(types)
    cells: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    for raw in top_cells:
        cell = tuple(sorted(int(v) for v in raw))
        if len(cell) != n + 1:
            raise ComplexError(f"cell {cell} does not have {n + 1} vertices")
        if len(set(cell)) != n + 1:
            raise ComplexError(f"cell {cell} repeats a vertex")
        if any(v < 0 or v >= nv for v in cell):
            raise ComplexError(f"cell {cell} references unknown vertex")
        cell_types = sorted(types[v] for v in cell)
        if cell_types != list(range(n + 1)):
            raise ComplexError(f"cell {cell} is not partite (types {cell_types})")
        if cell in seen:
            raise ComplexError(f"duplicate cell {cell}")
        seen.add(cell)
        cells.append(cell)
    return PartiteComplex(n=n, vertex_types=types, cells=tuple(sorted(cells)))


def from_json_dict(data: dict) -> PartiteComplex:
    return build_complex(int(data["n"]), data["types"], data["cells"])


def _subsets(cell: tuple[int, ...], size: int) -> list[tuple[int, ...]]:
    # cells are short (n+1 vertices), itertools is fine
    from itertools import combinations

    return [tuple(c) for c in combinations(cell, size)]


def link_vertices(x: PartiteComplex, tau: Sequence[int]) -> tuple[int, ...]:
    """Original vertex ids of the link of tau, sorted."""
    t = tuple(sorted(tau))
    verts: set[int] = set()
    for cell in x.cells:
        if set(t) <= set(cell):
            verts.update(set(cell) - set(t))
    if not verts:
        raise ComplexError(f"{t} is not a face of the complex")
    return tuple(sorted(verts))


def link(x: PartiteComplex, tau: Sequence[int]) -> WeightedMultigraph:
    """Link of a codimension-2 face as a weighted multigraph.

    The graph lives on {v : tau + {v} is a face}; vertices are indexed
    locally in sorted original order, with labels recording the original
    ids.  Edge {u, w} has multiplicity equal to the number of top cells
    containing tau + {u, w} (0 or 1 for a simplicial complex).  For a
    partite complex the link is bipartite, colored by the two missing
    types.
    """
    t = tuple(sorted(tau))
    if len(t) != x.n - 1:
        raise ComplexError(
            f"link requires a face of dimension {x.n - 2}, got {len(t) - 1}"
        )
    if len(set(t)) != len(t):
        raise ComplexError(f"repeated vertex in face {t}")
    verts = link_vertices(x, t)
    local = {v: i for i, v in enumerate(verts)}
    tset = set(t)
    raw: list[tuple[int, int, int]] = []
    for cell in x.cells:
        if tset <= set(cell):
            u, w = sorted(set(cell) - tset)
            raw.append((local[u], local[w], 1))
    return build_graph(len(verts), raw, labels=[str(v) for v in verts])


def is_gallery_connected(x: PartiteComplex) -> bool:
    """True iff top cells form one chain class under shared (n-1)-faces."""
    if not x.cells:
        return False
    by_facet: dict[tuple[int, ...], list[int]] = defaultdict(list)
    for i, cell in enumerate(x.cells):
        for facet in _subsets(cell, x.n):
            by_facet[facet].append(i)
    seen = [False] * len(x.cells)
    seen[0] = True
    queue = deque([0])
    reached = 1
    while queue:
        i = queue.popleft()
        for facet in _subsets(x.cells[i], x.n):
            for j in by_facet[facet]:
                if not seen[j]:
                    seen[j] = True
                    reached += 1
                    queue.append(j)
    return reached == len(x.cells)


def complete_multipartite_complex(sizes: Sequence[int]) -> PartiteComplex:
    """All cells with one vertex per part; sizes[i] vertices of type i."""
    from itertools import product

    n = len(sizes) - 1
    types: list[int] = []
    parts: list[list[int]] = []
    offset = 0
    for t, s in enumerate(sizes):
        parts.append(list(range(offset, offset + s)))
        types.extend([t] * s)
        offset += s
    cells = [tuple(sorted(c)) for c in product(*parts)]
    return build_complex(n, types, cells)


def random_tripartite_complex(
    sizes: tuple[int, int, int],
    q: float,
    rng: np.random.Generator,
) -> PartiteComplex:
    """Random 2-complex on parts of the given sizes.

    Each of the a*b*c candidate triangles is included independently with
    probability q.
    """
    a, b, c = sizes
    types = [0] * a + [1] * b + [2] * c
    mask = rng.random((a, b, c)) < q
    cells = [
        (int(i), a + int(j), a + b + int(k))
        for i, j, k in zip(*np.nonzero(mask))
    ]
    return build_complex(2, types, cells)
