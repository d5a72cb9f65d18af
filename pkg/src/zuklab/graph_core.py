"""Weighted multigraphs and random-walk spectral computation.

The random walk operator acts on functions over vertices by weighted
neighbor averaging, with the weight of a vertex defined as the total
multiplicity of its incident edges.  Spectral quantities are computed
either densely, through the symmetrized matrix D^{-1/2} W D^{-1/2}
(same spectrum, by conjugation), or iteratively by power iteration with
deflation of the analytically known extremal eigenvectors.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp

DENSE_VERTEX_LIMIT = 2048
DEFAULT_DENSE_TOL = 1e-9
DEFAULT_ITERATIVE_TOL = 1e-6
_ITERATION_CAP = 200_000
_START_SEED = 0x5EED1


class GraphError(ValueError):
    """Malformed graph or violated spectral precondition."""


class IterationError(RuntimeError):
    """Iterative solver hit its cap; carries the best estimate so far."""

    def __init__(self, message: str, best_estimate: float, iterations: int):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.iterations = iterations


@dataclass
class WeightedMultigraph:
    """Finite multigraph with positive integer edge multiplicities.

    Parameters
    ----------
    vertex_count : int
        Number of vertices, indexed 0..vertex_count-1.
    edges : tuple of (u, v, mult)
        Canonicalized: u < v, each unordered pair appears once, mult >= 1.
    labels : tuple of str, optional
        Per-vertex display labels.
    """

    vertex_count: int
    edges: tuple[tuple[int, int, int], ...]
    labels: tuple[str, ...] | None = None

    @property
    def edge_count(self) -> int:
        """Number of distinct edges (pairs), ignoring multiplicity."""
        return len(self.edges)

    def total_multiplicity(self) -> int:
        return sum(m for _, _, m in self.edges)

    def vertex_weights(self) -> np.ndarray:
        """m(v) = sum of multiplicities of edges incident to v."""
        w = np.zeros(self.vertex_count, dtype=float)
        for u, v, m in self.edges:
            w[u] += m
            w[v] += m
        return w

    def adjacency(self, dense: bool = False):
        """Weighted adjacency matrix W with W[u,v] = multiplicity."""
        n = self.vertex_count
        if not self.edges:
            return np.zeros((n, n)) if dense else sp.csr_matrix((n, n))
        us = np.array([e[0] for e in self.edges])
        vs = np.array([e[1] for e in self.edges])
        ms = np.array([e[2] for e in self.edges], dtype=float)
        W = sp.coo_matrix(
            (np.concatenate([ms, ms]), (np.concatenate([us, vs]), np.concatenate([vs, us]))),
            shape=(n, n),
        ).tocsr()
        return W.toarray() if dense else W

    def neighbors(self) -> list[list[tuple[int, int]]]:
        """Adjacency lists of (neighbor, multiplicity)."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.vertex_count)]
        for u, v, m in self.edges:
            adj[u].append((v, m))
            adj[v].append((u, m))
        return adj


@dataclass
class Bipartition:
    """Two-sided vertex split with every edge crossing sides.

    Canonicalized so that the minimal vertex of each connected component
    (in particular vertex 0) lies in side1.
    """

    side1: tuple[int, ...]
    side2: tuple[int, ...]

    def side_of(self, n_vertices: int) -> np.ndarray:
        s = np.zeros(n_vertices, dtype=int)
        s[list(self.side2)] = 1
        return s


@dataclass
class SpectralReport:
    """Random-walk spectral summary of a weighted multigraph.

    spectrum is descending and present only on the dense path.
    lambda_bipartite is the norm of the walk restricted to the complement
    of the side-constant functions: equivalently max |eigenvalue| after
    removing one copy of +1 and one copy of -1.  It is present only for
    connected bipartite graphs.
    """

    is_connected: bool
    bipartition: Bipartition | None
    spectrum: np.ndarray | None
    lambda2: float
    lambda_bipartite: float | None
    solver: str
    residual: float

    def to_dict(self) -> dict:
        return {
            "is_connected": self.is_connected,
            "bipartite": self.bipartition is not None,
            "side1": list(self.bipartition.side1) if self.bipartition else None,
            "side2": list(self.bipartition.side2) if self.bipartition else None,
            "spectrum": None if self.spectrum is None else [float(x) for x in self.spectrum],
            "lambda2": float(self.lambda2),
            "lambda_bipartite": None
            if self.lambda_bipartite is None
            else float(self.lambda_bipartite),
            "solver": self.solver,
            "residual": float(self.residual),
        }


def build_graph(
    vertex_count: int,
    raw_edges: Sequence[tuple[int, int, int]],
    labels: Sequence[str] | None = None,
) -> WeightedMultigraph:
    """Canonicalize raw (u, v, mult) triples into a WeightedMultigraph.

    Parallel raw edges are merged by summing multiplicity.  Self-loops
    are rejected: the walk is defined on simple incidences with weights.
    """
    if vertex_count < 1:
        raise GraphError("vertex_count must be positive")
    merged: dict[tuple[int, int], int] = {}
    for u, v, m in raw_edges:
        if u == v:
            raise GraphError(f"self-loop not supported (vertex {u})")
        if not (0 <= u < vertex_count and 0 <= v < vertex_count):
            raise GraphError(f"edge ({u},{v}) out of range for {vertex_count} vertices")
        if m < 1:
            raise GraphError(f"multiplicity must be >= 1, got {m} on ({u},{v})")
        key = (u, v) if u < v else (v, u)
        merged[key] = merged.get(key, 0) + int(m)
    if labels is not None:
        labels = tuple(str(x) for x in labels)
        if len(labels) != vertex_count:
            raise GraphError("labels length must equal vertex_count")
    edges = tuple((u, v, merged[(u, v)]) for u, v in sorted(merged))
    return WeightedMultigraph(vertex_count=vertex_count, edges=edges, labels=labels)


def connectivity_and_bipartition(
    g: WeightedMultigraph,
) -> tuple[bool, Bipartition | None]:
    """BFS connectivity plus 2-coloring; None when not bipartite.

    The 2-coloring starts each component at its minimal vertex, which is
    placed in side1, so the result is canonical.
    """
    n = g.vertex_count
    adj = g.neighbors()
    color = np.full(n, -1, dtype=int)
    components = 0
    bipartite = True
    for root in range(n):
        if color[root] >= 0:
            continue
        components += 1
        color[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v, _ in adj[u]:
                if color[v] < 0:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    bipartite = False
        # keep coloring the rest even if non-bipartite, for connectivity
    is_connected = components == 1
    if not bipartite:
        return is_connected, None
    side1 = tuple(int(v) for v in np.flatnonzero(color == 0))
    side2 = tuple(int(v) for v in np.flatnonzero(color == 1))
    return is_connected, Bipartition(side1=side1, side2=side2)


def _symmetrized_dense(g: WeightedMultigraph, m: np.ndarray) -> np.ndarray:
    W = g.adjacency(dense=True)
    dinv = 1.0 / np.sqrt(m)
    S = dinv[:, None] * W * dinv[None, :]
    return (S + S.T) / 2.0


def _power_top(
    matvec: Callable[[np.ndarray], np.ndarray],
    n: int,
    deflate: list[np.ndarray],
    tol: float,
) -> tuple[float, np.ndarray, int, float]:
    """Largest Rayleigh quotient on the orthogonal complement of deflate.

    The operator must be PSD on that complement.  Stops after three
    consecutive Rayleigh increments below tol; raises IterationError
    (carrying the best estimate) at the iteration cap.
    """
    rng = np.random.default_rng(_START_SEED + n)
    v = rng.standard_normal(n)
    for u in deflate:
        v -= (u @ v) * u
    nv = np.linalg.norm(v)
    if nv == 0:
        return 0.0, v, 0, 0.0
    v /= nv
    prev = None
    stable = 0
    rayleigh = 0.0
    for it in range(1, _ITERATION_CAP + 1):
        w = matvec(v)
        for u in deflate:
            w -= (u @ w) * u
        rayleigh = float(v @ w)
        nw = np.linalg.norm(w)
        if nw < 1e-300:
            # operator annihilates the complement: top eigenvalue 0
            return 0.0, v, it, 0.0
        v_new = w / nw
        if prev is not None and abs(rayleigh - prev) < tol:
            stable += 1
        else:
            stable = 0
        prev = rayleigh
        v = v_new
        if stable >= 3 and it >= 10:
            residual = float(np.linalg.norm(matvec(v) - (v @ matvec(v)) * v))
            return rayleigh, v, it, residual
    raise IterationError(
        f"power iteration did not converge within {_ITERATION_CAP} steps "
        f"(best estimate {rayleigh:.6g})",
        best_estimate=rayleigh,
        iterations=_ITERATION_CAP,
    )


def random_walk_spectrum(
    g: WeightedMultigraph,
    mode: str = "auto",
    tol: float | None = None,
) -> SpectralReport:
    """Spectral report of the weighted random walk on g.

    Parameters
    ----------
    g : WeightedMultigraph
        Must have at least one edge and no isolated vertices.
    mode : {"auto", "dense", "iterative"}
        auto uses the dense path up to DENSE_VERTEX_LIMIT vertices.
    tol : float, optional
        Defaults: 1e-9 dense, 1e-6 iterative.

    Notes
    -----
    Disconnected graphs report lambda2 = 1.0 (the walk has a nontrivial
    invariant function) and omit lambda_bipartite.  The dense spectrum
    comes from the symmetrized matrix, which has the same spectrum as
    the walk operator on the weighted ell^2 space.
    """
    n = g.vertex_count
    if g.edge_count == 0:
        raise GraphError("graph has no edges")
    m = g.vertex_weights()
    if np.any(m == 0):
        isolated = [int(v) for v in np.flatnonzero(m == 0)]
        raise GraphError(f"isolated vertices not supported: {isolated[:10]}")
    if mode == "auto":
        mode = "dense" if n <= DENSE_VERTEX_LIMIT else "iterative"
    if mode not in ("dense", "iterative"):
        raise GraphError(f"unknown mode {mode!r}")
    if tol is None:
        tol = DEFAULT_DENSE_TOL if mode == "dense" else DEFAULT_ITERATIVE_TOL

    is_connected, bipartition = connectivity_and_bipartition(g)

    if mode == "dense":
        S = _symmetrized_dense(g, m)
        evals, evecs = np.linalg.eigh(S)
        spectrum = evals[::-1].copy()
        order = np.argsort(evals)[::-1]
        residual = 0.0

        def _pair_residual(rank: int) -> float:
            idx = order[rank]
            q = evecs[:, idx]
            return float(np.linalg.norm(S @ q - evals[idx] * q))

        residual = max(residual, _pair_residual(0))
        if n >= 2:
            residual = max(residual, _pair_residual(1))
        lambda2 = float(spectrum[1]) if is_connected else 1.0
        lambda_bipartite = None
        if is_connected and bipartition is not None:
            if n == 2:
                lambda_bipartite = 0.0
            else:
                rest = np.delete(spectrum, [0, len(spectrum) - 1])
                lambda_bipartite = float(np.max(np.abs(rest)))
        return SpectralReport(
            is_connected=is_connected,
            bipartition=bipartition,
            spectrum=spectrum,
            lambda2=lambda2,
            lambda_bipartite=lambda_bipartite,
            solver="dense",
            residual=residual,
        )

    # iterative path
    if not is_connected:
        return SpectralReport(
            is_connected=False,
            bipartition=bipartition,
            spectrum=None,
            lambda2=1.0,
            lambda_bipartite=None,
            solver="iterative",
            residual=0.0,
        )
    W = g.adjacency(dense=False)
    dinv = 1.0 / np.sqrt(m)

    def matvec_s(x: np.ndarray) -> np.ndarray:
        return dinv * (W @ (dinv * x))

    u0 = np.sqrt(m)
    u0 /= np.linalg.norm(u0)
    if bipartition is not None:
        sigma = np.where(bipartition.side_of(n) == 0, 1.0, -1.0)
        u1 = np.sqrt(m) * sigma
        u1 /= np.linalg.norm(u1)

        def matvec_s2(x: np.ndarray) -> np.ndarray:
            return matvec_s(matvec_s(x))

        r, _, _, residual = _power_top(matvec_s2, n, [u0, u1], tol)
        lam_bip = float(np.sqrt(max(r, 0.0)))
        # bipartite spectra are symmetric, so the second eigenvalue
        # equals the deflated max-absolute eigenvalue
        return SpectralReport(
            is_connected=True,
            bipartition=bipartition,
            spectrum=None,
            lambda2=lam_bip,
            lambda_bipartite=lam_bip,
            solver="iterative",
            residual=residual,
        )

    def matvec_half(x: np.ndarray) -> np.ndarray:
        return 0.5 * (matvec_s(x) + x)

    r, _, _, residual = _power_top(matvec_half, n, [u0], tol)
    lambda2 = float(2.0 * r - 1.0)
    return SpectralReport(
        is_connected=True,
        bipartition=None,
        spectrum=None,
        lambda2=lambda2,
        lambda_bipartite=None,
        solver="iterative",
        residual=2.0 * residual,
    )


def lambda_bipartite_direct(g: WeightedMultigraph) -> float:
    """Norm of A(I - M_sides) on the weighted ell^2 space, densely.

    M_sides is the orthogonal projection onto functions constant on each
    side: on side S_i it replaces a function by its m-weighted average
    over S_i.  Computed as the largest singular value of the conjugated
    matrix D^{1/2} A (I - M_sides) D^{-1/2}.
    """
    is_connected, bipartition = connectivity_and_bipartition(g)
    if not is_connected:
        raise GraphError("graph must be connected")
    if bipartition is None:
        raise GraphError("graph must be bipartite")
    n = g.vertex_count
    m = g.vertex_weights()
    W = g.adjacency(dense=True)
    A = W / m[:, None]
    M = np.zeros((n, n))
    for side in (bipartition.side1, bipartition.side2):
        idx = list(side)
        total = m[idx].sum()
        for v in idx:
            M[v, idx] = m[idx] / total
    X = A @ (np.eye(n) - M)
    d_sqrt = np.sqrt(m)
    Y = d_sqrt[:, None] * X / d_sqrt[None, :]
    return float(np.linalg.svd(Y, compute_uv=False)[0])


def edge_space_cos_angle(g: WeightedMultigraph) -> float:
    """cos of the angle between the two endpoint-averaging projections.

    Works on the edge space with one coordinate per parallel edge slot.
    P1 averages slots sharing their side1 endpoint, P2 averages slots
    sharing their side2 endpoint, and the joint projection is the global
    slot average (the graph must be connected).  Returns
    max(norm(P1 P2 - P12), norm(P2 P1 - P12)).
    """
    is_connected, bipartition = connectivity_and_bipartition(g)
    if not is_connected:
        raise GraphError("graph must be connected")
    if bipartition is None:
        raise GraphError("graph must be bipartite")
    side = bipartition.side_of(g.vertex_count)
    slots: list[tuple[int, int]] = []  # (side1 endpoint, side2 endpoint)
    for u, v, mult in g.edges:
        a, b = (u, v) if side[u] == 0 else (v, u)
        slots.extend([(a, b)] * mult)
    ne = len(slots)
    ends1 = np.array([s[0] for s in slots])
    ends2 = np.array([s[1] for s in slots])
    P1 = (ends1[:, None] == ends1[None, :]).astype(float)
    P1 /= P1.sum(axis=1, keepdims=True)
    P2 = (ends2[:, None] == ends2[None, :]).astype(float)
    P2 /= P2.sum(axis=1, keepdims=True)
    P12 = np.full((ne, ne), 1.0 / ne)
    n1 = np.linalg.svd(P1 @ P2 - P12, compute_uv=False)[0]
    n2 = np.linalg.svd(P2 @ P1 - P12, compute_uv=False)[0]
    return float(max(n1, n2))


def union_graphs(gs: Sequence[WeightedMultigraph]) -> WeightedMultigraph:
    """Multiplicity-summed union of graphs on the same vertex set."""
    if not gs:
        raise GraphError("need at least one graph")
    n = gs[0].vertex_count
    for g in gs:
        if g.vertex_count != n:
            raise GraphError("vertex counts differ")
    raw: list[tuple[int, int, int]] = []
    for g in gs:
        raw.extend(g.edges)
    return build_graph(n, raw, labels=gs[0].labels)


def strip_multi_edges(
    g: WeightedMultigraph,
) -> tuple[WeightedMultigraph, WeightedMultigraph]:
    """Split g into a simple graph (every mult -> 1) and the excess.

    union_graphs([simple, removed]) reproduces g.
    """
    simple = [(u, v, 1) for u, v, _ in g.edges]
    removed = [(u, v, m - 1) for u, v, m in g.edges if m > 1]
    return (
        build_graph(g.vertex_count, simple, labels=g.labels),
        build_graph(g.vertex_count, removed, labels=g.labels),
    )


def to_edge_list(g: WeightedMultigraph) -> str:
    """Text export: header 'vertices N', then one 'u v mult' line per edge."""
    lines = [f"vertices {g.vertex_count}"]
    lines.extend(f"{u} {v} {m}" for u, v, m in g.edges)
    return "\n".join(lines) + "\n"


def from_edge_list(text: str) -> WeightedMultigraph:
    """Parse the edge-list text format produced by to_edge_list."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise GraphError("empty edge-list text")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "vertices":
        raise GraphError(f"bad header {lines[0]!r}, expected 'vertices N'")
    try:
        n = int(head[1])
    except ValueError as exc:
        raise GraphError(f"bad vertex count {head[1]!r}") from exc
    raw = []
    for i, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if len(parts) != 3:
            raise GraphError(f"line {i}: expected 'u v mult', got {ln!r}")
        try:
            raw.append((int(parts[0]), int(parts[1]), int(parts[2])))
        except ValueError as exc:
            raise GraphError(f"line {i}: non-integer field in {ln!r}") from exc
    return build_graph(n, raw)


def complete_bipartite_graph(n1: int, n2: int) -> WeightedMultigraph:
    """K_{n1,n2} with unit multiplicities; side1 = 0..n1-1."""
    if n1 < 1 or n2 < 1:
        raise GraphError("sides must be nonempty")
    edges = [(i, n1 + j, 1) for i in range(n1) for j in range(n2)]
    return build_graph(n1 + n2, edges)


def cycle_graph(n: int) -> WeightedMultigraph:
    """Cycle on n vertices; n = 2 degenerates to a doubled edge."""
    if n < 2:
        raise GraphError("cycle needs at least 2 vertices")
    if n == 2:
        return build_graph(2, [(0, 1, 2)])
    edges = [(i, (i + 1) % n, 1) for i in range(n)]
    return build_graph(n, edges)


def random_bipartite_graph(
    n1: int,
    n2: int,
    p: float,
    rng: np.random.Generator,
    require_connected: bool = False,
    max_tries: int = 200,
) -> WeightedMultigraph:
    """Bipartite Erdos-Renyi graph: each of the n1*n2 pairs kept w.p. p."""
    for _ in range(max_tries):
        mask = rng.random((n1, n2)) < p
        ii, jj = np.nonzero(mask)
        edges = [(int(i), n1 + int(j), 1) for i, j in zip(ii, jj)]
        if not edges:
            if require_connected:
                continue
            return build_graph(n1 + n2, [])
        g = build_graph(n1 + n2, edges)
        if not require_connected:
            return g
        weights = g.vertex_weights()
        if np.all(weights > 0) and connectivity_and_bipartition(g)[0]:
            return g
    raise GraphError(f"no connected sample in {max_tries} tries (p too small?)")
