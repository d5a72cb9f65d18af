"""Seed-driven empirical verification of the quantitative lemmas.

Each verify_* operation runs independent trials whose PRNG streams are
derived from (master seed, trial index), so results are reproducible
and independent of the thread count; reports merge trials in index
order.  Deterministic lemma bounds must hold in every non-skipped
trial; probabilistic statements are reported as frequencies and trend
fits, never silently asserted as certainties.  Trials whose hypothesis
gate fails are recorded as skipped, since they say nothing about the
statement under test.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .graph_core import (
    GraphError,
    WeightedMultigraph,
    build_graph,
    connectivity_and_bipartition,
    edge_space_cos_angle,
    random_bipartite_graph,
    random_walk_spectrum,
    union_graphs,
)
from .link_builder import build_link
from .partite_complex import PartiteComplex, is_gallery_connected, link, random_tripartite_complex
from .random_groups import sample_mplus
from .zuk_engine import ConvergenceError, cos_angle, iterate_to_limit, zuk_threshold_for

_TOL = 1e-9
_GEN_RETRY_CAP = 100


@dataclass
class TrialResult:
    """One trial: a measured quantity against a bound, or a skip."""

    index: int
    measured: float | None
    bound: float | None
    holds: bool | None
    skipped: bool = False
    margin: float | None = None
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "measured": self.measured,
            "bound": self.bound,
            "holds": self.holds,
            "skipped": self.skipped,
            "margin": self.margin,
            "extras": dict(self.extras),
        }


@dataclass
class HarnessReport:
    """Aggregated trial outcomes for one lemma.

    fraction_holding is computed over non-skipped trials (1.0 when
    every trial was skipped); n_skipped records how many hypothesis
    gates failed.  passed applies the per-lemma acceptance rule stated
    in the corresponding verify_* docstring.  The thread count is kept
    out of to_dict: results merge by trial index, so serialized
    reports must not depend on it.
    """

    lemma: str
    params: dict
    seed: int
    threads: int
    trials: tuple[TrialResult, ...]
    fraction_holding: float
    n_skipped: int
    mean_measured: float | None
    max_measured: float | None
    notes: dict
    passed: bool

    def to_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "params": dict(self.params),
            "seed": self.seed,
            "fraction_holding": self.fraction_holding,
            "n_skipped": self.n_skipped,
            "mean_measured": self.mean_measured,
            "max_measured": self.max_measured,
            "notes": dict(self.notes),
            "passed": self.passed,
            "trials": [t.to_dict() for t in self.trials],
        }

    def csv_rows(self) -> list[list]:
        rows = [["trial", "measured", "bound", "holds", "skipped"]]
        for t in self.trials:
            rows.append([t.index, t.measured, t.bound, t.holds, t.skipped])
        return rows


def _trial_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed) % 2**64, index]))


def _run_trials(
    worker: Callable[[int, np.random.Generator], TrialResult],
    trials: int,
    seed: int,
    threads: int,
) -> list[TrialResult]:
    def run_one(i: int) -> TrialResult:
        return worker(i, _trial_rng(seed, i))

    if threads <= 1:
        return [run_one(i) for i in range(trials)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(run_one, range(trials)))


def _assemble(
    lemma: str,
    params: dict,
    seed: int,
    threads: int,
    results: list[TrialResult],
    notes: dict,
    passed: bool,
) -> HarnessReport:
    non_skipped = [t for t in results if not t.skipped]
    holding = sum(1 for t in non_skipped if t.holds)
    fraction = holding / len(non_skipped) if non_skipped else 1.0
    vals = [t.measured for t in non_skipped if t.measured is not None]
    return HarnessReport(
        lemma=lemma,
        params=params,
        seed=seed,
        threads=threads,
        trials=tuple(results),
        fraction_holding=fraction,
        n_skipped=len(results) - len(non_skipped),
        mean_measured=float(np.mean(vals)) if vals else None,
        max_measured=float(np.max(vals)) if vals else None,
        notes=notes,
        passed=passed,
    )


# ---------------------------------------------------------------------------
# graph generators


def _matching_avoiding(
    rng: np.random.Generator, n: int, forbidden: set[tuple[int, int]]
) -> list[tuple[int, int]] | None:
    """Random permutation-matching of [n] x [n] avoiding forbidden pairs."""
    perm = rng.permutation(n)
    for _ in range(200 * n):
        bad = [i for i in range(n) if (i, int(perm[i])) in forbidden]
        if not bad:
            return [(i, int(perm[i])) for i in range(n)]
        i = bad[int(rng.integers(0, len(bad)))]
        j = int(rng.integers(0, n))
        if i == j:
            continue
        pi, pj = int(perm[i]), int(perm[j])
        if (i, pj) not in forbidden and (j, pi) not in forbidden:
            perm[i], perm[j] = pj, pi
    return None


def _near_regular_bipartite(
    rng: np.random.Generator,
    n_side: int,
    degree: int,
    eps: float,
    forbidden: set[tuple[int, int]],
) -> WeightedMultigraph | None:
    """Connected bipartite graph with degrees in [degree(1-eps), degree].

    Union of `degree` edge-disjoint random matchings (avoiding pairs in
    forbidden), roughened by random deletions that respect the band.
    Returns None when a retry is needed.
    """
    pairs: set[tuple[int, int]] = set()
    for _ in range(degree):
        matching = _matching_avoiding(rng, n_side, forbidden | pairs)
        if matching is None:
            return None
        pairs.update(matching)
    lo = max(1, math.ceil(degree * (1.0 - eps)))
    max_del = int(eps * degree * n_side * 0.3)
    n_del_target = int(rng.integers(0, max_del + 1)) if max_del > 0 else 0
    deg1 = np.full(n_side, degree)
    deg2 = np.full(n_side, degree)
    edge_list = sorted(pairs)
    order = rng.permutation(len(edge_list))
    deleted = 0
    kept: set[tuple[int, int]] = set(pairs)
    for idx in order:
        if deleted >= n_del_target:
            break
        i, j = edge_list[int(idx)]
        if deg1[i] > lo and deg2[j] > lo:
            kept.discard((i, j))
            deg1[i] -= 1
            deg2[j] -= 1
            deleted += 1
    g = build_graph(2 * n_side, [(i, n_side + j, 1) for i, j in kept])
    if np.any(g.vertex_weights() == 0):
        return None
    if not connectivity_and_bipartition(g)[0]:
        return None
    return g


def _random_er_graph(
    rng: np.random.Generator, n: int, p: float
) -> set[tuple[int, int]]:
    """Edge set of a general Erdos-Renyi graph on n vertices."""
    mask = rng.random((n, n)) < p
    ii, jj = np.nonzero(np.triu(mask, k=1))
    return {(int(i), int(j)) for i, j in zip(ii, jj)}


# ---------------------------------------------------------------------------
# lemma harnesses


def verify_union_lemma(
    vertex_count: int = 120,
    k_graphs: int = 3,
    degree_band_eps: float = 0.15,
    degree: int = 12,
    trials: int = 100,
    seed: int = 0,
    threads: int = 1,
) -> HarnessReport:
    """Union bound: lambda2 of an edge-disjoint union of connected
    near-regular graphs against max component lambda2 + 16 eps^2/(1-eps)^4.

    vertex_count is the per-side size of the bipartite components.
    The bound is a theorem: passed requires every trial to hold.
    """
    if not (0.0 < degree_band_eps < 1.0):
        raise ValueError("degree_band_eps must lie in (0, 1)")

    correction = 16.0 * degree_band_eps**2 / (1.0 - degree_band_eps) ** 4

    def worker(i: int, rng: np.random.Generator) -> TrialResult:
        for _ in range(_GEN_RETRY_CAP):
            graphs = []
            forbidden: set[tuple[int, int]] = set()
            ok = True
            for _ in range(k_graphs):
                g = _near_regular_bipartite(
                    rng, vertex_count, degree, degree_band_eps, forbidden
                )
                if g is None:
                    ok = False
                    break
                forbidden.update(
                    (u, v - vertex_count) for u, v, _ in g.edges
                )
                graphs.append(g)
            if ok:
                break
        else:
            raise RuntimeError("could not realize the degree band after retries")
        lam = max(random_walk_spectrum(g).lambda2 for g in graphs)
        union = union_graphs(graphs)
        measured = random_walk_spectrum(union).lambda2
        bound = lam + correction
        degs = np.concatenate([g.vertex_weights() for g in graphs])
        return TrialResult(
            index=i,
            measured=float(measured),
            bound=float(bound),
            holds=bool(measured <= bound + _TOL),
            margin=float(bound - measured),
            extras={
                "component_lambda_max": float(lam),
                "degree_min": float(degs.min()),
                "degree_max": float(degs.max()),
            },
        )

    params = {
        "vertex_count": vertex_count,
        "k_graphs": k_graphs,
        "degree_band_eps": degree_band_eps,
        "degree": degree,
        "trials": trials,
    }
    results = _run_trials(worker, trials, seed, threads)
    report = _assemble(
        "union",
        params,
        seed,
        threads,
        results,
        notes={"correction_term": correction},
        passed=all(t.holds for t in results),
    )
    return report


def verify_deletion_lemma(
    vertex_count: int = 300,
    p_dense: float = 0.15,
    p_sparse: float = 0.002,
    trials: int = 100,
    seed: int = 0,
    threads: int = 1,
) -> HarnessReport:
    """Deletion bound: lambda2 of a dense part against union lambda + 4 eps.

    E1 is a connected ER graph, E2 an independent sparse ER layer with
    E1's edges removed; eps is the worst per-vertex degree ratio.
    Trials failing the gate eps < (1 - lambda)/4 are skipped.  The bound
    is a theorem: passed requires every non-skipped trial to hold.
    """

    def worker(i: int, rng: np.random.Generator) -> TrialResult:
        for _ in range(_GEN_RETRY_CAP):
            e1 = _random_er_graph(rng, vertex_count, p_dense)
            g1 = build_graph(vertex_count, [(u, v, 1) for u, v in e1])
            if np.all(g1.vertex_weights() > 0) and connectivity_and_bipartition(g1)[0]:
                break
        else:
            raise RuntimeError("could not sample a connected dense layer")
        e2 = _random_er_graph(rng, vertex_count, p_sparse) - e1
        union = build_graph(vertex_count, [(u, v, 1) for u, v in (e1 | e2)])
        lam = random_walk_spectrum(union).lambda2
        m1 = g1.vertex_weights()
        m2 = np.zeros(vertex_count)
        for u, v in e2:
            m2[u] += 1
            m2[v] += 1
        eps = float(np.max(m2 / m1))
        gate = (1.0 - lam) / 4.0
        if eps >= gate:
            return TrialResult(
                index=i,
                measured=None,
                bound=None,
                holds=None,
                skipped=True,
                extras={"eps": eps, "gate": float(gate), "lambda_union": float(lam)},
            )
        measured = random_walk_spectrum(g1).lambda2
        bound = lam + 4.0 * eps
        return TrialResult(
            index=i,
            measured=float(measured),
            bound=float(bound),
            holds=bool(measured <= bound + _TOL),
            margin=float(bound - measured),
            extras={"eps": eps, "lambda_union": float(lam), "extra_edges": len(e2)},
        )

    params = {
        "vertex_count": vertex_count,
        "p_dense": p_dense,
        "p_sparse": p_sparse,
        "trials": trials,
    }
    results = _run_trials(worker, trials, seed, threads)
    report = _assemble(
        "deletion",
        params,
        seed,
        threads,
        results,
        notes={},
        passed=all(t.holds for t in results if not t.skipped),
    )
    return report


def verify_er_spectral(
    n: int = 500,
    rho: float = 0.3,
    trials: int = 100,
    seed: int = 0,
    threads: int = 1,
) -> HarnessReport:
    """Bipartite ER spectral gap: lambda2 against 8/sqrt(n rho).

    Records connectivity, whether the bound is non-vacuous (< 1), and
    whether the theorem's asymptotic degree hypothesis
    rho >= log^6(n)/n holds at this scale (it never does at desk
    scale; the conclusion is tested in the dense regime instead).
    passed requires a non-vacuous bound holding in >= 99% of trials.
    """
    bound = 8.0 / math.sqrt(n * rho)
    vacuous = bound >= 1.0
    hypothesis = rho >= math.log(n) ** 6 / n

    def worker(i: int, rng: np.random.Generator) -> TrialResult:
        g = random_bipartite_graph(n, n, rho, rng)
        weights = g.vertex_weights()
        if g.edge_count == 0 or np.any(weights == 0):
            return TrialResult(
                index=i,
                measured=1.0,
                bound=bound,
                holds=False,
                extras={"connected": False, "isolated": int(np.sum(weights == 0))},
            )
        rep = random_walk_spectrum(g)
        measured = rep.lambda2
        return TrialResult(
            index=i,
            measured=float(measured),
            bound=bound,
            holds=bool(rep.is_connected and measured <= bound + _TOL),
            margin=float(bound - measured),
            extras={"connected": rep.is_connected},
        )

    params = {"n": n, "rho": rho, "trials": trials}
    results = _run_trials(worker, trials, seed, threads)
    margins = [t.margin for t in results if t.margin is not None]
    report = _assemble(
        "er",
        params,
        seed,
        threads,
        results,
        notes={
            "bound": bound,
            "vacuous": vacuous,
            "hypothesis_satisfied": hypothesis,
            "min_margin": float(np.min(margins)) if margins else None,
        },
        passed=(not vacuous)
        and (sum(1 for t in results if t.holds) >= 0.99 * len(results)),
    )
    return report


def verify_degree_concentration(
    n: int = 1000,
    rho: float = 0.1,
    alpha_label: float = 0.0,
    trials: int = 100,
    seed: int = 0,
    threads: int = 1,
) -> HarnessReport:
    """Degree concentration: no vertex deviating by n rho / n^((1-alpha)/3).

    rho should follow C/n^alpha for the labeled alpha in [0, 1).  The
    statement is asymptotic; the report carries honest frequencies and
    is informational (passed is true unless trials error out).
    """
    if not (0.0 <= alpha_label < 1.0):
        raise ValueError("alpha_label must lie in [0, 1)")
    threshold = n * rho / n ** ((1.0 - alpha_label) / 3.0)

    def worker(i: int, rng: np.random.Generator) -> TrialResult:
        mask = rng.random((n, n)) < rho
        degrees = np.concatenate([mask.sum(axis=1), mask.sum(axis=0)])
        max_dev = float(np.max(np.abs(degrees - n * rho)))
        return TrialResult(
            index=i,
            measured=max_dev,
            bound=threshold,
            holds=bool(max_dev < threshold),
            margin=float(threshold - max_dev),
        )

    params = {"n": n, "rho": rho, "alpha_label": alpha_label, "trials": trials}
    results = _run_trials(worker, trials, seed, threads)
    report = _assemble(
        "degree",
        params,
        seed,
        threads,
        results,
        notes={"deviation_threshold": threshold, "expected_degree": n * rho},
        passed=True,
    )
    return report


def verify_cos_equals_lambda(
    trials: int = 100,
    seed: int = 0,
    threads: int = 1,
    min_side: int = 2,
    max_side: int = 12,
) -> HarnessReport:
    """Edge-space angle identity: cos angle equals the bipartite constant.

    Random connected bipartite (multi)graphs with at most 30 vertices;
    measured is the absolute difference, bound 1e-8.  The identity is a
    proposition: passed requires every trial to hold.
    """

    def worker(i: int, rng: np.random.Generator) -> TrialResult:
        # lopsided side draws can make connected samples at low p too
        # rare for a bounded retry cap, so redraw sizes and p together
        while True:
            n1 = int(rng.integers(min_side, max_side + 1))
            n2 = int(rng.integers(min_side, max_side + 1))
            p = float(rng.uniform(0.3, 0.9))
            try:
                g = random_bipartite_graph(n1, n2, p, rng, require_connected=True, max_tries=50)
            except GraphError:
                continue
            break
        if rng.random() < 0.4:
            # exercise the multigraph path with a few multiplicity bumps
            bumped = [
                (u, v, int(rng.integers(1, 4)))
                for u, v, _ in g.edges
            ]
            g = build_graph(g.vertex_count, bumped)
        lam = random_walk_spectrum(g).lambda_bipartite
        cos = edge_space_cos_angle(g)
        diff = abs(cos - lam)
        return TrialResult(
            index=i,
            measured=float(diff),
            bound=1e-8,
            holds=bool(diff <= 1e-8),
            margin=float(1e-8 - diff),
            extras={"lambda": float(lam), "cos": float(cos), "n1": n1, "n2": n2},
        )

    params = {"trials": trials, "min_side": min_side, "max_side": max_side}
    results = _run_trials(worker, trials, seed, threads)
    report = _assemble(
        "cos",
        params,
        seed,
        threads,
        results,
        notes={},
        passed=all(t.holds for t in results),
    )
    return report


def verify_mplus_link(
    m_grid: tuple[int, ...] = (400, 800, 1600, 3200),
    alpha: float = 1.6,
    C: float = 1.0,
    trials_per_m: int = 20,
    seed: int = 0,
    threads: int = 1,
) -> HarnessReport:
    """Link spectral scaling for the positive triangular model.

    For each m, samples presentations at rho = C/m^alpha and measures
    lambda2 of the full link.  The theorem's bound 10/(sqrt C
    m^(1-alpha/2)) is recorded per trial but only judged where it is
    non-vacuous (< 1); the scaling content is the fitted slope of log
    mean-lambda2 against log m, predicted -(1-alpha/2).  passed
    requires slope within +-0.1 of the prediction and, where the grid
    reaches m >= 800, connectivity in >= 95% of those trials.
    """
    if not (1.5 < alpha < 2.0):
        raise ValueError("alpha must lie in (3/2, 2)")
    grid = tuple(sorted(m_grid))
    jobs = [(m, t) for m in grid for t in range(trials_per_m)]

    def worker(i: int, rng: np.random.Generator) -> TrialResult:
        m, _ = jobs[i]
        rho = C / m**alpha
        sub_seed = int(rng.integers(0, 2**63))
        pres = sample_mplus(m, rho, sub_seed)
        link_dec = build_link(pres)
        bound = 10.0 / (math.sqrt(C) * m ** (1.0 - alpha / 2.0))
        vacuous = bound >= 1.0
        if link_dec.isolated:
            return TrialResult(
                index=i,
                measured=1.0,
                bound=bound,
                holds=None if vacuous else False,
                skipped=vacuous,
                extras={"m": m, "connected": False, "bound_vacuous": vacuous},
            )
        rep = random_walk_spectrum(link_dec.full)
        measured = rep.lambda2
        holds: bool | None
        if vacuous:
            holds = None
        else:
            holds = bool(rep.is_connected and measured <= bound + _TOL)
        return TrialResult(
            index=i,
            measured=float(measured),
            bound=bound,
            holds=holds,
            skipped=vacuous,
            margin=None if vacuous else float(bound - measured),
            extras={
                "m": m,
                "connected": rep.is_connected,
                "bound_vacuous": vacuous,
                "solver": rep.solver,
            },
        )

    params = {
        "m_grid": list(grid),
        "alpha": alpha,
        "C": C,
        "trials_per_m": trials_per_m,
    }
    results = _run_trials(worker, len(jobs), seed, threads)
    per_m = []
    log_ms = []
    log_means = []
    for m in grid:
        rows = [t for t in results if t.extras.get("m") == m]
        connected = [t for t in rows if t.extras.get("connected")]
        lam_vals = [t.measured for t in connected]
        mean_lam = float(np.mean(lam_vals)) if lam_vals else None
        bound = 10.0 / (math.sqrt(C) * m ** (1.0 - alpha / 2.0))
        judged = [t for t in rows if not t.skipped]
        pass_frac = (
            sum(1 for t in judged if t.holds) / len(judged) if judged else 0.0
        )
        per_m.append(
            {
                "m": m,
                "mean_lambda2": mean_lam,
                "bound": bound,
                "pass_fraction": pass_frac,
                "connected_fraction": len(connected) / max(len(rows), 1),
            }
        )
        if mean_lam is not None and mean_lam > 0:
            log_ms.append(math.log(m))
            log_means.append(math.log(mean_lam))
    slope = None
    if len(log_ms) >= 2:
        slope = float(np.polyfit(log_ms, log_means, 1)[0])
    expected_slope = -(1.0 - alpha / 2.0)
    slope_ok = slope is not None and abs(slope - expected_slope) <= 0.1
    big_m_rows = [t for t in results if t.extras.get("m", 0) >= 800]
    if big_m_rows:
        conn_frac_big = sum(1 for t in big_m_rows if t.extras.get("connected")) / len(
            big_m_rows
        )
        conn_ok = conn_frac_big >= 0.95
    else:
        conn_frac_big = None
        conn_ok = True
    report = _assemble(
        "mplus-link",
        params,
        seed,
        threads,
        results,
        notes={
            "per_m": per_m,
            "slope": slope,
            "expected_slope": expected_slope,
            "connected_fraction_m_ge_800": conn_frac_big,
        },
        passed=bool(slope_ok and conn_ok),
    )
    return report


def _gamma_of_complex(x: PartiteComplex, method: str) -> float:
    """Largest pairwise projection angle of a 2-complex.

    The svd method assembles the projections on cells; the links method
    takes the maximum bipartite constant over vertex links, equal to
    the angle (within 1e-8) when all links are connected.
    """
    if method == "auto":
        method = "svd" if len(x.cells) <= 400 else "links"
    if method == "svd":
        pairs = [((0, 1), (0, 2)), ((0, 1), (1, 2)), ((0, 2), (1, 2))]
        return max(cos_angle(x, a, b) for a, b in pairs)
    if method == "links":
        worst = 0.0
        for face in x.faces_of_dim(x.n - 2):
            rep = random_walk_spectrum(link(x, face))
            if not rep.is_connected:
                raise ValueError("links method requires connected links")
            worst = max(worst, rep.lambda_bipartite)
        return worst
    raise ValueError(f"unknown gamma method {method!r}")


def verify_angle_convergence(
    sizes: tuple[int, int, int] = (4, 4, 4),
    q: float = 0.9,
    trials: int = 50,
    seed: int = 0,
    threads: int = 1,
    require_gamma_below: float | None = None,
    iterate_tol: float = 1e-9,
    gamma_method: str = "auto",
) -> HarnessReport:
    """Operator iteration on random tripartite complexes.

    Complexes are regenerated until gallery connected with connected
    links (and, when require_gamma_below is set, until the worst angle
    gamma falls below it).  Trials with gamma at or above the spectral
    threshold are skipped; qualifying trials must converge with fitted
    rate < 1 and limit within 1e-8 of the constant-averaging matrix.
    passed requires every qualifying trial to hold.
    """
    if gamma_method not in ("auto", "svd", "links"):
        raise ValueError(f"unknown gamma method {gamma_method!r}")
    threshold = zuk_threshold_for(2)

    def worker(i: int, rng: np.random.Generator) -> TrialResult:
        gamma = None
        x = None
        for _ in range(_GEN_RETRY_CAP * 2):
            cand = random_tripartite_complex(sizes, q, rng)
            if not cand.cells or not is_gallery_connected(cand):
                continue
            try:
                g = _gamma_of_complex(cand, gamma_method)
            except ValueError:
                continue
            if require_gamma_below is not None and g >= require_gamma_below:
                continue
            x, gamma = cand, g
            break
        if x is None:
            raise RuntimeError("could not generate a qualifying complex")
        if gamma >= threshold:
            return TrialResult(
                index=i,
                measured=None,
                bound=None,
                holds=None,
                skipped=True,
                extras={"gamma": float(gamma), "cells": len(x.cells)},
            )
        try:
            _, rep = iterate_to_limit(x, tol=iterate_tol)
            limit_error = rep.limit_error
            converged = rep.converged
            rate = rep.fitted_rate
        except ConvergenceError as exc:
            rep = exc.report
            converged = False
            rate = rep.fitted_rate
            limit_error = rep.limit_error
        holds = bool(converged and rate < 1.0 and limit_error <= 1e-8)
        return TrialResult(
            index=i,
            measured=float(rate),
            bound=1.0,
            holds=holds,
            margin=float(1.0 - rate),
            extras={
                "gamma": float(gamma),
                "cells": len(x.cells),
                "limit_error": float(limit_error),
                "converged": converged,
                "recorded_powers": len(rep.powers),
            },
        )

    params = {
        "sizes": list(sizes),
        "q": q,
        "trials": trials,
        "require_gamma_below": require_gamma_below,
        "gamma_method": gamma_method,
    }
    results = _run_trials(worker, trials, seed, threads)
    qualifying = [t for t in results if not t.skipped]
    report = _assemble(
        "angle",
        params,
        seed,
        threads,
        results,
        notes={
            "qualifying": len(qualifying),
            "mean_rate": float(np.mean([t.measured for t in qualifying]))
            if qualifying
            else None,
        },
        passed=all(t.holds for t in qualifying),
    )
    return report
