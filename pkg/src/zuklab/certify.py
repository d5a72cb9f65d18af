"""Threshold and bound arithmetic, and end-to-end certificates.

All quantities are ratios of logarithms and hence base-invariant; they
are computed with natural logs.  A certificate is VACUOUS when a
formula's validity precondition fails (for instance the interpolation
exponent would exceed 1), which is different from FAIL (a measured
spectral constant at or above the threshold).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ._version import __version__
from .graph_core import random_walk_spectrum
from .link_builder import build_link
from .random_groups import DeskScaleError, Presentation

_LAMBDA_ZERO_TOL = 1e-12


def zuk_threshold(n: int) -> float:
    """Spectral threshold 1/(8n-3) for dimension-n complexes."""
    if n < 2:
        raise ValueError("threshold defined for n >= 2")
    return 1.0 / (8 * n - 3)


def theta_bound(lam: float, theta: float) -> float:
    """Interpolated norm bound 2*lam^theta for exponent theta in (0,1]."""
    if not (0.0 < lam < 1.0):
        raise ValueError("lambda must lie in (0, 1)")
    if not (0.0 < theta <= 1.0):
        raise ValueError("theta must lie in (0, 1]")
    return 2.0 * lam**theta


def pmax_from_lambda(lam: float, n: int = 2) -> float | None:
    """Largest p with 2*lam^(2/p) below the threshold; absent when < 2.

    Solves 2*lam^(2/p) < 1/(8n-3): p_max = 2*log(1/lam)/log(2(8n-3)).
    Present exactly when lam <= 1/(2(8n-3)) (p_max >= 2).
    """
    if lam >= 1.0:
        raise ValueError("lambda must be < 1")
    if lam <= 0.0:
        raise ValueError("lambda must be positive (zero handled by caller)")
    base = 2.0 * (8 * n - 3)
    pmax = 2.0 * math.log(1.0 / lam) / math.log(base)
    return pmax if pmax >= 2.0 else None


def _check_mplus_params(alpha: float, C: float, m: int) -> None:
    if not (1.5 < alpha < 2.0):
        raise ValueError("alpha must lie in (3/2, 2)")
    if C <= 0:
        raise ValueError("C must be positive")
    if m < 2:
        raise ValueError("m must be >= 2")


def theta0_mplus(alpha: float, C: float, m: int) -> float | None:
    """Interpolation exponent for the positive triangular bound.

    log(26) / ((1 - alpha/2) log m + 0.5 log C - log 10), kept only when
    the value lands in (0, 1].
    """
    _check_mplus_params(alpha, C, m)
    denom = (1.0 - alpha / 2.0) * math.log(m) + 0.5 * math.log(C) - math.log(10.0)
    if denom <= 0:
        return None
    theta = math.log(26.0) / denom
    return theta if theta <= 1.0 else None


def pmax_mplus(alpha: float, C: float, m: int) -> float | None:
    """p_max = 2/theta0 for the positive triangular bound; absent when < 2."""
    _check_mplus_params(alpha, C, m)
    pmax = (
        2.0 * (1.0 - alpha / 2.0) * math.log(m) + math.log(C) - 2.0 * math.log(10.0)
    ) / math.log(26.0)
    return pmax if pmax >= 2.0 else None


def _check_density_params(k: int, l: int, d: float) -> None:
    if k < 2:
        raise ValueError("k must be >= 2")
    if l % 3 != 0 or l < 3:
        raise ValueError("l must be a positive multiple of 3")
    if not (1.0 / 3.0 < d < 0.5):
        raise ValueError("d must lie in (1/3, 1/2)")


def pmax_density(k: int, l: int, d: float) -> float | None:
    """Density-model p_max: (l(d-1/3)log(2k-1) - 2 log(20 sqrt 2))/log 26."""
    _check_density_params(k, l, d)
    num = l * (d - 1.0 / 3.0) * math.log(2 * k - 1) - 2.0 * math.log(20.0 * math.sqrt(2.0))
    pmax = num / math.log(26.0)
    return pmax if pmax >= 2.0 else None


def theta0_density(k: int, l: int, d: float) -> float | None:
    pmax = pmax_density(k, l, d)
    return None if pmax is None else 2.0 / pmax


def confdim_bounds(k: int, l: int, d: float) -> tuple[float | None, float]:
    """Conformal-dimension bounds for the density model.

    Lower bound is the density p_max (absent when the formula falls
    below 2); upper bound is (16/log 2) * (1/(1-2d)) * log(2k-1) * l.
    """
    _check_density_params(k, l, d)
    lower = pmax_density(k, l, d)
    upper = (16.0 / math.log(2.0)) * (1.0 / (1.0 - 2.0 * d)) * math.log(2 * k - 1) * l
    return lower, upper


@dataclass
class ReductionParams:
    """Positive-triangular parameters induced by density parameters."""

    m: int
    rho: float
    alpha: float
    C: float
    rounded: bool
    m_real: float
    probability_loss: float

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "rho": self.rho,
            "alpha": self.alpha,
            "C": self.C,
            "rounded": self.rounded,
            "m_real": self.m_real,
            "probability_loss": self.probability_loss,
        }


def reduction_params(k: int, l: int, d: float) -> ReductionParams:
    """Map (k, l, d) to (m, rho, alpha, C) plus bookkeeping.

    m = floor((2k-1)^(l/3) / 2) with a rounding flag (the power of an
    odd number is odd, so the half is never an integer), rho computed
    from the integer m as 1/(4 m^(3(1-d))), alpha = 3(1-d), C = 1/4.
    The probability-loss term 6/(2k-1)^(l/2) is reported alongside.
    """
    if l % 3 != 0 or l < 3:
        raise ValueError("l must be a positive multiple of 3")
    if not (0.0 <= d <= 1.0):
        raise ValueError("d must lie in [0, 1]")
    if (l // 3) * math.log2(2 * k - 1) > 62:
        raise DeskScaleError("reduction target m exceeds desk scale (2^62)")
    power = (2 * k - 1) ** (l // 3)
    m = power // 2
    rounded = power % 2 == 1
    if m < 2:
        raise ValueError(f"reduction target m = {m} too small to be a model size")
    rho = 1.0 / (4.0 * m ** (3.0 * (1.0 - d)))
    alpha = 3.0 * (1.0 - d)
    loss = 6.0 * math.exp(-(l / 2.0) * math.log(2 * k - 1))
    return ReductionParams(
        m=m,
        rho=rho,
        alpha=alpha,
        C=0.25,
        rounded=rounded,
        m_real=power / 2.0,
        probability_loss=loss,
    )


@dataclass
class Certificate:
    """Outcome of a certification run, measured or formula-based."""

    verdict: str
    threshold: float
    reason: str = ""
    params: dict = field(default_factory=dict)
    lambda_measured: float | None = None
    lambda_zero: bool = False
    slack_eps: float | None = None
    theta0: float | None = None
    p_range: tuple[float, float] | None = None
    confdim_lower: float | None = None
    confdim_upper: float | None = None
    seed: int | None = None
    version: str = __version__

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "threshold": self.threshold,
            "reason": self.reason,
            "params": dict(self.params),
            "lambda_measured": self.lambda_measured,
            "lambda_zero": self.lambda_zero,
            "slack_eps": self.slack_eps,
            "theta0": self.theta0,
            "p_range": list(self.p_range) if self.p_range else None,
            "confdim_lower": self.confdim_lower,
            "confdim_upper": self.confdim_upper,
            "seed": self.seed,
            "version": self.version,
        }


def certify_presentation(
    p: Presentation,
    n: int = 2,
    mode: str = "auto",
    tol: float | None = None,
    params: dict | None = None,
    seed: int | None = None,
) -> Certificate:
    """Measure the link constant of a positive presentation and certify.

    PASS iff the link is connected and its constant is strictly below
    1/(8n-3); a vanishing constant is reported with the lambda_zero
    marker and no p-range instead of a fake infinity.  The p-range
    [2, p_max] is attached when the constant allows an exponent
    theta0 <= 1.
    """
    threshold = zuk_threshold(n)
    meta = dict(params or {})
    meta.setdefault("alphabet_size", p.alphabet_size)
    meta.setdefault("relator_count", len(p.relators))
    link = build_link(p)
    if link.isolated:
        shown = [link.labels[v] for v in link.isolated[:8]]
        return Certificate(
            verdict="FAIL",
            threshold=threshold,
            reason=f"link disconnected (isolated vertices: {', '.join(shown)})",
            params=meta,
            seed=seed,
        )
    rep = random_walk_spectrum(link.full, mode=mode, tol=tol)
    if not rep.is_connected:
        return Certificate(
            verdict="FAIL",
            threshold=threshold,
            reason="link disconnected",
            params=meta,
            lambda_measured=rep.lambda2,
            seed=seed,
        )
    lam = float(rep.lambda_bipartite)
    slack = threshold - lam
    verdict = "PASS" if lam < threshold else "FAIL"
    reason = "" if verdict == "PASS" else f"lambda {lam:.6g} >= threshold {threshold:.6g}"
    if lam <= _LAMBDA_ZERO_TOL:
        return Certificate(
            verdict=verdict,
            threshold=threshold,
            reason="lambda is zero at this scale; p_max unbounded at face value, omitted",
            params=meta,
            lambda_measured=lam,
            lambda_zero=True,
            slack_eps=slack,
            seed=seed,
        )
    pmax = pmax_from_lambda(lam, n)
    return Certificate(
        verdict=verdict,
        threshold=threshold,
        reason=reason,
        params=meta,
        lambda_measured=lam,
        lambda_zero=False,
        slack_eps=slack,
        theta0=None if pmax is None else 2.0 / pmax,
        p_range=None if pmax is None else (2.0, pmax),
        seed=seed,
    )


def emit_bounds(k: int, l: int, d: float) -> Certificate:
    """Formula-only certificate for density-model parameters."""
    pmax = pmax_density(k, l, d)
    lower, upper = confdim_bounds(k, l, d)
    params = {"model": "density", "k": k, "l": l, "d": d}
    if pmax is None:
        return Certificate(
            verdict="VACUOUS",
            threshold=zuk_threshold(2),
            reason="p_max formula falls below 2 at these parameters (theta0 > 1)",
            params=params,
            confdim_lower=lower,
            confdim_upper=upper,
        )
    return Certificate(
        verdict="PASS",
        threshold=zuk_threshold(2),
        reason="formula bounds; asymptotic statement evaluated at the given parameters",
        params=params,
        theta0=2.0 / pmax,
        p_range=(2.0, pmax),
        confdim_lower=lower,
        confdim_upper=upper,
    )


def emit_bounds_mplus(alpha: float, C: float, m: int) -> Certificate:
    """Formula-only certificate for positive-triangular parameters."""
    pmax = pmax_mplus(alpha, C, m)
    params = {"model": "mplus", "alpha": alpha, "C": C, "m": m}
    if pmax is None:
        return Certificate(
            verdict="VACUOUS",
            threshold=zuk_threshold(2),
            reason="interpolation exponent invalid at these parameters (theta0 outside (0,1])",
            params=params,
        )
    return Certificate(
        verdict="PASS",
        threshold=zuk_threshold(2),
        reason="formula bounds; asymptotic statement evaluated at the given parameters",
        params=params,
        theta0=theta0_mplus(alpha, C, m),
        p_range=(2.0, pmax),
    )
