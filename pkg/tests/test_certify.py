import itertools
import math

import pytest

from zuklab.certify import (
    Certificate,
    certify_presentation,
    confdim_bounds,
    emit_bounds,
    emit_bounds_mplus,
    pmax_density,
    pmax_from_lambda,
    pmax_mplus,
    reduction_params,
    theta0_density,
    theta0_mplus,
    theta_bound,
    zuk_threshold,
)
from zuklab.random_groups import DeskScaleError, Presentation, sample_mplus

SEED = 1789


def test_zuk_threshold():
    assert zuk_threshold(2) == pytest.approx(1.0 / 13.0)
    assert zuk_threshold(3) == pytest.approx(1.0 / 21.0)
    with pytest.raises(ValueError):
        zuk_threshold(1)


def test_theta_bound_values_and_errors():
    assert theta_bound(0.25, 1.0) == pytest.approx(0.5)
    assert theta_bound(0.25, 0.5) == pytest.approx(1.0)
    for lam, theta in ((0.0, 0.5), (1.0, 0.5), (0.5, 0.0), (0.5, 1.5)):
        with pytest.raises(ValueError):
            theta_bound(lam, theta)


def test_pmax_from_lambda_boundary():
    # 2*lam^(2/p) < 1/13 solves to p = 2 exactly at lam = 1/26
    assert pmax_from_lambda(1.0 / 26.0) == pytest.approx(2.0, abs=1e-12)
    assert pmax_from_lambda(1.0 / 26.0 + 1e-6) is None
    assert pmax_from_lambda(1e-6) == pytest.approx(
        2.0 * math.log(1e6) / math.log(26.0)
    )
    with pytest.raises(ValueError):
        pmax_from_lambda(1.0)
    with pytest.raises(ValueError):
        pmax_from_lambda(0.0)


def test_pmax_density_frozen_value():
    assert pmax_density(2, 300, 0.4) == pytest.approx(4.692197995759167, abs=1e-12)


def test_pmax_density_base_invariance():
    # same value whether logs are taken base e or base 2
    k, l, d = 3, 120, 0.45
    via_log2 = (
        l * (d - 1.0 / 3.0) * math.log2(2 * k - 1)
        - 2.0 * math.log2(20.0 * math.sqrt(2.0))
    ) / math.log2(26.0)
    assert pmax_density(k, l, d) == pytest.approx(via_log2, abs=1e-12)


def test_pmax_density_param_guards():
    for k, l, d in ((1, 30, 0.4), (2, 31, 0.4), (2, 30, 0.3), (2, 30, 0.5)):
        with pytest.raises(ValueError):
            pmax_density(k, l, d)


def test_theta0_is_two_over_pmax():
    assert theta0_density(2, 300, 0.4) * pmax_density(2, 300, 0.4) == pytest.approx(2.0)
    alpha, C, m = 1.6, 1.0, 2**45
    assert theta0_mplus(alpha, C, m) * pmax_mplus(alpha, C, m) == pytest.approx(2.0)


def test_theta0_none_below_two():
    assert pmax_mplus(1.6, 1.0, 10**6) is None
    assert theta0_mplus(1.6, 1.0, 10**6) is None
    assert pmax_density(2, 30, 0.4) is None
    assert theta0_density(2, 30, 0.4) is None


def test_mplus_param_guards():
    for alpha, C, m in ((1.5, 1.0, 100), (2.0, 1.0, 100), (1.6, 0.0, 100), (1.6, 1.0, 1)):
        with pytest.raises(ValueError):
            pmax_mplus(alpha, C, m)


def test_confdim_frozen_values():
    lower, upper = confdim_bounds(2, 300, 0.4)
    assert lower == pytest.approx(4.692197995759167, abs=1e-12)
    assert upper == pytest.approx(38039.100017307755, abs=1e-9)


def test_reduction_params_worked_example():
    rp = reduction_params(2, 30, 0.4)
    assert rp.m == 29524
    assert rp.rounded is True
    assert rp.m_real == pytest.approx(29524.5)
    assert rp.alpha == pytest.approx(1.8)
    assert rp.C == pytest.approx(0.25)
    assert rp.rho == pytest.approx(1.0 / (4.0 * 29524**1.8))
    assert rp.probability_loss == pytest.approx(6.0 / 3**15)
    keys = set(rp.to_dict())
    assert keys == {"m", "rho", "alpha", "C", "rounded", "m_real", "probability_loss"}


def test_reduction_params_desk_scale_guard():
    with pytest.raises(DeskScaleError):
        reduction_params(2, 300, 0.4)


def test_reduction_round_trip_gap_is_constant():
    # the two pmax formulas differ by (2-3d) ln2 / ln26 plus O(1/m) rounding
    for k, l, d in ((3, 72, 0.46), (3, 78, 0.48), (3, 72, 0.48)):
        rp = reduction_params(k, l, d)
        via_mplus = pmax_mplus(rp.alpha, rp.C, rp.m)
        direct = pmax_density(k, l, d)
        gap = (2.0 - 3.0 * d) * math.log(2.0) / math.log(26.0)
        assert via_mplus - direct == pytest.approx(gap, abs=1e-2)


def test_certify_full_rate_is_zero_lambda_pass():
    cert = certify_presentation(sample_mplus(3, 1.0, seed=SEED), seed=SEED)
    assert cert.verdict == "PASS"
    assert cert.lambda_zero is True
    assert cert.lambda_measured == pytest.approx(0.0, abs=1e-9)
    assert cert.p_range is None
    assert "p_max unbounded" in cert.reason
    assert cert.slack_eps == pytest.approx(1.0 / 13.0, abs=1e-9)


def test_certify_empty_presentation_fails_isolated():
    cert = certify_presentation(Presentation(3, (), positive_only=True))
    assert cert.verdict == "FAIL"
    assert "isolated" in cert.reason


def test_certify_moderate_lambda_pass_without_p_range():
    # dropping one triple from the full m=4 set leaves lambda = 0.05,
    # inside (1/26, 1/13): certified but no p >= 2 exponent
    rels = tuple(itertools.product((1, 2, 3, 4), repeat=3))[:-1]
    cert = certify_presentation(Presentation(4, rels, positive_only=True))
    assert cert.verdict == "PASS"
    assert cert.lambda_zero is False
    assert cert.lambda_measured == pytest.approx(0.05, abs=1e-9)
    assert cert.p_range is None and cert.theta0 is None


def test_certify_attaches_p_range_when_small():
    # dense sample keeps lambda near 0.014, well under 1/26
    cert = certify_presentation(sample_mplus(25, 0.9, seed=7), seed=7)
    assert cert.verdict == "PASS"
    assert not cert.lambda_zero
    assert 0.0 < cert.lambda_measured < 1.0 / 26.0
    lo, hi = cert.p_range
    assert lo == 2.0
    assert hi == pytest.approx(pmax_from_lambda(cert.lambda_measured))
    assert cert.theta0 == pytest.approx(2.0 / hi)
    assert cert.seed == 7


def test_certify_fail_above_threshold():
    cert = certify_presentation(sample_mplus(60, 0.02, seed=0))
    assert cert.verdict == "FAIL"
    assert "threshold" in cert.reason
    assert cert.lambda_measured > 1.0 / 13.0


def test_emit_bounds_pass_and_vacuous():
    cert = emit_bounds(2, 300, 0.4)
    assert cert.verdict == "PASS"
    assert cert.p_range[1] == pytest.approx(4.692197995759167, abs=1e-12)
    assert cert.confdim_upper == pytest.approx(38039.100017307755, abs=1e-9)
    vac = emit_bounds(2, 30, 0.4)
    assert vac.verdict == "VACUOUS"
    assert vac.p_range is None
    assert vac.confdim_upper > 0


def test_emit_bounds_mplus_pass_and_vacuous():
    cert = emit_bounds_mplus(1.6, 1.0, 2**45)
    assert cert.verdict == "PASS"
    assert cert.p_range[1] == pytest.approx(pmax_mplus(1.6, 1.0, 2**45))
    vac = emit_bounds_mplus(1.6, 1.0, 10**6)
    assert vac.verdict == "VACUOUS"
    assert vac.p_range is None


def test_certificate_to_dict_keys():
    d = emit_bounds(2, 300, 0.4).to_dict()
    for key in (
        "verdict",
        "threshold",
        "reason",
        "params",
        "lambda_measured",
        "lambda_zero",
        "slack_eps",
        "theta0",
        "p_range",
        "confdim_lower",
        "confdim_upper",
        "seed",
        "version",
    ):
        assert key in d
    assert isinstance(d["p_range"], list)
