import itertools
import json

import numpy as np
import pytest

from zuklab.random_groups import (
    DeskScaleError,
    ModelParams,
    Presentation,
    count_cyclically_reduced,
    count_wprime,
    is_cyclically_reduced,
    is_reduced,
    phi_expand,
    presentation_from_json,
    rank_wprime,
    sample_binomial,
    sample_bprime,
    sample_density,
    sample_from_params,
    sample_mplus,
    unrank_wprime,
)

SEED = 97

# frozen closed-form counts: k * ((2k-1)^(t-1) + 1) / 2
WPRIME_COUNTS = {
    (2, 1): 2,
    (2, 2): 4,
    (2, 3): 10,
    (2, 4): 28,
    (2, 5): 82,
    (2, 6): 244,
    (3, 1): 3,
    (3, 2): 9,
    (3, 3): 39,
    (3, 4): 189,
    (3, 5): 939,
    (3, 6): 4689,
}


def letters(k: int) -> list[int]:
    return list(range(1, k + 1)) + [-i for i in range(1, k + 1)]


def enumerate_positive_ended(k: int, t: int) -> list[tuple[int, ...]]:
    # oracle: reduced words whose first and last letters are positive
    out = []
    for w in itertools.product(letters(k), repeat=t):
        if w[0] < 0 or w[-1] < 0:
            continue
        if is_reduced(w):
            out.append(w)
    return out


@pytest.mark.parametrize("k,t", sorted(WPRIME_COUNTS))
def test_count_wprime_frozen(k, t):
    assert count_wprime(k, t) == WPRIME_COUNTS[(k, t)]


@pytest.mark.parametrize("k,t", [(2, 1), (2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (3, 4)])
def test_count_wprime_matches_enumeration(k, t):
    assert count_wprime(k, t) == len(enumerate_positive_ended(k, t))


@pytest.mark.parametrize("k,t", [(2, 3), (2, 4), (3, 3)])
def test_unrank_matches_sorted_enumeration(k, t):
    # unrank order follows letter order 1..k then -1..-k at each slot
    order = {s: i for i, s in enumerate(letters(k))}
    expected = sorted(enumerate_positive_ended(k, t), key=lambda w: [order[s] for s in w])
    got = [unrank_wprime(k, t, i) for i in range(count_wprime(k, t))]
    assert got == expected


@pytest.mark.parametrize("k,t", [(2, 4), (2, 5), (3, 3), (3, 4)])
def test_rank_round_trip(k, t):
    for i in range(count_wprime(k, t)):
        assert rank_wprime(k, t, unrank_wprime(k, t, i)) == i


def test_unrank_bounds():
    with pytest.raises(ValueError):
        unrank_wprime(2, 3, 10)
    with pytest.raises(ValueError):
        unrank_wprime(2, 3, -1)


def brute_cyclically_reduced(k: int, l: int) -> int:
    return sum(1 for w in itertools.product(letters(k), repeat=l) if is_cyclically_reduced(w))


@pytest.mark.parametrize("l", [2, 3, 4, 5, 6])
def test_count_cyclically_reduced_matches_brute_force(l):
    assert count_cyclically_reduced(2, l) == brute_cyclically_reduced(2, l)


def test_count_cyclically_reduced_frozen():
    assert count_cyclically_reduced(2, 2) == 12
    assert count_cyclically_reduced(2, 3) == 28


def test_reduced_predicates():
    assert is_reduced((1, 2, -1))
    assert not is_reduced((1, -1, 2))
    assert is_cyclically_reduced((1, 2))
    assert not is_cyclically_reduced((1, 2, -1))


def test_sample_density_enumerates_small_case():
    # (2k-1)^(dl) = 3^3 = 27 distinct relators out of 48
    p = sample_density(2, 6, 0.5, seed=SEED)
    assert len(p.relators) == 27
    assert len(set(p.relators)) == 27
    assert all(len(w) == 6 and is_cyclically_reduced(w) for w in p.relators)
    assert p.alphabet_size == 2
    assert not p.positive_only


def test_sample_density_guards_huge_counts():
    with pytest.raises(DeskScaleError):
        sample_density(2, 200, 0.4, seed=SEED)


def test_sample_binomial_full_rate_takes_everything():
    p = sample_binomial(2, 4, 1.0, seed=SEED)
    assert len(p.relators) == count_cyclically_reduced(2, 4)
    assert len(set(p.relators)) == len(p.relators)


def test_sample_binomial_guards_expected_count():
    with pytest.raises(DeskScaleError):
        sample_binomial(2, 60, 1.0, seed=SEED)


def test_sample_binomial_sparse_large_population():
    # Poisson path for populations past 2^31
    p = sample_binomial(2, 60, 1e-25, seed=SEED)
    assert all(len(w) == 60 and is_cyclically_reduced(w) for w in p.relators)


def test_sample_bprime_full_rate_and_blocks():
    p = sample_bprime(2, 6, 1.0, seed=SEED)
    n = count_wprime(2, 2)
    assert len(p.relators) == n**3
    assert len(set(p.relators)) == n**3
    for w in p.relators:
        parts = (w[0:2], w[2:4], w[4:6])
        for block in parts:
            rank_wprime(2, 2, block)


def test_sample_bprime_requires_divisible_length():
    with pytest.raises(ValueError, match="divisible by 3"):
        sample_bprime(2, 7, 0.5, seed=SEED)


def test_sample_mplus_full_rate():
    p = sample_mplus(3, 1.0, seed=SEED)
    assert len(p.relators) == 27
    assert p.positive_only
    assert p.alphabet_size == 3
    assert sorted(p.relators) == sorted(itertools.product((1, 2, 3), repeat=3))


def test_sample_mplus_guards_expected_count():
    with pytest.raises(DeskScaleError):
        sample_mplus(5000, 1.0, seed=SEED)


def test_phi_expand_small_case():
    base = sample_mplus(count_wprime(2, 3), 0.002, seed=SEED)
    out = phi_expand(base, 2, 9)
    assert len(out.relators) == len(base.relators)
    assert out.alphabet_size == 2
    assert not out.positive_only
    expanded = sorted(
        sum((unrank_wprime(2, 3, s - 1) for s in triple), ()) for triple in base.relators
    )
    assert list(out.relators) == expanded
    assert all(is_cyclically_reduced(w) for w in out.relators)


def test_phi_expand_rejects_mismatched_alphabet():
    base = sample_mplus(11, 0.01, seed=SEED)
    with pytest.raises(ValueError, match="alphabet"):
        phi_expand(base, 2, 9)


def test_presentation_validation():
    with pytest.raises(ValueError):
        Presentation(0, ((1,),))
    with pytest.raises(ValueError):
        Presentation(2, ((0,),))
    with pytest.raises(ValueError):
        Presentation(2, ((3,),))
    with pytest.raises(ValueError):
        Presentation(2, ((-1,),), positive_only=True)


def test_presentation_json_round_trip():
    p = sample_density(2, 6, 0.5, seed=SEED)
    q = presentation_from_json(json.loads(json.dumps(p.to_json_dict())))
    assert q == p


def test_model_params_validation_and_dispatch():
    mp = ModelParams(model="density", seed=SEED, k=2, l=6, d=0.5)
    assert sample_from_params(mp) == sample_density(2, 6, 0.5, seed=SEED)
    with pytest.raises(ValueError, match="requires parameter"):
        ModelParams(model="density", seed=SEED, k=2, l=6).validate()
    with pytest.raises(ValueError, match="model"):
        ModelParams(model="nope", seed=SEED).validate()
    mb = ModelParams(model="mplus", seed=SEED, m=3, rho=1.0)
    assert sample_from_params(mb) == sample_mplus(3, 1.0, seed=SEED)


def test_sampling_is_seed_deterministic():
    a = sample_binomial(2, 8, 0.01, seed=5)
    b = sample_binomial(2, 8, 0.01, seed=5)
    c = sample_binomial(2, 8, 0.01, seed=6)
    assert a == b
    assert a != c
    assert sample_mplus(20, 0.002, seed=7) == sample_mplus(20, 0.002, seed=7)


def test_relators_are_sorted_and_distinct():
    for p in (
        sample_binomial(2, 8, 0.02, seed=SEED),
        sample_bprime(2, 9, 0.001, seed=SEED),
        sample_mplus(15, 0.005, seed=SEED),
    ):
        assert list(p.relators) == sorted(set(p.relators))
