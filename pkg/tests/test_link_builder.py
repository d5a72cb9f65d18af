import numpy as np
import pytest

from zuklab.graph_core import random_walk_spectrum
from zuklab.link_builder import build_link
from zuklab.random_groups import Presentation, sample_mplus

SEED = 404
rng = np.random.default_rng(SEED)


def total_multiplicity(g) -> int:
    return sum(m for _, _, m in g.edges)


def test_single_relator_layout():
    dec = build_link(Presentation(3, ((1, 2, 3),), positive_only=True))
    assert dec.m == 3
    assert dec.labels == ("s1", "s2", "s3", "s1^-1", "s2^-1", "s3^-1")
    assert dec.L1.edges == ((1, 3, 1),)
    assert dec.L2.edges == ((2, 4, 1),)
    assert dec.L3.edges == ((0, 5, 1),)
    assert total_multiplicity(dec.full) == 3


def test_positions_map_to_layers():
    # relator (a, b, c) contributes (b, a^-1), (c, b^-1), (a, c^-1)
    dec = build_link(Presentation(4, ((2, 4, 1),), positive_only=True))
    assert dec.L1.edges == ((3, 5, 1),)
    assert dec.L2.edges == ((0, 7, 1),)
    assert dec.L3.edges == ((1, 4, 1),)


def test_edge_count_matches_relator_count():
    for seed in range(10):
        p = sample_mplus(12, 0.01, seed=seed)
        dec = build_link(p)
        assert total_multiplicity(dec.full) == 3 * len(p.relators)
        for layer in (dec.L1, dec.L2, dec.L3):
            assert total_multiplicity(layer) == len(p.relators)


def test_repeated_positions_accumulate_multiplicity():
    p = Presentation(2, ((1, 1, 1), (1, 1, 2)), positive_only=True)
    dec = build_link(p)
    # both relators put (s1, s1^-1) in position 1
    assert (0, 2, 2) in dec.L1.edges
    assert total_multiplicity(dec.full) == 6


def test_full_rate_gives_complete_bipartite_link():
    p = sample_mplus(3, 1.0, seed=SEED)
    dec = build_link(p)
    assert len(p.relators) == 27
    edges = dec.full.edges
    assert len(edges) == 9
    assert all(m == 9 for _, _, m in edges)
    assert all(u < 3 <= v for u, v, _ in edges)
    rep = random_walk_spectrum(dec.full)
    assert rep.lambda_bipartite <= 1e-9
    assert dec.isolated == ()


def test_isolated_vertices_reported():
    dec = build_link(Presentation(5, ((1, 2, 3),), positive_only=True))
    assert dec.isolated == (3, 4, 8, 9)


def test_rejects_signed_presentations():
    with pytest.raises(ValueError, match="positive"):
        build_link(Presentation(3, ((1, -2, 3),)))


def test_rejects_wrong_length_relators():
    with pytest.raises(ValueError, match="length-3"):
        Presentation(3, ((1, 2, 3, 1, 2, 3),), positive_only=True)
