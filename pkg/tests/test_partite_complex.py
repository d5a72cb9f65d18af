import numpy as np
import pytest

from zuklab.graph_core import random_walk_spectrum
from zuklab.partite_complex import (
    ComplexError,
    build_complex,
    complete_multipartite_complex,
    from_json_dict,
    is_gallery_connected,
    link,
    link_vertices,
    random_tripartite_complex,
)

SEED = 77
rng = np.random.default_rng(SEED)


def test_complete_tripartite_face_counts():
    x = complete_multipartite_complex((2, 2, 2))
    assert x.n == 2
    assert x.vertex_count == 6
    assert len(x.cells) == 8
    assert len(x.faces_of_dim(0)) == 6
    assert len(x.faces_of_dim(1)) == 12
    assert len(x.faces_of_dim(2)) == 8


def test_weights_complete_2_2_2():
    x = complete_multipartite_complex((2, 2, 2))
    # vertex: 2! * 4 cells, edge: 1! * 2 cells, cell: 0! * 1
    assert x.weight((0,)) == 8
    assert x.weight((0, 2)) == 2
    assert x.weight(x.cells[0]) == 1


def test_weights_1_1_2():
    x = complete_multipartite_complex((1, 1, 2))
    assert len(x.cells) == 2
    assert [x.weight((v,)) for v in range(4)] == [4, 4, 2, 2]
    assert x.weight((0, 1)) == 2


def test_weight_rejects_non_faces():
    x = complete_multipartite_complex((1, 1, 2))
    with pytest.raises(ComplexError, match="not a face"):
        x.weight((2, 3))
    with pytest.raises(ComplexError, match="repeated"):
        x.weight((0, 0))


def test_build_complex_validation():
    with pytest.raises(ComplexError, match="not partite"):
        build_complex(2, (0, 0, 1), [(0, 1, 2)])
    with pytest.raises(ComplexError, match="vertices"):
        build_complex(2, (0, 1, 2), [(0, 1)])
    with pytest.raises(ComplexError, match="duplicate"):
        build_complex(2, (0, 1, 2), [(0, 1, 2), (2, 1, 0)])
    with pytest.raises(ComplexError, match="unknown vertex"):
        build_complex(2, (0, 1, 2), [(0, 1, 5)])
    with pytest.raises(ComplexError, match="types"):
        build_complex(2, (0, 1, 7), [(0, 1, 2)])


def test_cells_are_canonicalized():
    x = build_complex(2, (0, 1, 2, 0), [(2, 1, 0), (1, 2, 3)])
    assert x.cells == ((0, 1, 2), (1, 2, 3))


def test_link_of_vertex_in_complete_complex():
    x = complete_multipartite_complex((2, 2, 2))
    g = link(x, (0,))
    assert g.vertex_count == 4
    assert g.labels == ("2", "3", "4", "5")
    rep = random_walk_spectrum(g)
    assert rep.is_connected
    assert rep.lambda_bipartite == pytest.approx(0.0, abs=1e-12)


def test_link_requires_codimension_two_face():
    x = complete_multipartite_complex((2, 2, 2))
    with pytest.raises(ComplexError, match="dimension 0"):
        link(x, (0, 2))
    lonely = build_complex(2, (0, 1, 2, 0), [(0, 1, 2)])
    with pytest.raises(ComplexError, match="not a face"):
        link(lonely, (3,))


def test_link_vertices_order():
    x = complete_multipartite_complex((1, 1, 2))
    assert link_vertices(x, (0,)) == (1, 2, 3)
    assert link_vertices(x, (2,)) == (0, 1)


def test_link_multiplicity_counts_cells():
    x = complete_multipartite_complex((1, 1, 2))
    g = link(x, (2,))
    # both endpoints lie in one cell with vertex 2: single edge, mult 1
    assert g.edges == ((0, 1, 1),)
    g01 = link(x, (0,))
    assert sorted(g01.edges) == [(0, 1, 1), (0, 2, 1)]


def test_gallery_connectivity():
    assert is_gallery_connected(complete_multipartite_complex((2, 2, 2)))
    split = build_complex(2, (0, 1, 2, 0, 1, 2), [(0, 1, 2), (3, 4, 5)])
    assert not is_gallery_connected(split)
    single = build_complex(2, (0, 1, 2), [(0, 1, 2)])
    assert is_gallery_connected(single)


def test_json_round_trip():
    x = complete_multipartite_complex((2, 3, 2))
    y = from_json_dict(x.to_json_dict())
    assert y.n == x.n
    assert y.vertex_types == x.vertex_types
    assert y.cells == x.cells


def test_random_tripartite_extremes():
    full = random_tripartite_complex((3, 3, 3), 1.0, rng)
    assert len(full.cells) == 27
    empty = random_tripartite_complex((3, 3, 3), 0.0, rng)
    assert len(empty.cells) == 0


def test_random_tripartite_types_and_determinism():
    r1 = np.random.default_rng(5)
    r2 = np.random.default_rng(5)
    a = random_tripartite_complex((2, 3, 4), 0.7, r1)
    b = random_tripartite_complex((2, 3, 4), 0.7, r2)
    assert a.cells == b.cells
    assert a.vertex_types == (0, 0, 1, 1, 1, 2, 2, 2, 2)
    for cell in a.cells:
        assert a.type_of(cell) == (0, 1, 2)
