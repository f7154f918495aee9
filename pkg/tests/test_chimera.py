"""Hardware graph structure."""

import pytest

from annealstat.chimera import chimera, parse_topology


def test_single_cell_counts():
    g = chimera(1, 1, 4)
    assert g.num_nodes == 8
    assert g.num_edges() == 16
    assert all(len(g.neighbors(v)) == 4 for v in range(8))


def test_2x2_counts():
    g = chimera(2, 2, 4)
    assert g.num_nodes == 32
    assert g.num_edges() == 80  # 64 intra-cell + 16 inter-cell
    assert max(len(g.neighbors(v)) for v in range(32)) <= 6


def test_smallest_graph():
    g = chimera(1, 1, 1)
    assert g.num_nodes == 2
    assert g.num_edges() == 1


def test_interior_degree_is_shore_plus_two():
    g = chimera(3, 3, 4)
    mid_vertical = g.node_index(1, 1, 0, 0)  # couples up and down
    mid_horizontal = g.node_index(1, 1, 1, 0)  # couples left and right
    assert len(g.neighbors(mid_vertical)) == 6
    assert len(g.neighbors(mid_horizontal)) == 6
    assert max(len(g.neighbors(v)) for v in range(g.num_nodes)) == 6


def test_cells_are_complete_bipartite():
    g = chimera(2, 3, 4)
    for row in range(2):
        for col in range(3):
            for k0 in range(4):
                for k1 in range(4):
                    assert g.has_edge(
                        g.node_index(row, col, 0, k0), g.node_index(row, col, 1, k1)
                    )
                    if k0 != k1:
                        # no intra-shore edges
                        assert not g.has_edge(
                            g.node_index(row, col, 0, k0), g.node_index(row, col, 0, k1)
                        )


def test_coordinate_round_trip():
    g = chimera(3, 5, 4)
    for node in range(g.num_nodes):
        row, col, side, offset = g.node_coords(node)
        assert g.node_index(row, col, side, offset) == node


def test_invalid_dimensions():
    with pytest.raises(ValueError):
        chimera(0, 1, 4)
    with pytest.raises(ValueError):
        chimera(1, 1, 0)


def test_parse_topology():
    g = parse_topology("chimera:2,3,4")
    assert (g.rows, g.cols, g.shore) == (2, 3, 4)
    with pytest.raises(ValueError):
        parse_topology("pegasus:2,2,4")
    with pytest.raises(ValueError):
        parse_topology("chimera:2,2")
    with pytest.raises(ValueError):
        parse_topology("chimera:a,b,c")
