import pytest
from hypothesis import given
from hypothesis import strategies as st

from dresg.errors import InvalidHopError, ValidationError
from dresg.topology import Spreading, build_network, link_distance, nodes_in_ring


@pytest.mark.parametrize(
    "rings, c, branches, nodes, load",
    [(3, 2, 3, 21, 7), (2, 1, 4, 8, 2), (1, 5, 1, 1, 1), (4, 8, 1, 585, 585)],
)
def test_node_counts(rings, c, branches, nodes, load):
    net = build_network(rings, c, branches, 1000.0)
    assert net.node_count == nodes
    assert net.branch_load == load


def test_nodes_in_ring_examples():
    net = build_network(3, 2, 3, 900.0)
    assert nodes_in_ring(net, 3) == 12
    assert nodes_in_ring(net, 1) == 3
    assert nodes_in_ring(build_network(4, 8, 1, 1.0), 4) == 512


@pytest.mark.parametrize("r", [0, 4, -1])
def test_nodes_in_ring_out_of_range(r):
    with pytest.raises(IndexError):
        nodes_in_ring(build_network(3, 2, 1, 900.0), r)


def test_link_distance_examples():
    net = build_network(3, 2, 1, 900.0, Spreading.EQUIDISTANT)
    assert link_distance(net, 3, 3) == 900.0
    assert link_distance(net, 2, 1) == pytest.approx(300.0)
    assert link_distance(net, 1, 1) == pytest.approx(300.0)


def test_hop_past_gateway_rejected():
    net = build_network(3, 2, 1, 900.0)
    with pytest.raises(InvalidHopError):
        link_distance(net, 2, 3)
    with pytest.raises(InvalidHopError):
        link_distance(net, 2, 0)


@pytest.mark.parametrize(
    "kwargs, field",
    [
        ({"rings": 0}, "rings"),
        ({"children_ratio": 0}, "children_ratio"),
        ({"branches": -2}, "branches"),
        ({"max_distance": 0.0}, "max_distance"),
        ({"rings": 2.5}, "rings"),
        ({"spreading": "random"}, "spreading"),
    ],
)
def test_validation_names_field(kwargs, field):
    args = {"rings": 3, "children_ratio": 2, "branches": 1, "max_distance": 100.0, **kwargs}
    with pytest.raises(ValidationError) as info:
        build_network(**args)
    assert info.value.field == field


def test_deterministic_and_immutable():
    a = build_network(5, 3, 2, 1234.5)
    assert a == build_network(5, 3, 2, 1234.5)
    with pytest.raises(AttributeError):
        a.rings = 4


nets = st.builds(
    build_network,
    st.integers(1, 8),
    st.integers(1, 6),
    st.integers(1, 4),
    st.floats(1.0, 1e5),
)


@given(nets)
def test_structure_invariants(net):
    R = net.rings
    assert sum(nodes_in_ring(net, r) for r in range(1, R + 1)) == net.node_count
    assert net.ring_distances[-1] == net.max_distance
    assert all(a < b for a, b in zip(net.ring_distances, net.ring_distances[1:]))
    for r in range(1, R + 1):
        assert net.ring_distances[r - 1] == pytest.approx(r * net.max_distance / R, rel=1e-12)
        assert link_distance(net, r, r) == net.ring_distances[r - 1]
        for d in range(1, r + 1):
            assert link_distance(net, r, d) == pytest.approx(d * net.max_distance / R, rel=1e-9)
