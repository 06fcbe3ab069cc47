import itertools
import math
from collections import defaultdict

import numpy as np
import pytest
from numpy.testing import assert_allclose

from app.models.pydantic_models import CutSide
from app.flow.mincut import SINK, SOURCE, FlowNetwork
from app.shared_services.errors import InputError, LpCutError


def exhaustive_min_cut(network: FlowNetwork) -> float:
    """Minimum over all 2^n source/sink assignments of the plain nodes."""
    n = network.node_count
    index = {SOURCE: n, SINK: n + 1}
    arcs = network.arcs
    tails = np.array([index.get(u, u) for u, _, _, _ in arcs], dtype=np.int64)
    heads = np.array([index.get(v, v) for _, v, _, _ in arcs], dtype=np.int64)
    forward = np.array([c for _, _, c, _ in arcs])
    backward = np.array([r for _, _, _, r in arcs])
    codes = np.arange(1 << n, dtype=np.int64)
    on_source = np.ones((codes.size, n + 2), dtype=bool)
    on_source[:, :n] = ((codes[:, None] >> np.arange(n)) & 1) == 0
    on_source[:, n + 1] = False
    su, sv = on_source[:, tails], on_source[:, heads]
    cuts = (su & ~sv) @ forward + (sv & ~su) @ backward
    return float(np.min(cuts))


def random_network(rng: np.random.Generator, n: int, density: float = 0.4) -> FlowNetwork:
    network = FlowNetwork(n)
    for i in range(n):
        if rng.random() < 0.6:
            network.add_edge(SOURCE, i, float(rng.uniform(0, 10)))
        if rng.random() < 0.6:
            network.add_edge(i, SINK, float(rng.uniform(0, 10)))
    for i, j in itertools.permutations(range(n), 2):
        if rng.random() < density / 2:
            network.add_edge(i, j, float(rng.uniform(0, 10)), float(rng.uniform(0, 10)) if rng.random() < 0.3 else 0.0)
    return network


def test_single_path_bottleneck():
    network = FlowNetwork(1)
    network.add_edge(SOURCE, 0, 3)
    network.add_edge(0, SINK, 2)
    result = network.max_flow()
    assert result.flow_value == 2
    assert result.side == (CutSide.SOURCE_SIDE,)
    assert network.get_segment(0) == CutSide.SOURCE_SIDE


def test_two_node_network():
    network = FlowNetwork(2)
    network.add_edge(SOURCE, 0, 5)
    network.add_edge(SOURCE, 1, 1)
    network.add_edge(0, 1, 1, 1)
    network.add_edge(0, SINK, 1)
    network.add_edge(1, SINK, 5)
    result = network.max_flow()
    assert result.flow_value == pytest.approx(exhaustive_min_cut(network)) == 3
    assert result.side == (CutSide.SOURCE_SIDE, CutSide.SINK_SIDE)
    assert network.cut_capacity(result.side) == 3


def test_zero_capacity_and_empty_networks():
    network = FlowNetwork(2)
    network.add_edge(SOURCE, 0, 0)
    network.add_edge(0, 1, 0)
    network.add_edge(1, SINK, 0)
    result = network.max_flow()
    assert result.flow_value == 0
    assert result.side == (CutSide.SINK_SIDE, CutSide.SINK_SIDE)

    empty = FlowNetwork()
    assert empty.max_flow().flow_value == 0
    isolated = FlowNetwork(3)
    assert isolated.max_flow().side == (CutSide.SINK_SIDE,) * 3


def test_capacity_accumulates():
    network = FlowNetwork(1)
    network.add_edge(SOURCE, 0, 2)
    network.add_edge(SOURCE, 0, 2)
    network.add_edge(0, SINK, 10)
    assert network.arcs == [(SOURCE, 0, 4.0, 0.0), (0, SINK, 10.0, 0.0)]
    assert network.max_flow().flow_value == 4


def test_reverse_pair_shares_arcs():
    network = FlowNetwork(2)
    network.add_edge(0, 1, 1.0, 0.5)
    network.add_edge(1, 0, 2.0)
    assert network.arcs == [(0, 1, 1.0, 2.5)]


def test_add_tedge_and_nodes():
    network = FlowNetwork()
    first = network.add_node()
    rest = network.add_nodes(2)
    assert first == 0 and list(rest) == [1, 2]
    network.add_tedge(0, 4, 1)
    network.add_edge(0, 2, 3)
    network.add_tedge(2, 0, 5)
    result = network.max_flow()
    assert result.flow_value == 4
    assert result.side[1] == CutSide.SINK_SIDE


@pytest.mark.parametrize("args", [
    (0, 0, 1.0),
    (SOURCE, SINK, 1.0),
    (0, 5, 1.0),
    (0, 1, -1.0),
    (0, 1, math.inf),
    (0, 1, math.nan),
    (0, 1, 1.0, -0.5),
])
def test_add_edge_rejects(args):
    network = FlowNetwork(2)
    with pytest.raises(InputError):
        network.add_edge(*args)


def test_results_need_solve():
    network = FlowNetwork(1)
    with pytest.raises(LpCutError):
        network.get_segment(0)
    with pytest.raises(LpCutError):
        network.arc_flows()
    network.max_flow()
    network.add_edge(SOURCE, 0, 1.0)
    with pytest.raises(LpCutError):
        network.residual_capacities()


def test_max_flow_equals_exhaustive_min_cut():
    rng = np.random.default_rng(17)
    for _ in range(100):
        n = int(rng.integers(1, 13))
        network = random_network(rng, n)
        result = network.max_flow()
        expected = exhaustive_min_cut(network)
        assert_allclose(result.flow_value, expected, rtol=1e-9, atol=1e-12)
        assert_allclose(network.cut_capacity(result.side), expected, rtol=1e-9, atol=1e-12)


def test_flow_is_feasible_and_conserved():
    rng = np.random.default_rng(23)
    for _ in range(30):
        n = int(rng.integers(2, 10))
        network = random_network(rng, n)
        result = network.max_flow()
        balance = defaultdict(float)
        for (u, v, flow), (_, _, cap, rev) in zip(network.arc_flows(), network.arcs):
            assert -rev - 1e-9 <= flow <= cap + 1e-9
            balance[u] -= flow
            balance[v] += flow
        for i in range(n):
            assert abs(balance[i]) <= 1e-9
        assert_allclose(balance[SINK], result.flow_value, atol=1e-9)
        assert_allclose(-balance[SOURCE], result.flow_value, atol=1e-9)
        for _, _, forward, backward in network.residual_capacities():
            assert forward >= -1e-12 and backward >= -1e-12


def test_more_capacity_never_lowers_flow():
    rng = np.random.default_rng(31)
    for _ in range(30):
        n = int(rng.integers(2, 9))
        network = random_network(rng, n)
        before = network.max_flow().flow_value
        u, v = (int(k) for k in rng.choice(n, size=2, replace=False))
        network.add_edge(u, v, float(rng.uniform(0, 5)))
        network.add_tedge(u, float(rng.uniform(0, 5)), 0.0)
        assert network.max_flow().flow_value >= before - 1e-9


def test_cut_is_deterministic():
    rng = np.random.default_rng(41)
    network = random_network(rng, 8, density=0.6)
    first = network.max_flow()
    assert network.max_flow() == first
