import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from app.models.pydantic_models import CertificateStatus, EnergyFunction, Labeling, TermPolicy
from app.energy.energy_model import evaluate_powered, max_term
from app.energy.reduction import solve
from app.energy.submodularity import certify_all_p, is_submodular
from app.oracle import oracle as oracle_module
from app.oracle.generators import clean_image, grid_denoise_instance, random_instance
from app.oracle.oracle import brute_force_min, brute_force_minimax, label_matrix
from app.shared_services.config import Settings
from app.shared_services.errors import DomainError, InputError, SizeError


def _zero_energy(n):
    return EnergyFunction.from_tables(n, [(0.0, 0.0)] * n)


def _connected(n, edges):
    parent = list(range(n))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for i, j in edges:
        parent[find(i)] = find(j)
    return len({find(v) for v in range(n)}) == 1


# ---------------------------------------------------------------------------
# brute force
# ---------------------------------------------------------------------------

def test_label_matrix_bit_order():
    assert_array_equal(label_matrix(np.arange(4), 2), [[0, 0], [1, 0], [0, 1], [1, 1]])


def test_brute_force_min_examples(two_vertex, single_vertex):
    result = brute_force_min(two_vertex, 1)
    assert result.min_value == 1.0
    assert result.minimizers == (Labeling.of([0, 1]),)

    result = brute_force_min(single_vertex, 3)
    assert result.min_value == 8.0
    assert result.minimizers == (Labeling.of([1]),)


def test_brute_force_all_zero():
    result = brute_force_min(_zero_energy(3), 2)
    assert result.min_value == 0.0
    assert len(result.minimizers) == 8
    assert len(set(result.minimizers)) == 8


def test_brute_force_minimax_examples(two_vertex, single_vertex, empty_energy):
    assert brute_force_minimax(two_vertex).min_value == 1.0
    assert brute_force_minimax(two_vertex).minimizers == (Labeling.of([0, 1]),)
    assert brute_force_minimax(single_vertex).minimizers == (Labeling.of([1]),)
    assert brute_force_minimax(single_vertex).min_value == 2.0
    zero = brute_force_minimax(_zero_energy(3))
    assert zero.min_value == 0.0 and len(zero.minimizers) == 8
    empty = brute_force_minimax(empty_energy)
    assert empty.min_value == 0.0 and empty.minimizers == (Labeling.of([]),)


def test_brute_force_errors(two_vertex):
    with pytest.raises(DomainError):
        brute_force_min(two_vertex, 0.5)
    with pytest.raises(SizeError):
        brute_force_min(_zero_energy(21), 1)
    with pytest.raises(SizeError):
        brute_force_minimax(_zero_energy(21))


def test_size_guard_follows_settings(monkeypatch, two_vertex):
    monkeypatch.setattr(oracle_module, "get_settings", lambda: Settings(oracle_max_vertices=1))
    with pytest.raises(SizeError, match="n <= 1"):
        brute_force_min(two_vertex, 1)


def test_oracle_agrees_with_evaluation():
    for seed in range(20):
        e = random_instance(8, 1.5, TermPolicy.ANY, seed)
        result = brute_force_min(e, 1)
        for x in result.minimizers:
            assert_allclose(evaluate_powered(e, x, 1), result.min_value, rtol=1e-15)
        minimax = brute_force_minimax(e)
        for x in minimax.minimizers:
            assert max_term(e, x) == minimax.min_value


def test_oracle_is_deterministic():
    e = random_instance(10, 2.0, TermPolicy.ANY, 99)
    assert brute_force_min(e, 2) == brute_force_min(e, 2)
    assert brute_force_minimax(e) == brute_force_minimax(e)


# ---------------------------------------------------------------------------
# random generator
# ---------------------------------------------------------------------------

def test_random_single_vertex():
    for policy in TermPolicy:
        e = random_instance(1, 3.0, policy, 5)
        assert e.vertex_count == 1
        assert e.edge_count == 0
        assert len(e.unaries) == 1


def test_random_same_seed_same_instance():
    assert random_instance(9, 1.5, TermPolicy.CERTIFIED, 12) == random_instance(9, 1.5, TermPolicy.CERTIFIED, 12)
    assert random_instance(9, 1.5, TermPolicy.CERTIFIED, 12) != random_instance(9, 1.5, TermPolicy.CERTIFIED, 13)


@pytest.mark.parametrize("seed", range(5))
def test_random_term_policies(seed):
    certified = random_instance(8, 2.0, TermPolicy.CERTIFIED, seed)
    assert all(certify_all_p(t).status == CertificateStatus.CERTIFIED_ALL_P for t in certified.pairwise)
    submodular = random_instance(8, 2.0, "submodular", seed)
    assert all(is_submodular(t) for t in submodular.pairwise)


@pytest.mark.parametrize("n, edge_factor", [(2, 0.0), (5, 1.0), (8, 1.5), (6, 10.0), (12, 2.5)])
def test_random_topology_shape(n, edge_factor):
    e = random_instance(n, edge_factor, TermPolicy.ANY, 3)
    expected = min(max(n - 1, math.floor(edge_factor * n)), n * (n - 1) // 2)
    assert e.edge_count == expected
    assert _connected(n, e.edges)
    values = [v for u in e.unaries for v in u.values] + [v for t in e.pairwise for v in t.values]
    assert all(0.0 <= v < 10.0 for v in values)


def test_random_rejects_bad_arguments():
    with pytest.raises(InputError):
        random_instance(0, 1.0)
    with pytest.raises(InputError):
        random_instance(4, -1.0)
    with pytest.raises(ValueError):
        random_instance(4, 1.0, "bogus")


# ---------------------------------------------------------------------------
# grid generator
# ---------------------------------------------------------------------------

def test_clean_image():
    image = clean_image(8, 8)
    assert image.sum() == 16
    assert image[2:6, 2:6].all()
    assert_array_equal(clean_image(2, 2), np.ones((2, 2)))


def test_grid_instance_shape():
    instance = grid_denoise_instance(5, 4, noise_rate=0.2, smoothness=0.7, data_weight=2.0, seed=1)
    e = instance.energy
    assert e.vertex_count == 20
    assert e.edge_count == 5 * 3 + 4 * 4
    assert e.edges[:2] == ((0, 1), (0, 5))
    assert all(t.values == (0.0, 0.7, 0.7, 0.0) for t in e.pairwise)
    for v, unary in enumerate(e.unaries):
        observed = instance.observed.ravel()[v]
        assert unary.values == (observed * 2.0, (1 - observed) * 2.0)


def test_grid_noise_extremes():
    clean = grid_denoise_instance(6, 6, noise_rate=0.0, seed=2)
    assert_array_equal(clean.observed, clean.clean)
    flipped = grid_denoise_instance(6, 6, noise_rate=1.0, seed=2)
    assert_array_equal(flipped.observed, 1 - flipped.clean)


def test_grid_same_seed_same_instance():
    assert grid_denoise_instance(6, 5, 0.3, seed=8).energy == grid_denoise_instance(6, 5, 0.3, seed=8).energy


@pytest.mark.parametrize("p", [1.0, 2.0, 8.0, 64.0])
def test_noise_free_grid_recovers_clean_image(p):
    instance = grid_denoise_instance(2, 2, noise_rate=0.0, seed=0)
    solution = solve(instance.energy, p)
    assert solution.labeling.as_string() == "1111"
    assert solution.powered_energy == 0.0


@pytest.mark.parametrize("kwargs", [
    {"width": 0, "height": 3},
    {"width": 3, "height": 3, "noise_rate": 1.5},
    {"width": 3, "height": 3, "smoothness": 0.0},
    {"width": 3, "height": 3, "data_weight": -1.0},
])
def test_grid_rejects_bad_arguments(kwargs):
    with pytest.raises(InputError):
        grid_denoise_instance(**kwargs)
