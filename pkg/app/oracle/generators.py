# lpcut/app/oracle/generators.py
# Seeded instance generators. The algorithms are documented in README.md;
# changing the order of random draws changes every generated instance.

import math
from typing import List, NamedTuple, Tuple, Union

import numpy as np

from app.models.pydantic_models import CertificateStatus, EnergyFunction, GridShape, PairwiseTerm, TermPolicy
from app.energy.submodularity import certify_all_p, is_submodular
from app.shared_services.errors import InputError

VALUE_HIGH = 10.0


class GridInstance(NamedTuple):
    energy: EnergyFunction
    grid: GridShape
    clean: np.ndarray
    observed: np.ndarray


def _accepts(values: np.ndarray, policy: TermPolicy) -> bool:
    if policy == TermPolicy.ANY:
        return True
    term = PairwiseTerm.of(*(float(v) for v in values))
    if policy == TermPolicy.SUBMODULAR:
        return is_submodular(term)
    return certify_all_p(term).status == CertificateStatus.CERTIFIED_ALL_P


def random_topology(n: int, edge_factor: float, rng: np.random.Generator) -> List[Tuple[int, int]]:
    """Random recursive spanning tree, then uniform extra edges up to floor(edge_factor * n) in total."""
    edges = []
    seen = set()
    for v in range(1, n):
        parent = int(rng.integers(0, v))
        edges.append((parent, v))
        seen.add((parent, v))
    target = min(max(len(edges), math.floor(edge_factor * n)), n * (n - 1) // 2)
    while len(edges) < target:
        i, j = (int(k) for k in rng.integers(0, n, size=2))
        key = (min(i, j), max(i, j))
        if i == j or key in seen:
            continue
        seen.add(key)
        edges.append((i, j))
    return edges


def random_instance(n: int,
                    edge_factor: float,
                    term_policy: Union[TermPolicy, str] = TermPolicy.CERTIFIED,
                    seed: int = 0) -> EnergyFunction:
    """
    Connected random instance with values uniform in [0, 10).

    Pairwise tables are redrawn until they satisfy term_policy; for CERTIFIED
    about half of all draws are accepted.
    """
    if n < 1:
        raise InputError(f"n must be at least 1, got {n}")
    if not (math.isfinite(edge_factor) and edge_factor >= 0):
        raise InputError(f"edge_factor must be non-negative, got {edge_factor}")
    policy = TermPolicy(term_policy)
    rng = np.random.default_rng(seed)
    edges = random_topology(n, edge_factor, rng)
    unaries = rng.uniform(0.0, VALUE_HIGH, size=(n, 2))
    tables = []
    for _ in edges:
        while True:
            values = rng.uniform(0.0, VALUE_HIGH, size=4)
            if _accepts(values, policy):
                break
        tables.append(values)
    return EnergyFunction.from_tables(
        n,
        [(float(u0), float(u1)) for u0, u1 in unaries],
        [(i, j, tuple(float(v) for v in t)) for (i, j), t in zip(edges, tables)],
    )


def clean_image(width: int, height: int) -> np.ndarray:
    """Centered rectangle of ones on a zero background."""
    image = np.zeros((height, width), dtype=np.int64)
    image[height // 4:height - height // 4, width // 4:width - width // 4] = 1
    return image


def grid_denoise_instance(width: int,
                          height: int,
                          noise_rate: float = 0.1,
                          smoothness: float = 1.0,
                          data_weight: float = 1.0,
                          seed: int = 0) -> GridInstance:
    """
    4-connected denoising problem. The unary cost of label l at a pixel is
    |observed - l| * data_weight; every edge carries (0, s, s, 0) with
    s = smoothness, which is certified for all p.
    """
    if width < 1 or height < 1:
        raise InputError(f"grid must be at least 1x1, got {width}x{height}")
    if not (0.0 <= noise_rate <= 1.0):
        raise InputError(f"noise_rate must be in [0, 1], got {noise_rate}")
    if not (math.isfinite(smoothness) and smoothness > 0):
        raise InputError(f"smoothness must be positive, got {smoothness}")
    if not (math.isfinite(data_weight) and data_weight > 0):
        raise InputError(f"data_weight must be positive, got {data_weight}")
    rng = np.random.default_rng(seed)
    clean = clean_image(width, height)
    flips = rng.random((height, width)) < noise_rate
    observed = np.where(flips, 1 - clean, clean)

    unaries = [(float(o) * data_weight, float(1 - o) * data_weight) for o in observed.ravel()]
    edges = []
    for r in range(height):
        for c in range(width):
            v = r * width + c
            if c + 1 < width:
                edges.append((v, v + 1, (0.0, smoothness, smoothness, 0.0)))
            if r + 1 < height:
                edges.append((v, v + width, (0.0, smoothness, smoothness, 0.0)))
    energy = EnergyFunction.from_tables(width * height, unaries, edges)
    return GridInstance(energy=energy, grid=GridShape(width=width, height=height), clean=clean, observed=observed)
