# lpcut/app/energy/energy_model.py
# Evaluation of labeling energies and their l_p variants.

import math
from typing import Sequence, Tuple, Union

import numpy as np

from app.models.pydantic_models import EnergyFunction, Labeling, PairwiseTerm, UnaryTerm
from app.shared_services.errors import DomainError, InputError, NumericRangeError

LabelingLike = Union[Labeling, Sequence[int]]


def check_power(p: float, strict: bool = False) -> float:
    """Validate an exponent: finite and >= 1 (> 1 when strict)."""
    try:
        p = float(p)
    except (TypeError, ValueError):
        raise DomainError(f"p must be a real number, got {p!r}")
    if not math.isfinite(p):
        raise DomainError(f"p must be finite, got {p}")
    if p < 1.0 or (strict and p == 1.0):
        bound = "> 1" if strict else ">= 1"
        raise DomainError(f"p must be {bound}, got {p}")
    return p


def unary_table(e: EnergyFunction) -> np.ndarray:
    """(n, 2) array of [phi_i(0), phi_i(1)]."""
    if not e.unaries:
        return np.zeros((0, 2))
    return np.array([u.values for u in e.unaries], dtype=float)


def pairwise_table(e: EnergyFunction) -> np.ndarray:
    """(m, 4) array of [phi(0,0), phi(0,1), phi(1,0), phi(1,1)]."""
    if not e.pairwise:
        return np.zeros((0, 4))
    return np.array([t.values for t in e.pairwise], dtype=float)


def edge_index(e: EnergyFunction) -> np.ndarray:
    if not e.edges:
        return np.zeros((0, 2), dtype=np.int64)
    return np.array(e.edges, dtype=np.int64)


def as_label_array(e: EnergyFunction, x: LabelingLike) -> np.ndarray:
    labeling = x if isinstance(x, Labeling) else Labeling.of(x)
    if len(labeling) != e.vertex_count:
        raise InputError(f"labeling has {len(labeling)} entries but the energy has {e.vertex_count} vertices")
    return np.array(labeling.labels, dtype=np.int64)


def term_values(unaries: np.ndarray, pairwise: np.ndarray, edges: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """
    Active term values for a batch of labelings.

    labels is a (k, n) 0/1 matrix; the result is (k, n + m) with the unary
    values first, then one pairwise value per edge in edge order.
    """
    n = unaries.shape[0]
    m = pairwise.shape[0]
    unary_part = unaries[np.arange(n), labels]
    config = 2 * labels[:, edges[:, 0]] + labels[:, edges[:, 1]]
    pairwise_part = pairwise[np.arange(m), config]
    return np.concatenate([unary_part, pairwise_part], axis=1)


def powered_sums(unaries: np.ndarray, pairwise: np.ndarray, edges: np.ndarray, labels: np.ndarray, p: float) -> np.ndarray:
    """Sum of p-th powers of the active terms for every row of labels; tables are expected unpowered."""
    values = term_values(unaries, pairwise, edges, labels)
    if p != 1.0:
        with np.errstate(over="ignore"):
            values = np.power(values, p)
    return np.sum(values, axis=1)


def labeling_term_values(e: EnergyFunction, x: LabelingLike) -> np.ndarray:
    labels = as_label_array(e, x)[None, :]
    return term_values(unary_table(e), pairwise_table(e), edge_index(e), labels)[0]


def evaluate_powered(e: EnergyFunction, x: LabelingLike, p: float) -> float:
    """Sum of all active unary and pairwise terms raised to the power p."""
    p = check_power(p)
    labels = as_label_array(e, x)[None, :]
    total = float(powered_sums(unary_table(e), pairwise_table(e), edge_index(e), labels, p)[0])
    if not math.isfinite(total):
        raise NumericRangeError(f"powered energy overflows at p={p}; normalize the energy first")
    return total


def lp_norm(e: EnergyFunction, x: LabelingLike, p: float) -> float:
    """The l_p norm of the vector of active term values."""
    p = check_power(p)
    if p == 1.0:
        return evaluate_powered(e, x, 1.0)
    values = labeling_term_values(e, x)
    if values.size == 0:
        return 0.0
    top = float(np.max(values))
    if top == 0.0:
        return 0.0
    # factor out the largest term so large p stays in range
    return top * float(np.sum(np.power(values / top, p))) ** (1.0 / p)


def max_term(e: EnergyFunction, x: LabelingLike) -> float:
    """Largest active term value, 0 for an energy without terms."""
    values = labeling_term_values(e, x)
    if values.size == 0:
        return 0.0
    return float(np.max(values))


def max_value(e: EnergyFunction) -> float:
    """Largest value stored in any unary or pairwise table."""
    tables = [unary_table(e).ravel(), pairwise_table(e).ravel()]
    values = np.concatenate(tables)
    return float(np.max(values)) if values.size else 0.0


def with_tables(e: EnergyFunction, unaries: np.ndarray, pairwise: np.ndarray) -> EnergyFunction:
    """Same topology, new term tables."""
    return EnergyFunction(
        topology=e.topology,
        unaries=tuple(UnaryTerm(cost0=float(u0), cost1=float(u1)) for u0, u1 in unaries),
        pairwise=tuple(PairwiseTerm.of(*(float(v) for v in row)) for row in pairwise),
    )


def power_transform(e: EnergyFunction, p: float) -> EnergyFunction:
    """Raise every stored table value to the power p."""
    p = check_power(p)
    if p == 1.0:
        return e
    with np.errstate(over="ignore"):
        unaries = np.power(unary_table(e), p)
        pairwise = np.power(pairwise_table(e), p)
    if not (np.all(np.isfinite(unaries)) and np.all(np.isfinite(pairwise))):
        raise NumericRangeError(f"raising the terms to p={p} overflows; normalize the energy first")
    return with_tables(e, unaries, pairwise)


def normalize(e: EnergyFunction) -> Tuple[EnergyFunction, float]:
    """Divide every value by the largest one; returns (normalized energy, scale)."""
    scale = max_value(e)
    if scale <= 0.0:
        return e, 1.0
    return with_tables(e, unary_table(e) / scale, pairwise_table(e) / scale), scale


def scale_energy(e: EnergyFunction, factor: float) -> EnergyFunction:
    if not (math.isfinite(factor) and factor > 0.0):
        raise InputError(f"scale factor must be positive and finite, got {factor}")
    return with_tables(e, unary_table(e) * factor, pairwise_table(e) * factor)
