# lpcut/app/oracle/oracle.py
# Exhaustive minimization over all 2^n labelings, for small instances.

from typing import Callable

import numpy as np

from app.models.pydantic_models import EnergyFunction, Labeling, OracleResult
from app.energy.energy_model import check_power, edge_index, pairwise_table, powered_sums, term_values, unary_table
from app.shared_services.config import ORACLE_HARD_LIMIT, get_settings
from app.shared_services.errors import NumericRangeError, SizeError
from app.shared_services.logger_setup import setup_logger

logger = setup_logger()

CHUNK = 1 << 15
RELATIVE_TIE = 1e-12


def label_matrix(codes: np.ndarray, n: int) -> np.ndarray:
    """Rows of 0/1 labels; bit i of the code is the label of vertex i."""
    return (codes[:, None] >> np.arange(n, dtype=np.int64)) & 1


def _check_size(e: EnergyFunction) -> None:
    limit = min(get_settings().oracle_max_vertices, ORACLE_HARD_LIMIT)
    if e.vertex_count > limit:
        raise SizeError(f"oracle enumerates 2^n labelings and is limited to n <= {limit}; got n = {e.vertex_count}")


def _scan(e: EnergyFunction, objective: Callable[[np.ndarray], np.ndarray]) -> OracleResult:
    _check_size(e)
    n = e.vertex_count
    total = 1 << n
    values = np.empty(total)
    for start in range(0, total, CHUNK):
        codes = np.arange(start, min(start + CHUNK, total), dtype=np.int64)
        values[start:start + codes.size] = objective(label_matrix(codes, n))
    if not np.all(np.isfinite(values)):
        raise NumericRangeError("objective overflows for some labelings; normalize the energy or use a smaller p")
    best = float(np.min(values))
    winners = np.nonzero(values <= best + RELATIVE_TIE * abs(best))[0]
    minimizers = tuple(Labeling.of(row) for row in label_matrix(winners.astype(np.int64), n))
    logger.debug(f"oracle: scanned {total} labelings, min {best}, {len(minimizers)} minimizer(s)")
    return OracleResult(min_value=best, minimizers=minimizers)


def brute_force_min(e: EnergyFunction, p: float) -> OracleResult:
    """All labelings minimizing the sum of p-th powers of the terms."""
    p = check_power(p)
    unaries, pairwise, edges = unary_table(e), pairwise_table(e), edge_index(e)
    return _scan(e, lambda labels: powered_sums(unaries, pairwise, edges, labels, p))


def brute_force_minimax(e: EnergyFunction) -> OracleResult:
    """All labelings minimizing the largest active term."""
    unaries, pairwise, edges = unary_table(e), pairwise_table(e), edge_index(e)

    def largest(labels: np.ndarray) -> np.ndarray:
        values = term_values(unaries, pairwise, edges, labels)
        if values.shape[1] == 0:
            return np.zeros(values.shape[0])
        return np.max(values, axis=1)

    return _scan(e, largest)
