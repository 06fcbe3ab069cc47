# lpcut/app/energy/submodularity.py
# Submodularity tests for pairwise terms and the all-p certificate.

from typing import Iterable, List, Optional, Sequence

from app.models.pydantic_models import Certificate, CertificateStatus, EdgeCertificate, EnergyFunction, PairwiseTerm
from app.energy.energy_model import check_power
from app.shared_services.errors import DomainError, InputError

TOLERANCE = 1e-12


def _slack(values: Sequence[float]) -> float:
    return TOLERANCE * max(1.0, max(values))


def is_submodular(t: PairwiseTerm) -> bool:
    """phi(0,0) + phi(1,1) <= phi(0,1) + phi(1,0), exact ties included."""
    return t.a + t.d <= t.b + t.c + _slack(t.values)


def max_condition(t: PairwiseTerm) -> bool:
    """max(phi(0,0), phi(1,1)) <= max(phi(1,0), phi(0,1))."""
    return max(t.a, t.d) <= max(t.c, t.b)


def certify_all_p(t: PairwiseTerm) -> Certificate:
    """
    Submodular terms that also meet the max-condition stay submodular under
    every power p >= 1. The condition is sufficient only, so a submodular term
    failing it is reported as uncertified rather than rejected.
    """
    if not is_submodular(t):
        return Certificate(status=CertificateStatus.NOT_SUBMODULAR)
    if max_condition(t):
        return Certificate(status=CertificateStatus.CERTIFIED_ALL_P)
    return Certificate(status=CertificateStatus.SUBMODULAR_UNCERTIFIED)


def _powered_submodular(a: float, b: float, c: float, d: float, p: float) -> bool:
    # values are normalized to [0, 1] so that large p stays in range
    scale = max(a, b, c, d)
    if scale == 0.0:
        return True
    pa, pb, pc, pd = ((v / scale) ** p for v in (a, b, c, d))
    return pa + pd <= pb + pc + _slack((pa, pb, pc, pd))


def is_submodular_at(t: PairwiseTerm, p: float) -> bool:
    """Submodularity of the table raised to the power p."""
    p = check_power(p)
    return _powered_submodular(t.a, t.b, t.c, t.d, p)


def lemma_check(a: float, b: float, c: float, d: float, p: float) -> bool:
    """
    Truth value of: (a+b <= c+d and max(a,b) <= max(c,d)) implies
    a^p + b^p <= c^p + d^p. Expected to hold for every input.
    """
    p = check_power(p, strict=True)
    if min(a, b, c, d) < 0.0:
        raise InputError("lemma_check takes non-negative values")
    if not (a + b <= c + d and max(a, b) <= max(c, d)):
        return True
    scale = max(c, d)
    if scale == 0.0:
        return True
    pa, pb, pc, pd = ((v / scale) ** p for v in (a, b, c, d))
    return pa + pb <= pc + pd + TOLERANCE


def check_p_grid(p_grid: Iterable[float]) -> List[float]:
    grid = [float(p) for p in p_grid]
    if not grid:
        raise DomainError("p grid is empty")
    for p in grid:
        check_power(p)
    if any(later < earlier for earlier, later in zip(grid, grid[1:])):
        raise DomainError("p grid must be sorted ascending")
    return grid


def find_violation(t: PairwiseTerm, p_grid: Iterable[float]) -> Optional[float]:
    """Smallest p in the grid at which the powered table is not submodular."""
    for p in check_p_grid(p_grid):
        if not is_submodular_at(t, p):
            return p
    return None


def crossover_power(t: PairwiseTerm, p_max: float = 64.0, tol: float = 1e-9) -> Optional[float]:
    """
    Smallest p in [1, p_max] where the powered table stops being submodular,
    located by bisection; None if the table is submodular throughout.

    For a submodular table g(p) = b^p + c^p - a^p - d^p changes sign at most
    once in this range, so bisection between a passing and a failing power is
    enough.
    """
    p_max = check_power(p_max)
    if not is_submodular_at(t, 1.0):
        return 1.0
    if is_submodular_at(t, p_max):
        return None
    low, high = 1.0, p_max
    while high - low > tol * max(1.0, low):
        mid = 0.5 * (low + high)
        if is_submodular_at(t, mid):
            low = mid
        else:
            high = mid
    return high


def certify_energy(e: EnergyFunction, p_grid: Optional[Iterable[float]] = None) -> List[EdgeCertificate]:
    """
    Certificate for every edge of e. When p_grid is given, uncertified but
    submodular edges are scanned and the violating power recorded as witness.
    """
    grid = check_p_grid(p_grid) if p_grid is not None else None
    results = []
    for index, ((i, j), term) in enumerate(zip(e.edges, e.pairwise)):
        certificate = certify_all_p(term)
        if grid is not None and certificate.status == CertificateStatus.SUBMODULAR_UNCERTIFIED:
            certificate = Certificate(status=certificate.status, witness=find_violation(term, grid))
        results.append(EdgeCertificate(edge_index=index, i=i, j=j, table=term.values, certificate=certificate))
    return results
