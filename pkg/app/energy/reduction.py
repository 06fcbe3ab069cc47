# lpcut/app/energy/reduction.py
# Energy -> s-t network construction and the end-to-end l_p solve pipeline.

from typing import List, Tuple

from app.models.pydantic_models import (
    CertificateStatus,
    CutSide,
    EnergyFunction,
    Labeling,
    Solution,
    SolvePolicy,
)
from app.energy.energy_model import check_power, evaluate_powered, max_term, normalize, power_transform
from app.energy.submodularity import TOLERANCE, certify_all_p, is_submodular_at
from app.flow.mincut import FlowNetwork
from app.shared_services.errors import CertificationError, NumericRangeError, ReductionError
from app.shared_services.logger_setup import setup_logger

logger = setup_logger()


def build_network(e: EnergyFunction, accepted: bool = False) -> Tuple[FlowNetwork, float]:
    """
    Network whose cut capacity plus the returned offset equals E(x) for every
    labeling x. Node i on the source side means x_i = 0, sink side x_i = 1.

    With accepted=True the tables were already checked upstream, and any
    negative B+C-A-D left over from rounding or powering is clamped to 0.

    Each table (A, B, C, D) is split as
        A + (C-A)[x_i=1] + (D-C)[x_j=1] + (B+C-A-D)[x_i=0, x_j=1]
    and the last part becomes the arc i->j. Unary pairs are shifted by their
    minimum so that terminal capacities are non-negative.
    """
    n = e.vertex_count
    network = FlowNetwork(n)
    offset = 0.0
    pending = [0.0] * n

    n_links = []
    for index, ((i, j), term) in enumerate(zip(e.edges, e.pairwise)):
        A, B, C, D = term.values
        weight = B + C - A - D
        if weight < 0.0:
            if not accepted and weight < -TOLERANCE * max(1.0, A, B, C, D):
                raise ReductionError(
                    f"edge {index} ({i}, {j}) with table {term.values} is not submodular "
                    f"(B+C-A-D = {weight:.6g})",
                    edge_index=index,
                    edge=(i, j),
                )
            weight = 0.0
        offset += A
        pending[i] += C - A
        pending[j] += D - C
        n_links.append((i, j, weight))

    for i, unary in enumerate(e.unaries):
        u0 = unary.cost0
        u1 = unary.cost1 + pending[i]
        shift = min(u0, u1)
        offset += shift
        network.add_tedge(i, u1 - shift, u0 - shift)

    for i, j, weight in n_links:
        network.add_edge(i, j, weight, 0.0)

    return network, offset


def labeling_from_cut(side) -> Labeling:
    return Labeling.of([0 if s == CutSide.SOURCE_SIDE else 1 for s in side])


def check_terms(e: EnergyFunction, p: float, policy: SolvePolicy) -> None:
    """Raise CertificationError listing every edge the policy rejects."""
    offending: List[dict] = []
    for index, ((i, j), term) in enumerate(zip(e.edges, e.pairwise)):
        certificate = certify_all_p(term)
        if policy == SolvePolicy.REQUIRE_CERTIFIED:
            rejected = certificate.status != CertificateStatus.CERTIFIED_ALL_P
        else:
            rejected = not is_submodular_at(term, p)
        if rejected:
            offending.append({
                "edge_index": index,
                "edge": [i, j],
                "table": list(term.values),
                "certificate": certificate.status.value,
            })
    if offending:
        names = ", ".join(f"edge {o['edge_index']} ({o['edge'][0]}, {o['edge'][1]})" for o in offending[:10])
        more = f" and {len(offending) - 10} more" if len(offending) > 10 else ""
        if policy == SolvePolicy.REQUIRE_CERTIFIED:
            reason = "not certified submodular for all p"
        else:
            reason = f"not submodular at p={p}"
        logger.warning(f"certification failed for {len(offending)} edge(s) under policy {policy.value}")
        raise CertificationError(f"{len(offending)} pairwise term(s) {reason}: {names}{more}", offending)


def solve(e: EnergyFunction, p: float, policy: SolvePolicy = SolvePolicy.REQUIRE_CERTIFIED) -> Solution:
    """
    Global minimizer of the sum of p-th powers of all terms (equivalently of
    their l_p norm): certify, normalize, power, build the network, cut.
    """
    p = check_power(p)
    policy = SolvePolicy(policy)
    logger.info(f"solve: {e.vertex_count} vertices, {e.edge_count} edges, p={p}, policy={policy.value}")
    check_terms(e, p, policy)

    normalized, scale = normalize(e)
    powered = power_transform(normalized, p)
    # check_terms already vetted every table on the input scale
    network, offset = build_network(powered, accepted=True)
    # large p legitimately produces capacities far below any fixed fraction
    # of the largest one, so no residual is treated as saturated early
    cut = network.max_flow(rel_tol=0.0)
    labeling = labeling_from_cut(cut.side)

    try:
        powered_energy = evaluate_powered(e, labeling, p)
    except NumericRangeError:
        raise NumericRangeError(f"the powered energy of the input overflows at p={p}; use a smaller p or rescale the terms")
    solution = Solution(
        labeling=labeling,
        powered_energy=powered_energy,
        lp_value=powered_energy ** (1.0 / p),
        max_term=max_term(e, labeling),
        flow_value=cut.flow_value,
        offset=offset,
        p=p,
    )
    logger.info(f"solve: labeling {labeling.as_string() if e.vertex_count <= 64 else '...'}, "
                f"powered energy {powered_energy:.6g}, scale {scale:.6g}")
    return solution
