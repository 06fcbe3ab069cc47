# MCP server for the lpcut solver tools
import asyncio
import json
from typing import Any, Dict, List, Optional

from mcp.server.fastmcp import FastMCP

from app.models.pydantic_models import Report, SolvePolicy
from app.cli import check_report, oracle_report, solve_report, sweep_report
from app.shared_services.config import get_settings
from app.shared_services.errors import LpCutError
from app.shared_services.logger_setup import setup_logger
from app.shared_services.problem_file import parse_problem

logger = setup_logger()

mcp = FastMCP("lpcut-solver")

SUGGESTIONS: Dict[str, List[str]] = {
    "problem_file_error": [
        "Send the problem as an object with format='lpcut-problem' and version=1",
        "Give one [cost0, cost1] pair per vertex and edges as [i, j, [a, b, c, d]]",
        "All term values must be finite and non-negative; edges must not repeat",
    ],
    "domain_error": [
        "p must be a finite real number >= 1",
        "Use policy 'certified' or 'per-p'",
    ],
    "certification_error": [
        "Run check_problem_tool to see which edges fail and why",
        "Use policy 'per-p' if the failing terms are submodular at this particular p",
        "Terms with max(a, d) <= max(b, c) and a + d <= b + c are certified for every p",
    ],
    "size_error": [
        "The oracle enumerates 2^n labelings and only accepts n <= 20",
        "Use solve_problem_tool for larger instances",
    ],
    "numeric_error": [
        "Use a smaller p or rescale the term values",
    ],
}


def _success(report: Report) -> Dict[str, Any]:
    return {"success": True, "exit_code": report.exit_code, "report": report.model_dump(mode="json")}


def _failure(error: Exception, tool: str) -> Dict[str, Any]:
    if isinstance(error, LpCutError):
        logger.error(f"{error.error_type} in {tool}: {error}")
        response = {"success": False, "exit_code": error.exit_code, **error.to_dict()}
        response["suggestions"] = SUGGESTIONS.get(error.error_type, [])
        return response
    if isinstance(error, ValueError):
        logger.error(f"Invalid argument in {tool}: {error}")
        return {"success": False, "error_type": "domain_error", "message": str(error),
                "suggestions": SUGGESTIONS["domain_error"]}
    logger.error(f"Unexpected error in {tool}: {error}")
    return {"success": False, "message": f"{tool} failed", "error": str(error)}


@mcp.tool()
async def check_problem_tool(problem: Dict[str, Any]) -> Dict[str, Any]:
    """
    Certify every pairwise term of a labeling problem.

    A term (a, b, c, d) = (phi(0,0), phi(0,1), phi(1,0), phi(1,1)) is
    - certified_all_p: a + d <= b + c and max(a, d) <= max(b, c); its p-th power is submodular for every p >= 1
    - submodular_uncertified: submodular, but some power may not be; the witness is the first failing p found
    - not_submodular: a + d > b + c

    Parameters:
    - problem: Dict (Required) - {"format": "lpcut-problem", "version": 1, "vertex_count": n,
      "unaries": [[cost0, cost1], ...], "edges": [[i, j, [a, b, c, d]], ...]}

    Returns:
    - Dictionary containing:
        * success: bool
        * exit_code: int - 0 when every edge is certified
        * report: certificate counts and the flagged edges
    """
    try:
        report = await asyncio.to_thread(check_report, parse_problem(json.dumps(problem)))
        return _success(report)
    except Exception as e:
        return _failure(e, "check_problem_tool")


@mcp.tool()
async def solve_problem_tool(problem: Dict[str, Any], p: float = 1.0, policy: str = "certified") -> Dict[str, Any]:
    """
    Minimize the l_p norm of all unary and pairwise terms with one minimum cut.

    Parameters:
    - problem: Dict (Required) - problem object, see check_problem_tool
    - p: float (Optional) - power, >= 1 (default 1)
    - policy: str (Optional) - 'certified' requires every term certified for all p,
      'per-p' only requires the powered terms to be submodular at this p

    Returns:
    - Dictionary containing:
        * success: bool
        * report: labeling, powered energy, l_p value, max term, flow value, offset
    """
    try:
        report = await asyncio.to_thread(solve_report, parse_problem(json.dumps(problem)), p, SolvePolicy(policy))
        return _success(report)
    except Exception as e:
        return _failure(e, "solve_problem_tool")


@mcp.tool()
async def sweep_problem_tool(problem: Dict[str, Any],
                             p_list: Optional[List[float]] = None,
                             policy: str = "certified") -> Dict[str, Any]:
    """
    Solve the same problem for several powers and report how the largest
    term and the powered energy trade off as p grows.

    Parameters:
    - problem: Dict (Required) - problem object, see check_problem_tool
    - p_list: List[float] (Optional) - powers >= 1; defaults to 1, 2, 4, ..., 64
    - policy: str (Optional) - 'certified' or 'per-p'

    Returns:
    - Dictionary containing:
        * success: bool
        * report: one solution per p, ordered by p, and max_term_non_increasing
    """
    try:
        # sweep_report runs its own event loop, so it must leave this one
        report = await asyncio.to_thread(sweep_report, parse_problem(json.dumps(problem)), p_list, SolvePolicy(policy))
        return _success(report)
    except Exception as e:
        return _failure(e, "sweep_problem_tool")


@mcp.tool()
async def oracle_tool(problem: Dict[str, Any], p: float = 1.0) -> Dict[str, Any]:
    """
    Exhaustively minimize the powered energy and the largest term over all
    2^n labelings. Only for n <= 20.

    Parameters:
    - problem: Dict (Required) - problem object, see check_problem_tool
    - p: float (Optional) - power, >= 1 (default 1)

    Returns:
    - Dictionary containing:
        * success: bool
        * report: minimum values and all minimizing labelings as 0/1 strings
    """
    try:
        report = await asyncio.to_thread(oracle_report, parse_problem(json.dumps(problem)), p)
        return _success(report)
    except Exception as e:
        return _failure(e, "oracle_tool")


# Function to run the server
def run_server():
    settings = get_settings()
    if settings.mcp_transport == "sse":
        logger.info(f"Starting lpcut MCP server (sse) on {settings.mcp_host}:{settings.mcp_port}")
        mcp.settings.host = settings.mcp_host
        mcp.settings.port = settings.mcp_port
        mcp.run(transport="sse")
    else:
        logger.info("Starting lpcut MCP server (stdio)")
        mcp.run(transport="stdio")


if __name__ == "__main__":
    run_server()
