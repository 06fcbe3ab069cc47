import asyncio
import json

import pytest

from conftest import fixture_path

pytest.importorskip("mcp")

from app.mcp.solver_tools_mcp import check_problem_tool, oracle_tool, solve_problem_tool, sweep_problem_tool


def _problem(name):
    with open(fixture_path(name), encoding="utf-8") as handle:
        return json.load(handle)


def test_check_tool():
    response = asyncio.run(check_problem_tool(_problem("uncertified_edge.json")))
    assert response["success"] is True
    assert response["exit_code"] == 4
    assert response["report"]["certificate_counts"]["submodular_uncertified"] == 1


def test_solve_tool():
    response = asyncio.run(solve_problem_tool(_problem("two_vertex.json"), p=2.0))
    assert response["success"] is True
    assert response["report"]["solutions"][0]["labeling"] == "01"


def test_solve_tool_reports_certification_failure():
    response = asyncio.run(solve_problem_tool(_problem("uncertified_edge.json"), p=2.0, policy="per-p"))
    assert response["success"] is False
    assert response["error_type"] == "certification_error"
    assert response["exit_code"] == 4
    assert response["offending_edges"][0]["edge_index"] == 0
    assert response["suggestions"]


def test_solve_tool_rejects_bad_arguments():
    response = asyncio.run(solve_problem_tool(_problem("two_vertex.json"), p=0.5))
    assert response["success"] is False and response["error_type"] == "domain_error"
    response = asyncio.run(solve_problem_tool(_problem("two_vertex.json"), policy="sometimes"))
    assert response["success"] is False and response["error_type"] == "domain_error"


def test_sweep_tool_inside_running_loop():
    response = asyncio.run(sweep_problem_tool(_problem("grid_3x3.json"), p_list=[1.0, 4.0]))
    assert response["success"] is True
    assert [s["labeling"] for s in response["report"]["solutions"]] == ["000000000", "000010100"]


def test_oracle_tool():
    problem = _problem("single_vertex.json")
    response = asyncio.run(oracle_tool(problem, p=3.0))
    assert response["report"]["oracle"][0]["min_value"] == 8.0
    bad = dict(problem, version=2)
    response = asyncio.run(oracle_tool(bad))
    assert response["success"] is False
    assert response["error_type"] == "problem_file_error"
