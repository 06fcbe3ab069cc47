"""
Exception hierarchy shared by the solver modules, the CLI and the MCP tools.

Every error carries the process exit code the CLI reports for it.
"""
from typing import Any, Dict, List, Optional

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_CERTIFICATION = 4
EXIT_SIZE = 5
EXIT_NUMERIC = 6


class LpCutError(Exception):
    """Base class for all lpcut errors."""
    exit_code: int = 1
    error_type: str = "lpcut_error"

    def to_dict(self) -> Dict[str, Any]:
        return {"error_type": self.error_type, "message": str(self)}


class InputError(LpCutError, ValueError):
    exit_code = EXIT_PARSE
    error_type = "input_error"


class ProblemFileError(InputError):
    error_type = "problem_file_error"

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        context = []
        if path:
            context.append(str(path))
        if line is not None:
            context.append(f"line {line}")
        prefix = f"{':'.join(context)}: " if context else ""
        super().__init__(f"{prefix}{message}")
        self.path = path
        self.line = line


class DomainError(LpCutError, ValueError):
    exit_code = EXIT_USAGE
    error_type = "domain_error"


class ConfigError(LpCutError, ValueError):
    exit_code = EXIT_USAGE
    error_type = "config_error"


class NumericRangeError(LpCutError, ArithmeticError):
    exit_code = EXIT_NUMERIC
    error_type = "numeric_error"


class ReductionError(LpCutError):
    exit_code = EXIT_CERTIFICATION
    error_type = "reduction_error"

    def __init__(self, message: str, edge_index: int, edge: tuple):
        super().__init__(message)
        self.edge_index = edge_index
        self.edge = edge


class CertificationError(LpCutError):
    exit_code = EXIT_CERTIFICATION
    error_type = "certification_error"

    def __init__(self, message: str, offending: List[Dict[str, Any]]):
        super().__init__(message)
        self.offending = offending

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        data["offending_edges"] = self.offending
        return data


class SizeError(LpCutError):
    exit_code = EXIT_SIZE
    error_type = "size_error"
