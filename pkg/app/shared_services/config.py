"""
Runtime configuration read from the environment (and a local .env file).
"""
import logging
import os
from functools import lru_cache
from typing import List, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field

from .errors import ConfigError

# Load environment variables
load_dotenv()

ORACLE_HARD_LIMIT = 20
PROJECT_DIRECTORY = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", ".."))


def _parse_bool(name: str, raw: str) -> bool:
    value = raw.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{name} must be a boolean, got {raw!r}")


def parse_p_list(raw: str, name: str = "p list") -> List[float]:
    """Parse a comma separated list of powers, e.g. '1,2,4.5'."""
    try:
        values = [float(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"{name} must be a comma separated list of numbers, got {raw!r}")
    if not values:
        raise ConfigError(f"{name} is empty")
    return values


class Settings(BaseModel):
    log_level: str = Field(default="INFO", description="Level of the lpcut logger")
    log_to_file: bool = Field(default=True, description="Also write rotating log files")
    log_dir: str = Field(default=os.path.join(PROJECT_DIRECTORY, "logs"), description="Folder for log files")
    oracle_max_vertices: int = Field(default=ORACLE_HARD_LIMIT, description="Oracle size guard (≤ 20)")
    violation_grid: List[float] = Field(
        default_factory=lambda: [1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 8.0, 16.0, 32.0, 64.0],
        description="Powers scanned for uncertified edges",
    )
    sweep_p: List[float] = Field(
        default_factory=lambda: [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0],
        description="Default powers for the sweep command",
    )
    mcp_transport: str = Field(default="stdio", description="MCP transport: stdio or sse")
    mcp_host: str = Field(default="127.0.0.1", description="Host for the SSE transport")
    mcp_port: int = Field(default=8000, description="Port for the SSE transport")


def load_settings() -> Settings:
    values = {}
    if os.getenv("LPCUT_LOG_LEVEL"):
        level = os.getenv("LPCUT_LOG_LEVEL").strip().upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ConfigError(f"LPCUT_LOG_LEVEL must be a logging level name such as INFO or DEBUG, got {level!r}")
        values["log_level"] = level
    if os.getenv("LPCUT_LOG_TO_FILE"):
        values["log_to_file"] = _parse_bool("LPCUT_LOG_TO_FILE", os.getenv("LPCUT_LOG_TO_FILE"))
    if os.getenv("LPCUT_LOG_DIR"):
        values["log_dir"] = os.getenv("LPCUT_LOG_DIR")
    raw_limit: Optional[str] = os.getenv("LPCUT_ORACLE_MAX_VERTICES")
    if raw_limit:
        try:
            limit = int(raw_limit)
        except ValueError:
            raise ConfigError(f"LPCUT_ORACLE_MAX_VERTICES must be an integer, got {raw_limit!r}")
        if limit < 0:
            raise ConfigError("LPCUT_ORACLE_MAX_VERTICES must be non-negative")
        values["oracle_max_vertices"] = min(limit, ORACLE_HARD_LIMIT)
    if os.getenv("LPCUT_VIOLATION_GRID"):
        values["violation_grid"] = sorted(parse_p_list(os.getenv("LPCUT_VIOLATION_GRID"), "LPCUT_VIOLATION_GRID"))
    if os.getenv("LPCUT_SWEEP_P"):
        values["sweep_p"] = parse_p_list(os.getenv("LPCUT_SWEEP_P"), "LPCUT_SWEEP_P")
    transport = os.getenv("LPCUT_MCP_TRANSPORT")
    if transport:
        if transport not in ("stdio", "sse"):
            raise ConfigError(f"LPCUT_MCP_TRANSPORT must be 'stdio' or 'sse', got {transport!r}")
        values["mcp_transport"] = transport
    if os.getenv("LPCUT_MCP_HOST"):
        values["mcp_host"] = os.getenv("LPCUT_MCP_HOST")
    if os.getenv("LPCUT_MCP_PORT"):
        try:
            values["mcp_port"] = int(os.getenv("LPCUT_MCP_PORT"))
        except ValueError:
            raise ConfigError("LPCUT_MCP_PORT must be an integer")
    return Settings(**values)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return load_settings()
