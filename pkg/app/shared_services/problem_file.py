import json
import re
from typing import Any, Optional, Tuple

from pydantic import ValidationError

from app.models.pydantic_models import EnergyFunction, GridShape, ProblemFile
from .errors import ProblemFileError
from .logger_setup import setup_logger

logger = setup_logger()


def _entry_line(text: str, key: str, index: Any) -> Optional[int]:
    """
    1-based line of entry `index` of list `key`, assuming the one-entry-per-line
    layout written by dump_problem. None when the layout does not match.
    """
    if not isinstance(index, int):
        index = None
    lines = text.splitlines()
    for number, line in enumerate(lines):
        if line.lstrip().startswith(f'"{key}"'):
            if index is None or line.rstrip().endswith("[]"):
                return number + 1
            target = number + 1 + index
            return target + 1 if target < len(lines) else number + 1
    return None


def _validation_context(text: str, error: ValidationError) -> Tuple[str, Optional[int]]:
    first = error.errors()[0]
    loc = first.get("loc", ())
    where = ".".join(str(part) for part in loc)
    message = f"{where}: {first['msg']}" if where else first["msg"]
    line = None
    if loc and isinstance(loc[0], str):
        line = _entry_line(text, loc[0], loc[1] if len(loc) > 1 else None)
    match = re.search(r"edge (\d+)", first["msg"])
    if line is None and match:
        line = _entry_line(text, "edges", int(match.group(1)))
    return message, line


def parse_problem(text: str, path: Optional[str] = None) -> ProblemFile:
    """Parse and validate the text of a problem file, energy invariants included."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProblemFileError(f"invalid JSON: {e.msg} (column {e.colno})", path=path, line=e.lineno)
    if not isinstance(data, dict):
        raise ProblemFileError("problem file must contain a JSON object", path=path, line=1)
    if data.get("format") != "lpcut-problem":
        raise ProblemFileError(f"unrecognized format tag {data.get('format')!r}", path=path, line=_entry_line(text, "format", None))
    if data.get("version") != 1:
        raise ProblemFileError(f"unsupported version {data.get('version')!r}; expected 1", path=path, line=_entry_line(text, "version", None))
    try:
        problem = ProblemFile.model_validate(data)
        to_energy(problem)
    except ValidationError as e:
        message, line = _validation_context(text, e)
        raise ProblemFileError(message, path=path, line=line)
    return problem


def load_problem(path: str) -> ProblemFile:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as e:
        raise ProblemFileError(f"cannot read problem file: {e.strerror}", path=path)
    problem = parse_problem(text, path)
    logger.info(f"Loaded problem {path}: {problem.vertex_count} vertices, {len(problem.edges)} edges")
    return problem


def to_energy(problem: ProblemFile) -> EnergyFunction:
    return EnergyFunction.from_tables(problem.vertex_count, problem.unaries, problem.edges)


def from_energy(e: EnergyFunction, grid: Optional[GridShape] = None) -> ProblemFile:
    return ProblemFile(
        vertex_count=e.vertex_count,
        unaries=[u.values for u in e.unaries],
        edges=[(i, j, t.values) for (i, j), t in zip(e.edges, e.pairwise)],
        grid=grid,
    )


def _number(value: float) -> str:
    # json.dumps uses repr, which round-trips doubles exactly
    return json.dumps(float(value))


def dump_problem(problem: ProblemFile) -> str:
    """Deterministic text with one unary or edge per line."""
    lines = [
        "{",
        f'  "format": {json.dumps(problem.format)},',
        f'  "version": {problem.version},',
        f'  "vertex_count": {problem.vertex_count},',
    ]
    if problem.grid is not None:
        lines.append(f'  "grid": {{"width": {problem.grid.width}, "height": {problem.grid.height}}},')

    def block(key: str, rows: list, last: bool) -> None:
        tail = "" if last else ","
        if not rows:
            lines.append(f'  "{key}": []{tail}')
            return
        lines.append(f'  "{key}": [')
        for index, row in enumerate(rows):
            lines.append(f"    {row}{',' if index < len(rows) - 1 else ''}")
        lines.append(f"  ]{tail}")

    block("unaries", [f"[{_number(c0)}, {_number(c1)}]" for c0, c1 in problem.unaries], last=False)
    block("edges", [f"[{i}, {j}, [{', '.join(_number(v) for v in table)}]]" for i, j, table in problem.edges], last=True)
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_problem(path: str, problem: ProblemFile) -> None:
    text = dump_problem(problem)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    except OSError as e:
        raise ProblemFileError(f"cannot write problem file: {e.strerror}", path=path)
    logger.info(f"Wrote problem {path}: {problem.vertex_count} vertices, {len(problem.edges)} edges")
