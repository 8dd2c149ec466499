"""Reader for TOML model files.

A model file has the sections ``[model]`` (name, kind), ``[coordinates]``
(``fiber`` and, for field models, ``base``), ``[lagrangian]`` and/or
``[hamiltonian]`` with one ``expr`` string each, and the optional ``[metric]``
(``diag``) and ``[grid]`` (``dims``, ``origin``, ``spacing``) sections.
Mechanics names follow ``v_<q>``/``p_<q>``; field names follow the ``file``
scheme ``<y>_d<i>``/``p<i>_<y>``.
"""
import re
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from geomech.errors import ExprSyntaxError, ModelFileError, ModelValidationError
from geomech.field.model import FieldModel
from geomech.mechanics.model import MechModel
from geomech.symbolic import parse

KINDS = ("mechanics", "field")
_LINE = re.compile(r"line (\d+)")


@dataclass
class GridSpec:
    dims: tuple
    origin: np.ndarray
    spacing: np.ndarray

    def axes(self):
        return [self.origin[i] + self.spacing[i] * np.arange(n) for i, n in enumerate(self.dims)]


@dataclass
class ModelFile:
    """A parsed model file: the model plus its optional grid."""
    name: str
    kind: str
    model: object
    grid: GridSpec = None
    path: Path = None


def _section_lines(text):
    """Line number (1-based) of every ``[section]`` header."""
    lines = {}
    for number, line in enumerate(text.splitlines(), start=1):
        match = re.match(r"\s*\[([A-Za-z_]+)\]\s*(#.*)?$", line)
        if match:
            lines.setdefault(match.group(1), number)
    return lines


def _decode_line(err):
    line = getattr(err, "lineno", None)
    if line is None:
        match = _LINE.search(str(err))
        line = int(match.group(1)) if match else None
    return line


def _names(section, key, where, required=True):
    values = section.get(key, [])
    if not isinstance(values, list) or not all(isinstance(v, str) for v in values):
        raise ModelValidationError(f"[coordinates] {key} must be a list of names", where)
    if required and not values:
        raise ModelValidationError(f"[coordinates] {key} is empty", where)
    return values


def _expression(doc, section, where):
    body = doc.get(section)
    if body is None:
        return None
    source = body.get("expr") if isinstance(body, dict) else None
    if not isinstance(source, str):
        raise ModelValidationError(f"[{section}] needs an expr string", where.get(section))
    try:
        return parse(source)
    except ExprSyntaxError as err:
        raise ModelFileError(f"[{section}] expr: {err}{err.location()}", where.get(section)) from err


def _vector(section, key, size, where):
    values = section.get(key)
    if not isinstance(values, list) or len(values) != size:
        raise ModelValidationError(f"[grid] {key} must hold {size} numbers", where)
    return np.asarray(values, dtype=float)


def _grid(doc, m, where):
    body = doc.get("grid")
    if body is None:
        return None
    line = where.get("grid")
    dims = body.get("dims")
    if not isinstance(dims, list) or len(dims) != m or not all(isinstance(d, int) and d > 0 for d in dims):
        raise ModelValidationError(f"[grid] dims must hold {m} positive integers", line)
    spacing = _vector(body, "spacing", m, line)
    if np.any(spacing <= 0):
        raise ModelValidationError("[grid] spacing must be positive", line)
    return GridSpec(tuple(dims), _vector(body, "origin", m, line), spacing)


def parse_model_text(text, path=None):
    """Build a model from model-file text.

    Args:
        text (str): TOML source.
        path (Path, optional): Origin of the text, kept on the result.

    Returns:
        ModelFile: Parsed model with its grid.

    Raises:
        ModelFileError: On TOML syntax errors or bad expressions (with the line).
        ModelValidationError: On missing sections, unknown kinds or undeclared variables.
    """
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as err:
        raise ModelFileError(f"malformed model file: {err}", _decode_line(err)) from err
    where = _section_lines(text)
    header = doc.get("model")
    if not isinstance(header, dict):
        raise ModelValidationError("missing [model] section", 1)
    kind = header.get("kind")
    if kind not in KINDS:
        raise ModelValidationError(f"Unknown model kind {kind!r}, expected one of {', '.join(KINDS)}",
                                   where.get("model"))
    name = str(header.get("name", "model"))
    coords = doc.get("coordinates")
    if not isinstance(coords, dict):
        raise ModelValidationError("missing [coordinates] section", where.get("model"))
    line = where.get("coordinates")
    fiber = _names(coords, "fiber", line)
    L = _expression(doc, "lagrangian", where)
    H = _expression(doc, "hamiltonian", where)
    if L is None and H is None:
        raise ModelValidationError("a model needs [lagrangian] or [hamiltonian]", where.get("model"))
    expr_line = where.get("lagrangian", where.get("hamiltonian"))
    if kind == "mechanics":
        try:
            model = MechModel(fiber, L=L, H=H, name=name)
        except ModelValidationError as err:
            raise ModelValidationError(str(err), expr_line) from err
        return ModelFile(name, kind, model, None, path)
    base = _names(coords, "base", line)
    metric = None
    if "metric" in doc:
        diag = doc["metric"].get("diag")
        if not isinstance(diag, list) or len(diag) != len(base):
            raise ModelValidationError(f"[metric] diag must hold {len(base)} numbers", where.get("metric"))
        metric = np.diag(np.asarray(diag, dtype=float))
    try:
        model = FieldModel(base, fiber, L=L, H=H, metric=metric, name=name, scheme="file")
    except ModelValidationError as err:
        raise ModelValidationError(str(err), where.get("metric") if "metric" in str(err) else expr_line) from err
    return ModelFile(name, kind, model, _grid(doc, len(base), where), path)


def load_model_file(path):
    path = Path(path)
    if not path.is_file():
        raise ModelFileError(f"model file {path} does not exist")
    return parse_model_text(path.read_text(encoding="utf-8"), path)
