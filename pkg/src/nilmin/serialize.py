"""JSON algebra specs and report serialisation.

Exact numbers are written as strings (``"p/q"``, or ``"a+b*sqrt(d)"`` for
quadratic surds) so that no float ever touches a coefficient.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

from .algebra import BracketError, LieBracket
from .exact import parse_exact

SCHEMA_VERSION = 1


class SpecError(ValueError):
    """Malformed JSON spec (a usage error, not an invalid algebra)."""


def exact_str(x) -> str:
    return str(x)


def matrix_json(m) -> list[list[str]]:
    return [[exact_str(v) for v in row] for row in m]


def bracket_to_spec(mu: LieBracket, name: str = "", params: Mapping[str, Any] | None = None) -> dict:
    out: dict[str, Any] = {"dim": mu.dim, "name": name}
    out["brackets"] = [{"i": i, "j": j, "k": k, "c": exact_str(c)} for (i, j, k), c in mu.entries.items()]
    if params:
        out["params"] = {key: exact_str(v) for key, v in params.items()}
    return out


def spec_to_bracket(obj: Any) -> tuple[LieBracket, str, dict]:
    if not isinstance(obj, dict):
        raise SpecError("spec must be a JSON object")
    dim = obj.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise SpecError("'dim' must be an integer")
    rows = obj.get("brackets", [])
    if not isinstance(rows, list):
        raise SpecError("'brackets' must be an array")
    entries = {}
    for n, row in enumerate(rows):
        if not isinstance(row, dict):
            raise SpecError(f"bracket #{n + 1} must be an object")
        try:
            i, j, k = (row[key] for key in "ijk")
            c = row["c"]
        except KeyError as exc:
            raise SpecError(f"bracket #{n + 1} lacks field {exc.args[0]!r}") from None
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in (i, j, k)):
            raise SpecError(f"bracket #{n + 1}: indices must be integers")
        if isinstance(c, float):
            raise SpecError(f"bracket #{n + 1}: coefficient must be an integer or a string like \"p/q\"")
        try:
            value = parse_exact(c)
        except (TypeError, ValueError) as exc:
            raise SpecError(f"bracket #{n + 1}: {exc}") from None
        if (i, j, k) in entries:
            raise SpecError(f"bracket #{n + 1}: duplicate entry ({i}, {j}, {k})")
        entries[(i, j, k)] = value
    try:
        mu = LieBracket(dim, entries)
    except BracketError as exc:
        raise SpecError(str(exc)) from None
    name = obj.get("name", "")
    if not isinstance(name, str):
        raise SpecError("'name' must be a string")
    params = obj.get("params") or {}
    if not isinstance(params, dict):
        raise SpecError("'params' must be an object")
    return mu, name, params


def load_spec(path: str | Path) -> tuple[LieBracket, str, dict]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"malformed JSON in {path}: {exc}") from None
    return spec_to_bracket(obj)


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
