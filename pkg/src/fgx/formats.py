"""JSON file formats: Cayley tables, presentations and report helpers."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Union

import numpy as np

from .core.catalogue import CatalogueError, build_named, canonical_key
from .core.presentation import Presentation, PresentationError
from .core.tables import GroupError, GroupTable, verify_axioms


class FormatError(ValueError):
    """Unreadable or malformed input file."""


def table_to_json(G: GroupTable) -> dict:
    out = {"order": G.order,
           "labels": [G.label(g) for g in range(G.order)],
           "table": np.asarray(G.table).tolist()}
    if G.name:
        out["name"] = G.name
    if G.named:
        out["named"] = {k: int(v) for k, v in sorted(G.named.items())}
    return out


def table_from_json(data: Any, check_axioms: bool = True) -> GroupTable:
    if not isinstance(data, dict):
        raise FormatError("Cayley table JSON must be an object")
    for key in ("order", "table"):
        if key not in data:
            raise FormatError(f"Cayley table JSON missing field {key!r}")
    n = data["order"]
    if not isinstance(n, int) or n < 1:
        raise FormatError("'order' must be a positive integer")
    rows = data["table"]
    if not isinstance(rows, list) or len(rows) != n or any(
            not isinstance(r, list) or len(r) != n for r in rows):
        raise FormatError(f"'table' must be a {n}x{n} array")
    try:
        arr = np.array(rows, dtype=np.int64)
    except (TypeError, ValueError):
        raise FormatError("'table' entries must be integers") from None
    labels = data.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != n):
        raise FormatError("'labels' must list one label per element")
    named = data.get("named") or {}
    if not isinstance(named, dict) or any(not isinstance(v, int) or not 0 <= v < n
                                          for v in named.values()):
        raise FormatError("'named' must map names to element indices")
    try:
        G = GroupTable.from_array(arr, labels, name=str(data.get("name", "")), named=named)
    except GroupError as exc:
        raise FormatError(f"not a group table: {exc}") from None
    if check_axioms:
        rep = verify_axioms(G)
        if not rep.ok:
            raise FormatError("not a group table: " + "; ".join(rep.failures))
    return G


def read_json(path: Union[str, Path]) -> Any:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {p}: {exc.strerror or exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed JSON in {p}: {exc.msg} (line {exc.lineno})") from None


def write_json(obj: Any, path: Union[str, Path, None] = None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=False)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def load_table(path: Union[str, Path]) -> GroupTable:
    return table_from_json(read_json(path))


def load_presentation(path: Union[str, Path]) -> Presentation:
    data = read_json(path)
    if not isinstance(data, dict):
        raise FormatError("presentation JSON must be an object")
    try:
        return Presentation.from_json(data)
    except PresentationError as exc:
        raise FormatError(f"bad presentation in {path}: {exc}") from None


def resolve_group(spec: str) -> GroupTable:
    """A Cayley-table file path or a catalogue key."""
    p = Path(spec)
    if p.exists():
        data = read_json(p)
        if isinstance(data, dict) and "generators" in data and "table" not in data:
            raise FormatError(f"{p} is a presentation; run 'coset' on it first")
        G = table_from_json(data)
        return G if G.name else G.renamed(p.stem)
    try:
        key = canonical_key(spec)
    except CatalogueError as exc:
        raise FormatError(f"{spec!r} is neither a readable file nor a catalogue key ({exc})") from None
    return build_named(key)
