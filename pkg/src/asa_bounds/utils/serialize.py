"""
Transport JSON : entiers en chaînes décimales, rationnels en "p/q",
sortie déterministe (clés triées, indent 2, UTF-8, pas d'horodatage).
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

import pandas as pd

from asa_bounds.errors import ParseError
from asa_bounds.galois_modules import FiniteGroup, GaloisModule
from asa_bounds.int_linalg import FgAbGroup, IntMatrix
from asa_bounds.items import fraction_str


def _default(o: Any):
    if isinstance(o, Fraction):
        return fraction_str(o)
    if isinstance(o, (FgAbGroup, IntMatrix)):
        return o.to_json()
    if hasattr(o, "to_json"):
        return o.to_json()
    if isinstance(o, (set, frozenset, tuple)):
        return list(o)
    raise TypeError(f"non sérialisable: {type(o).__name__}")


def dumps(payload: Any) -> str:
    return json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True, default=_default)


def write_json(path: str | Path, payload: Any) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(dumps(payload) + "\n", encoding="utf-8")


def group_to_json(group: FiniteGroup) -> dict:
    return {"order": group.order, "table": [list(r) for r in group.table], "name": group.name}


def module_to_json(module: GaloisModule) -> dict:
    """{ group: {order, table}, rank, relations, action: [matrices] }."""
    return {
        "group": group_to_json(module.group),
        "rank": module.rank,
        "relations": module.relations.to_json(),
        "action": [a.to_json() for a in module.action],
        "name": module.name,
    }


def module_from_json(data: dict) -> GaloisModule:
    from asa_bounds.utils.parsing import group_from_json

    try:
        group = group_from_json(data["group"])
        rank = int(data["rank"])
        rel_data = data.get("relations") or []
        relations = IntMatrix.from_json(rel_data, None) if rel_data and rel_data[0] else IntMatrix.zeros(rank, 0)
        action = tuple(IntMatrix.from_json(a, rank) if a else IntMatrix.zeros(rank, rank)
                       for a in data["action"])
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"module JSON illisible: {e}") from e
    return GaloisModule(group, rank, relations, action, str(data.get("name", "M")))


def dataframe_to_jsonl(df: pd.DataFrame, path: str | Path) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    df.to_json(p, orient="records", lines=True, force_ascii=False)
