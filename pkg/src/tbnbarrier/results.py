"""JSON encoding of results.

Every result object has the keys ``command``, ``tbn_hash``, ``w``,
``result``, ``explored`` and ``budget_hit``, plus ``witness`` when a path is
available.  Rationals are written as ``"num/den"`` and state counts as
decimal strings so that no consumer loses precision.
"""
from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Any

from .bonds import BondConfiguration, BondPath
from .kinetics import Path
from .model import TBN, Configuration, format_fraction
from .textio import TbnDocument


def tbn_hash(tbn: TBN) -> str:
    text = "\n".join(f"{k} {m.key}" for m, k in tbn.counts.items())
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def fraction_json(q: Fraction | None) -> str | None:
    return None if q is None else format_fraction(Fraction(q))


def configuration_json(doc: TbnDocument, c: Configuration) -> str:
    return doc.format_configuration(c)


def bond_configuration_json(doc: TbnDocument, bc: BondConfiguration) -> dict:
    return {"configuration": doc.format_configuration(bc.simplify()),
            "polymers": [[doc.name_of(m) for m in p.monomers] for p in bc.polymers],
            "bonds": [list(pair) for pair in bc.matching()]}


def path_json(doc: TbnDocument, path: Path | BondPath, w) -> dict:
    if isinstance(path, BondPath):
        confs: list[Any] = [bond_configuration_json(doc, c) for c in path.configurations]
    else:
        confs = [doc.format_configuration(c) for c in path.configurations]
    return {
        "configurations": confs,
        "moves": [m.to_json() for m in path.moves],
        "energies": [fraction_json(c.energy(w)) for c in path.configurations],
        "height": fraction_json(path.height(w)),
    }


def envelope(command: str, tbn: TBN, w, result: dict, explored: int = 0, budget_hit: bool = False,
             witness: dict | None = None) -> dict:
    out = {
        "command": command,
        "tbn_hash": tbn_hash(tbn),
        "w": fraction_json(w),
        "result": result,
        "explored": str(explored),
        "budget_hit": budget_hit,
    }
    if witness is not None:
        out["witness"] = witness
    return out


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, default=_default)


def _default(o):
    if isinstance(o, Fraction):
        return format_fraction(o)
    raise TypeError(f"cannot encode {type(o).__name__}")
