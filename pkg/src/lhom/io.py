"""JSON encodings for walks, instances, classifications and chains."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from lhom.detect import (
    BicycleWitness,
    CircularNWitness,
    Classification,
    DATWitness,
    IndependentEdges,
    Verdict,
)
from lhom.digraph import Digraph, Direction, Walk, parse_digraph
from lhom.errors import InputError
from lhom.hmchain import TernaryOpTable
from lhom.solver import Instance


def walk_to_json(w: Walk) -> dict:
    return {"start": w.start, "steps": [[d.value, v] for d, v in w.steps]}


def walk_from_json(obj: dict) -> Walk:
    try:
        return Walk(int(obj["start"]), tuple((Direction(d), int(v)) for d, v in obj["steps"]))
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"malformed walk: {exc}") from None


def digraph_to_json(D: Digraph) -> dict:
    return {"n": D.n, "arcs": [list(a) for a in D.sorted_arcs()]}


def digraph_from_json(obj: dict) -> Digraph:
    try:
        return Digraph(int(obj["n"]), [tuple(a) for a in obj["arcs"]])
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed digraph: {exc}") from None


def instance_to_json(inst: Instance) -> dict:
    return {"g": digraph_to_json(inst.g), "lists": [sorted(l) for l in inst.lists]}


def instance_from_json(obj: dict) -> Instance:
    if not isinstance(obj, dict) or "g" not in obj or "lists" not in obj:
        raise InputError("instance JSON needs 'g' and 'lists'")
    return Instance(digraph_from_json(obj["g"]), obj["lists"])


def circular_n_to_json(w: CircularNWitness) -> dict:
    return {"x": w.x, "y": w.y, "X": walk_to_json(w.X), "Y": walk_to_json(w.Y), "Z": walk_to_json(w.Z)}


def circular_n_from_json(obj: dict) -> CircularNWitness:
    return CircularNWitness(int(obj["x"]), int(obj["y"]),
                            walk_from_json(obj["X"]), walk_from_json(obj["Y"]), walk_from_json(obj["Z"]))


def classification_to_json(c: Classification) -> dict:
    return {
        "verdict": c.verdict.value,
        "circular_n": circular_n_to_json(c.circular_n) if c.circular_n else None,
        "dat": {
            "triple": list(c.dat.triple),
            "s": {str(k): v for k, v in sorted(c.dat.s.items())},
            "b": {str(k): v for k, v in sorted(c.dat.b.items())},
        } if c.dat else None,
        "bicycle": {"X": walk_to_json(c.bicycle.X), "Y": walk_to_json(c.bicycle.Y)} if c.bicycle else None,
        "independent_edges": [list(c.independent_edges.first), list(c.independent_edges.second)]
        if c.independent_edges else None,
        "hm_chain_length": c.hm_chain_length,
    }


def classification_from_json(obj: dict) -> Classification:
    dat = obj.get("dat")
    bic = obj.get("bicycle")
    ind = obj.get("independent_edges")
    cn = obj.get("circular_n")
    return Classification(
        verdict=Verdict(obj["verdict"]),
        circular_n=circular_n_from_json(cn) if cn else None,
        dat=DATWitness(tuple(dat["triple"]), {int(k): v for k, v in dat["s"].items()},
                       {int(k): v for k, v in dat["b"].items()}) if dat else None,
        bicycle=BicycleWitness(walk_from_json(bic["X"]), walk_from_json(bic["Y"])) if bic else None,
        independent_edges=IndependentEdges(tuple(ind[0]), tuple(ind[1])) if ind else None,
        hm_chain_length=obj.get("hm_chain_length"),
    )


def chain_to_json(chain: list[TernaryOpTable]) -> list[list[int]]:
    return [f.flat() for f in chain]


def chain_from_json(tables: list[list[int]], n: int) -> list[TernaryOpTable]:
    return [TernaryOpTable(n, t) for t in tables]


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)


def read_digraph(path: str | Path) -> Digraph:
    return parse_digraph(Path(path).read_text())


def read_instance(path: str | Path) -> Instance:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None
    return instance_from_json(obj)
