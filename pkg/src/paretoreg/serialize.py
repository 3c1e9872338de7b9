"""JSON and CSV serialisation of frontiers, trajectories and ground truth.

``frontier.json`` is the interchange document between the search and
analysis stages.  Layout (schema tag ``paretoreg-frontier/1``)::

    {
      "schema": "paretoreg-frontier/1",
      "config": { ... run parameters, enough to reproduce the run ... },
      "data": {"n": 500, "k": 15, "names": [...], "target": "y"},
      "models": [
        {"mask": "010110...", "variables": [...], "complexity": 3,
         "error": 1.25, "intercept": 0.5, "coefficients": [...]},
        ...
      ],
      "stats": {"generations": 500, "evaluations": 7515,
                "unique_models": 3101, "runtime_seconds": 2.2}
    }

Masks serialise as bitstrings and floats via ``repr``, so a round trip
through JSON reproduces every value exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .baselines import Trajectory
from .data import EvaluatedModel, ObjectiveVector, mask_from_string, mask_to_string
from .moga import Snapshot
from .pareto import Frontier
from .simdata import TrueModel

FRONTIER_SCHEMA = "paretoreg-frontier/1"


def _model_to_dict(model: EvaluatedModel, names: Sequence[str]) -> dict[str, Any]:
    return {
        "mask": mask_to_string(model.mask),
        "variables": list(model.selected_names(names)),
        "complexity": model.objective.complexity,
        "error": float(model.objective.error),
        "intercept": float(model.intercept),
        "coefficients": [float(c) for c in model.coefficients],
    }


def _model_from_dict(doc: dict[str, Any]) -> EvaluatedModel:
    mask = mask_from_string(doc["mask"])
    return EvaluatedModel(
        mask=mask,
        objective=ObjectiveVector(
            complexity=int(doc["complexity"]), error=float(doc["error"])
        ),
        intercept=float(doc["intercept"]),
        coefficients=np.asarray(doc["coefficients"], dtype=np.float64),
    )


@dataclass(frozen=True)
class FrontierDoc:
    """A deserialised ``frontier.json``."""

    frontier: Frontier
    names: tuple[str, ...]
    target: str
    n: int
    config: dict[str, Any]
    stats: dict[str, Any]


def frontier_to_dict(
    frontier: Frontier,
    names: Sequence[str],
    target: str,
    n: int,
    config: dict[str, Any],
    stats: dict[str, Any],
) -> dict[str, Any]:
    return {
        "schema": FRONTIER_SCHEMA,
        "config": dict(config),
        "data": {"n": int(n), "k": len(names), "names": list(names), "target": target},
        "models": [_model_to_dict(m, names) for m in frontier],
        "stats": dict(stats),
    }


def frontier_from_dict(doc: dict[str, Any]) -> FrontierDoc:
    if doc.get("schema") != FRONTIER_SCHEMA:
        raise ValueError(
            f"unsupported frontier schema {doc.get('schema')!r}, "
            f"expected {FRONTIER_SCHEMA!r}"
        )
    models = tuple(_model_from_dict(d) for d in doc["models"])
    return FrontierDoc(
        frontier=Frontier(models=models),
        names=tuple(doc["data"]["names"]),
        target=str(doc["data"].get("target", "y")),
        n=int(doc["data"]["n"]),
        config=dict(doc.get("config", {})),
        stats=dict(doc.get("stats", {})),
    )


def write_frontier_json(path: str, doc: dict[str, Any]) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def read_frontier_json(path: str) -> FrontierDoc:
    with open(path) as fh:
        return frontier_from_dict(json.load(fh))


def frontier_csv(frontier: Frontier, names: Sequence[str]) -> str:
    """Flat CSV view of a frontier, one model per row."""
    lines = ["complexity,error,intercept,mask,variables,coefficients"]
    for m in frontier:
        variables = ";".join(m.selected_names(names))
        coefs = ";".join(repr(float(c)) for c in m.coefficients)
        lines.append(
            f"{m.objective.complexity},{float(m.objective.error)!r},"
            f"{float(m.intercept)!r},{mask_to_string(m.mask)},{variables},{coefs}"
        )
    return "\n".join(lines) + "\n"


def trajectory_to_dict(traj: Trajectory, names: Sequence[str]) -> dict[str, Any]:
    return {
        "schema": "paretoreg-trajectory/1",
        "method": traj.method,
        "steps": [_model_to_dict(m, names) for m in traj.steps],
        "final": _model_to_dict(traj.final, names),
    }


def trajectory_csv(traj: Trajectory, names: Sequence[str]) -> str:
    lines = ["step,complexity,error,mask,variables"]
    for i, m in enumerate(traj.steps, start=1):
        variables = ";".join(m.selected_names(names))
        lines.append(
            f"{i},{m.objective.complexity},{float(m.objective.error)!r},"
            f"{mask_to_string(m.mask)},{variables}"
        )
    return "\n".join(lines) + "\n"


def truth_to_dict(truth: TrueModel) -> dict[str, Any]:
    return {
        "schema": "paretoreg-truth/1",
        "space_names": list(truth.space_names),
        "mask": mask_to_string(truth.mask),
        "terms": list(truth.names),
        "coefficients": [float(c) for c in truth.coefficients],
        "intercept": float(truth.intercept),
        "noise_sd": float(truth.noise_sd),
    }


def truth_from_dict(doc: dict[str, Any]) -> TrueModel:
    if doc.get("schema") != "paretoreg-truth/1":
        raise ValueError(f"unsupported truth schema {doc.get('schema')!r}")
    return TrueModel(
        names=tuple(doc["terms"]),
        coefficients=np.asarray(doc["coefficients"], dtype=np.float64),
        intercept=float(doc["intercept"]),
        noise_sd=float(doc["noise_sd"]),
        space_names=tuple(doc["space_names"]),
    )


def snapshots_csv(snapshots: Sequence[Snapshot]) -> str:
    lines = ["generation,complexity,error"]
    for snap in snapshots:
        for c, e in zip(snap.complexities, snap.errors):
            lines.append(f"{snap.generation},{c},{float(e)!r}")
    return "\n".join(lines) + "\n"


def snapshots_from_csv(text: str) -> tuple[Snapshot, ...]:
    rows = [ln.split(",") for ln in text.strip().splitlines()[1:] if ln]
    by_gen: dict[int, tuple[list[int], list[float]]] = {}
    for gen, c, e in rows:
        bucket = by_gen.setdefault(int(gen), ([], []))
        bucket[0].append(int(c))
        bucket[1].append(float(e))
    return tuple(
        Snapshot(generation=g, complexities=tuple(cs), errors=tuple(es))
        for g, (cs, es) in sorted(by_gen.items())
    )
