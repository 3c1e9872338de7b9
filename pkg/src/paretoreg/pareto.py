"""Pareto dominance over (complexity, error) objective pairs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .data import EvaluatedModel, ObjectiveVector


def dominates(a: ObjectiveVector, b: ObjectiveVector) -> bool:
    """True if ``a`` is no worse than ``b`` in both objectives and
    strictly better in at least one.  Equal vectors dominate nothing.
    """
    if a.complexity > b.complexity or a.error > b.error:
        return False
    return a.complexity < b.complexity or a.error < b.error


def _dominance_matrix(phi1: np.ndarray, phi2: np.ndarray) -> np.ndarray:
    """dom[i, j] is True when point i dominates point j."""
    le = (phi1[:, None] <= phi1[None, :]) & (phi2[:, None] <= phi2[None, :])
    lt = (phi1[:, None] < phi1[None, :]) | (phi2[:, None] < phi2[None, :])
    return le & lt


def nondominated(models: Sequence[EvaluatedModel]) -> list[EvaluatedModel]:
    """Non-dominated subset of ``models``, deduplicated on objectives.

    Among models sharing an identical objective vector the one with the
    lexicographically smallest mask bit pattern is kept.  Output preserves
    the input order of the survivors.
    """
    if not models:
        return []
    phi1 = np.fromiter((m.objective.complexity for m in models), dtype=np.int64)
    phi2 = np.fromiter((m.objective.error for m in models), dtype=np.float64)
    dominated = _dominance_matrix(phi1, phi2).any(axis=0)

    best: dict[ObjectiveVector, int] = {}
    for i, model in enumerate(models):
        if dominated[i]:
            continue
        prev = best.get(model.objective)
        if prev is None or model.mask_key() < models[prev].mask_key():
            best[model.objective] = i
    keep = sorted(best.values())
    return [models[i] for i in keep]


@dataclass(frozen=True)
class Frontier:
    """A non-dominated set ordered by ascending complexity.

    Along the frontier error is strictly decreasing, so each complexity
    appears at most once.
    """

    models: tuple[EvaluatedModel, ...]

    @classmethod
    def from_models(cls, models: Iterable[EvaluatedModel]) -> "Frontier":
        """Build a frontier from any collection of evaluated models.

        Dominated members and objective duplicates are dropped first.
        """
        survivors = nondominated(list(models))
        ordered = sorted(survivors, key=lambda m: m.objective.complexity)
        return cls(models=tuple(ordered))

    def __post_init__(self) -> None:
        for prev, cur in zip(self.models, self.models[1:]):
            if cur.objective.complexity <= prev.objective.complexity:
                raise ValueError("frontier complexities must strictly increase")
            if cur.objective.error >= prev.objective.error:
                raise ValueError("frontier errors must strictly decrease")

    def __len__(self) -> int:
        return len(self.models)

    def __iter__(self):
        return iter(self.models)

    def __getitem__(self, idx: int) -> EvaluatedModel:
        return self.models[idx]

    @property
    def complexities(self) -> tuple[int, ...]:
        return tuple(m.objective.complexity for m in self.models)

    @property
    def errors(self) -> tuple[float, ...]:
        return tuple(m.objective.error for m in self.models)

    def at_complexity(self, complexity: int) -> EvaluatedModel | None:
        """The frontier model with exactly this complexity, if any."""
        for m in self.models:
            if m.objective.complexity == complexity:
                return m
        return None

    def restrict(self, lo: int, hi: int) -> "Frontier":
        """Sub-frontier with complexity in the closed range [lo, hi]."""
        if lo > hi:
            raise ValueError(f"empty complexity range [{lo}, {hi}]")
        kept = tuple(
            m for m in self.models if lo <= m.objective.complexity <= hi
        )
        return Frontier(models=kept)
