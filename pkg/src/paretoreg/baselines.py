"""Classical subset-selection baselines.

Exhaustive search reports the best model at every complexity, which is
the ground-truth frontier for small predictor counts.  Forward, backward
and stepwise selection are the textbook partial-F procedures; they return
a single path through model space rather than a frontier.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._kernels import ols_batch
from .data import Dataset, EvaluatedModel, ObjectiveVector
from .pareto import Frontier

EXHAUSTIVE_K_LIMIT = 25
_CHUNK = 2048


def _resolve_workers(workers: int | None) -> int:
    if workers is not None:
        if workers < 1:
            raise ValueError(f"workers must be >= 1, got {workers}")
        return workers
    env = os.environ.get("PARETOREG_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _model_from_fit(
    mask: np.ndarray, intercept: float, coefs_dense: np.ndarray, mse: float
) -> EvaluatedModel:
    return EvaluatedModel(
        mask=mask,
        objective=ObjectiveVector(complexity=int(mask.sum()), error=float(mse)),
        intercept=float(intercept),
        coefficients=np.asarray(coefs_dense)[mask],
    )


def _chunked_combinations(k: int, d: int, chunk: int):
    it = itertools.combinations(range(k), d)
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            return
        masks = np.zeros((len(block), k), dtype=np.bool_)
        for row, cols in enumerate(block):
            masks[row, list(cols)] = True
        yield masks


def _best_in_chunk(data: Dataset, masks: np.ndarray):
    intercepts, coefs, mses, _ = ols_batch(data.X, data.y, masks)
    best = None
    for i in range(masks.shape[0]):
        cand = (mses[i], masks[i].tobytes())
        if best is None or cand < best[0]:
            best = (cand, i)
    i = best[1]
    return mses[i], masks[i], intercepts[i], coefs[i]


def best_subset_table(
    data: Dataset,
    max_complexity: int | None = None,
    workers: int | None = None,
    force: bool = False,
) -> list[EvaluatedModel]:
    """Best in-sample model at every complexity 0..max_complexity.

    Enumerates all masks of each size and keeps the minimum-error one
    (ties go to the lexicographically smallest bit pattern).  Cost grows
    as 2^k, so k above 25 is refused unless ``force=True``.  Chunks of
    masks can be fitted by a thread pool; the reduction is
    order-independent, so worker count does not affect the result.
    """
    k = data.k
    d_max = k if max_complexity is None else max_complexity
    if not 0 <= d_max <= k:
        raise ValueError(f"max_complexity must be in [0, {k}], got {d_max}")
    if k > EXHAUSTIVE_K_LIMIT and not force:
        raise ValueError(
            f"exhaustive search over k={k} predictors needs force=True "
            f"(limit {EXHAUSTIVE_K_LIMIT})"
        )
    n_workers = _resolve_workers(workers)

    table: list[EvaluatedModel] = []
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        for d in range(d_max + 1):
            chunks = _chunked_combinations(k, d, _CHUNK)
            results = pool.map(lambda mk: _best_in_chunk(data, mk), chunks)
            best = None
            for mse, mask, intercept, coefs in results:
                cand = (mse, mask.tobytes())
                if best is None or cand < best[0]:
                    best = (cand, mask, intercept, coefs)
            _, mask, intercept, coefs = best
            table.append(_model_from_fit(mask, intercept, coefs, best[0][0]))
    return table


def exhaustive_frontier(
    data: Dataset,
    max_complexity: int | None = None,
    workers: int | None = None,
    force: bool = False,
) -> Frontier:
    """Exact complexity/error frontier from exhaustive enumeration."""
    return Frontier.from_models(
        best_subset_table(data, max_complexity, workers, force)
    )


@dataclass(frozen=True)
class Trajectory:
    """Path taken by a sequential selection method.

    ``steps`` holds the model after each accepted add or drop, in order;
    the starting model is not included, so a search that accepts nothing
    has an empty trajectory.  ``final`` is the last model examined
    (equal to the start when ``steps`` is empty).
    """

    method: str
    steps: tuple[EvaluatedModel, ...]
    final: EvaluatedModel

    @property
    def model_sizes(self) -> tuple[int, ...]:
        return tuple(m.objective.complexity for m in self.steps)


def _fit_many(data: Dataset, masks: np.ndarray):
    return ols_batch(data.X, data.y, masks)


def _fit_one(data: Dataset, mask: np.ndarray) -> EvaluatedModel:
    intercepts, coefs, mses, _ = _fit_many(data, mask[None, :])
    return _model_from_fit(mask, intercepts[0], coefs[0], mses[0])


def _partial_f(sse_small: float, sse_big: float, n: int, small_size: int) -> float:
    """F statistic for adding one variable to a model of ``small_size``.

    Guards: a perfect larger model gives +inf (or 0 if the smaller model
    was already perfect); a non-positive residual degree of freedom gives
    -inf so the step is never accepted.
    """
    df = n - small_size - 2
    if df <= 0:
        return -math.inf
    if sse_big <= 0.0:
        return math.inf if sse_small > 0.0 else 0.0
    return (sse_small - sse_big) / (sse_big / df)


def forward_selection(
    data: Dataset, enter_threshold: float = 4.0, max_steps: int | None = None
) -> Trajectory:
    """Forward selection by partial-F.

    Starting from the intercept-only model, repeatedly adds the variable
    with the largest partial-F statistic while that statistic exceeds
    ``enter_threshold``.  Ties go to the lowest column index.
    """
    if enter_threshold < 0:
        raise ValueError(f"enter_threshold must be >= 0, got {enter_threshold}")
    n, k = data.n, data.k
    limit = max_steps if max_steps is not None else k
    mask = np.zeros(k, dtype=np.bool_)
    sse = _fit_one(data, mask).objective.error * n
    steps: list[EvaluatedModel] = []
    while int(mask.sum()) < k and len(steps) < limit:
        size = int(mask.sum())
        free = np.flatnonzero(~mask)
        cands = np.repeat(mask[None, :], free.size, axis=0)
        cands[np.arange(free.size), free] = True
        intercepts, coefs, mses, _ = _fit_many(data, cands)
        fstats = np.array(
            [_partial_f(sse, mses[i] * n, n, size) for i in range(free.size)]
        )
        best = int(np.argmax(fstats))
        if not fstats[best] > enter_threshold:
            break
        mask = cands[best]
        sse = mses[best] * n
        steps.append(_model_from_fit(mask, intercepts[best], coefs[best], mses[best]))
    final = steps[-1] if steps else _fit_one(data, np.zeros(k, dtype=np.bool_))
    return Trajectory(method="forward", steps=tuple(steps), final=final)


def _max_rank_start(data: Dataset) -> np.ndarray:
    """Greedy full-rank starting mask for backward elimination.

    The full mask is used when it is not rank deficient; otherwise
    columns are admitted one by one, keeping each column that does not
    introduce rank deficiency.
    """
    full = np.ones(data.k, dtype=np.bool_)
    _, _, _, deficient = _fit_many(data, full[None, :])
    if not deficient[0]:
        return full
    mask = np.zeros(data.k, dtype=np.bool_)
    for j in range(data.k):
        trial = mask.copy()
        trial[j] = True
        _, _, _, deficient = _fit_many(data, trial[None, :])
        if not deficient[0]:
            mask = trial
    return mask


def backward_elimination(
    data: Dataset, exit_threshold: float = 4.0, max_steps: int | None = None
) -> Trajectory:
    """Backward elimination by partial-F.

    Starting from the full model (or the largest numerically full-rank
    subset when the full fit is rank deficient), repeatedly drops the
    variable with the smallest partial-F statistic while that statistic
    is below ``exit_threshold``.
    """
    if exit_threshold < 0:
        raise ValueError(f"exit_threshold must be >= 0, got {exit_threshold}")
    n, k = data.n, data.k
    limit = max_steps if max_steps is not None else k
    mask = _max_rank_start(data)
    current = _fit_one(data, mask)
    steps: list[EvaluatedModel] = []
    while int(mask.sum()) > 0 and len(steps) < limit:
        sse = current.objective.error * n
        on = np.flatnonzero(mask)
        cands = np.repeat(mask[None, :], on.size, axis=0)
        cands[np.arange(on.size), on] = False
        intercepts, coefs, mses, _ = _fit_many(data, cands)
        fstats = np.array(
            [
                _partial_f(mses[i] * n, sse, n, int(mask.sum()) - 1)
                for i in range(on.size)
            ]
        )
        worst = int(np.argmin(fstats))
        if not fstats[worst] < exit_threshold:
            break
        mask = cands[worst]
        current = _model_from_fit(mask, intercepts[worst], coefs[worst], mses[worst])
        steps.append(current)
    return Trajectory(method="backward", steps=tuple(steps), final=current)


def stepwise_selection(
    data: Dataset,
    enter_threshold: float = 4.0,
    exit_threshold: float = 4.0,
    max_steps: int | None = None,
) -> Trajectory:
    """Forward steps with a backward sweep after each accepted addition.

    ``exit_threshold`` must not exceed ``enter_threshold``; otherwise a
    variable could be dropped immediately after entering and the search
    would cycle.  Every accepted add and drop is recorded as a step.
    """
    if exit_threshold > enter_threshold:
        raise ValueError(
            f"exit_threshold {exit_threshold} must not exceed "
            f"enter_threshold {enter_threshold}"
        )
    n, k = data.n, data.k
    limit = max_steps if max_steps is not None else 4 * k
    mask = np.zeros(k, dtype=np.bool_)
    current = _fit_one(data, mask)
    steps: list[EvaluatedModel] = []
    while len(steps) < limit:
        # forward step
        size = int(mask.sum())
        if size == k:
            break
        sse = current.objective.error * n
        free = np.flatnonzero(~mask)
        cands = np.repeat(mask[None, :], free.size, axis=0)
        cands[np.arange(free.size), free] = True
        intercepts, coefs, mses, _ = _fit_many(data, cands)
        fstats = np.array(
            [_partial_f(sse, mses[i] * n, n, size) for i in range(free.size)]
        )
        best = int(np.argmax(fstats))
        if not fstats[best] > enter_threshold:
            break
        mask = cands[best]
        current = _model_from_fit(mask, intercepts[best], coefs[best], mses[best])
        steps.append(current)
        # backward sweep until nothing else leaves
        while int(mask.sum()) > 0 and len(steps) < limit:
            sse = current.objective.error * n
            on = np.flatnonzero(mask)
            cands = np.repeat(mask[None, :], on.size, axis=0)
            cands[np.arange(on.size), on] = False
            intercepts, coefs, mses, _ = _fit_many(data, cands)
            fstats = np.array(
                [
                    _partial_f(mses[i] * n, sse, n, int(mask.sum()) - 1)
                    for i in range(on.size)
                ]
            )
            worst = int(np.argmin(fstats))
            if not fstats[worst] < exit_threshold:
                break
            mask = cands[worst]
            current = _model_from_fit(
                mask, intercepts[worst], coefs[worst], mses[worst]
            )
            steps.append(current)
    return Trajectory(method="stepwise", steps=tuple(steps), final=current)
