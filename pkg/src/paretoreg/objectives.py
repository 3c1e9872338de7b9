"""Search objectives: in-sample and cross-validated error, information criteria.

The error objective attached to a mask is either the in-sample mean
squared error of the full-data fit or a k-fold cross-validation estimate.
For cross-validation the fold partition is drawn once per run and reused
for every mask, so all candidates face identical folds and their errors
are comparable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from ._kernels import ols_batch
from .data import Dataset, EvaluatedModel, ObjectiveVector

IN_SAMPLE = "in_sample"
CROSS_VALIDATION = "cross_validation"


@dataclass(frozen=True)
class FoldPartition:
    """A fixed disjoint partition of row indices into validation folds."""

    n: int
    folds: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        seen = np.concatenate(self.folds) if self.folds else np.empty(0, dtype=np.int64)
        if len(self.folds) < 2:
            raise ValueError("need at least 2 folds")
        if any(f.size == 0 for f in self.folds):
            raise ValueError("folds must be non-empty")
        if seen.size != self.n or np.unique(seen).size != self.n:
            raise ValueError("folds must partition range(n) exactly")
        if seen.min() != 0 or seen.max() != self.n - 1:
            raise ValueError("fold indices out of range")
        frozen = []
        for f in self.folds:
            f = np.asarray(f, dtype=np.int64).copy()
            f.flags.writeable = False
            frozen.append(f)
        object.__setattr__(self, "folds", tuple(frozen))

    @property
    def n_folds(self) -> int:
        return len(self.folds)

    def train_indices(self, fold: int) -> np.ndarray:
        """All row indices outside the given validation fold."""
        keep = np.ones(self.n, dtype=bool)
        keep[self.folds[fold]] = False
        return np.flatnonzero(keep)


def make_partition(n: int, n_folds: int, seed: int) -> FoldPartition:
    """Randomly partition ``range(n)`` into ``n_folds`` validation folds.

    Rows are permuted once and cut into consecutive slices; fold sizes
    differ by at most one.  Deterministic in ``seed``.
    """
    if not 2 <= n_folds <= n:
        raise ValueError(f"need 2 <= n_folds <= n, got n_folds={n_folds}, n={n}")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    base, extra = divmod(n, n_folds)
    folds = []
    start = 0
    for i in range(n_folds):
        size = base + (1 if i < extra else 0)
        folds.append(perm[start : start + size])
        start += size
    return FoldPartition(n=n, folds=tuple(folds))


@dataclass(frozen=True)
class ObjectiveSpec:
    """Which error objective to attach to candidate models.

    ``kind`` is ``"in_sample"`` or ``"cross_validation"``.  For
    cross-validation, ``folds``/``seed`` describe the partition; a
    concrete :class:`FoldPartition` is attached lazily via
    :meth:`resolve` once the row count is known.
    """

    kind: str = IN_SAMPLE
    folds: int = 10
    seed: int = 0
    partition: FoldPartition | None = None

    def __post_init__(self) -> None:
        if self.kind not in (IN_SAMPLE, CROSS_VALIDATION):
            raise ValueError(f"unknown objective kind {self.kind!r}")
        if self.kind == CROSS_VALIDATION and self.folds < 2:
            raise ValueError("cross-validation needs at least 2 folds")

    def resolve(self, n: int) -> "ObjectiveSpec":
        """Return a spec whose partition is built for ``n`` rows."""
        if self.kind == IN_SAMPLE:
            return self
        if self.partition is not None:
            if self.partition.n != n:
                raise ValueError(
                    f"partition built for n={self.partition.n}, data has n={n}"
                )
            return self
        return replace(self, partition=make_partition(n, self.folds, self.seed))


def in_sample_objective(data: Dataset, mask) -> ObjectiveVector:
    """Objective pair (selected count, full-data mean squared error)."""
    mask = data.validate_mask(mask)
    _, _, mses, _ = ols_batch(data.X, data.y, mask[None, :])
    return ObjectiveVector(complexity=int(mask.sum()), error=float(mses[0]))


def cv_objective(data: Dataset, mask, spec: ObjectiveSpec) -> ObjectiveVector:
    """Objective pair (selected count, k-fold cross-validated error).

    For each fold the model is refitted on the remaining rows and scored
    on the held-out fold; the error is the unweighted mean of the fold
    validation errors.  The same partition must be used for every mask
    in a run for the errors to be comparable.
    """
    if spec.kind != CROSS_VALIDATION:
        raise ValueError(f"spec kind must be {CROSS_VALIDATION!r}, got {spec.kind!r}")
    spec = spec.resolve(data.n)
    mask = data.validate_mask(mask)
    part = spec.partition
    total = 0.0
    for fold in range(part.n_folds):
        train = part.train_indices(fold)
        val = part.folds[fold]
        intercepts, coefs, _, _ = ols_batch(data.X[train], data.y[train], mask[None, :])
        resid = data.y[val] - (intercepts[0] + data.X[val] @ coefs[0])
        total += float(resid @ resid) / val.size
    return ObjectiveVector(
        complexity=int(mask.sum()), error=total / part.n_folds
    )


class ObjectiveEvaluator:
    """Evaluates masks against one dataset and objective, with memoisation.

    Results are cached on the raw mask bit pattern, so re-evaluating a
    duplicate mask costs a dictionary lookup rather than a fit.  All fits
    go through the batch kernel; callers should prefer
    :meth:`evaluate_many` to amortise the per-call overhead.
    """

    def __init__(self, data: Dataset, spec: ObjectiveSpec | None = None) -> None:
        self.data = data
        self.spec = (spec or ObjectiveSpec()).resolve(data.n)
        self._cache: dict[bytes, EvaluatedModel] = {}
        self._queries = 0
        if self.spec.kind == CROSS_VALIDATION:
            part = self.spec.partition
            self._train_sets = [
                (part.train_indices(f), np.asarray(part.folds[f]))
                for f in range(part.n_folds)
            ]
            # per-fold training views, materialised once
            self._fold_data = [
                (
                    np.ascontiguousarray(data.X[tr]),
                    np.ascontiguousarray(data.y[tr]),
                    np.ascontiguousarray(data.X[va]),
                    np.ascontiguousarray(data.y[va]),
                )
                for tr, va in self._train_sets
            ]

    @property
    def evaluations(self) -> int:
        """Total masks submitted, including cache hits."""
        return self._queries

    @property
    def unique_models(self) -> int:
        """Distinct masks fitted so far."""
        return len(self._cache)

    def archive(self) -> list[EvaluatedModel]:
        """Every distinct model evaluated so far, in first-seen order."""
        return list(self._cache.values())

    def evaluate(self, mask) -> EvaluatedModel:
        return self.evaluate_many([mask])[0]

    def evaluate_many(self, masks: Sequence) -> list[EvaluatedModel]:
        """Evaluate masks in order, fitting only the uncached ones."""
        arrs = [self.data.validate_mask(m) for m in masks]
        self._queries += len(arrs)
        keys = [a.tobytes() for a in arrs]
        fresh_keys: list[bytes] = []
        fresh_masks: list[np.ndarray] = []
        seen = set()
        for key, arr in zip(keys, arrs):
            if key in self._cache or key in seen:
                continue
            seen.add(key)
            fresh_keys.append(key)
            fresh_masks.append(arr)
        if fresh_masks:
            batch = np.stack(fresh_masks)
            for key, model in zip(fresh_keys, self._evaluate_batch(batch)):
                self._cache[key] = model
        return [self._cache[key] for key in keys]

    def _evaluate_batch(self, masks: np.ndarray) -> list[EvaluatedModel]:
        data = self.data
        intercepts, coefs, mses, _ = ols_batch(data.X, data.y, masks)
        complexities = masks.sum(axis=1)
        if self.spec.kind == IN_SAMPLE:
            errors = mses
        else:
            errors = np.zeros(masks.shape[0], dtype=np.float64)
            for Xtr, ytr, Xva, yva in self._fold_data:
                b0, b, _, _ = ols_batch(Xtr, ytr, masks)
                preds = b0[None, :] + Xva @ b.T
                errors += np.mean((yva[:, None] - preds) ** 2, axis=0)
            errors /= len(self._fold_data)
        out = []
        for i in range(masks.shape[0]):
            mask = masks[i]
            out.append(
                EvaluatedModel(
                    mask=mask,
                    objective=ObjectiveVector(
                        complexity=int(complexities[i]), error=float(errors[i])
                    ),
                    intercept=float(intercepts[i]),
                    coefficients=coefs[i][mask],
                )
            )
        return out


def aic(mse: float, k: int, n: int, alt_form: bool = False) -> float:
    """Akaike information criterion per observation, up to constants.

    Default is ``2k/n + ln(mse)``; lower is better.  ``alt_form`` flips
    the sign of the log term (``2k/n - 2 ln(mse)``), a variant that
    appears in some published summaries but whose minimiser does not
    track model fit, so it is not the default.
    """
    _check_ic_args(mse, k, n)
    if alt_form:
        return 2.0 * k / n - 2.0 * math.log(mse)
    return 2.0 * k / n + math.log(mse)


def bic(mse: float, k: int, n: int, alt_form: bool = False) -> float:
    """Bayesian information criterion per observation, up to constants.

    Default is ``k ln(n)/n + ln(mse)``; the ``alt_form`` variant is
    ``k ln(n)/n - 2 ln(mse)`` (see :func:`aic`).
    """
    _check_ic_args(mse, k, n)
    if alt_form:
        return k * math.log(n) / n - 2.0 * math.log(mse)
    return k * math.log(n) / n + math.log(mse)


def _check_ic_args(mse: float, k: int, n: int) -> None:
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    if not (mse > 0 and math.isfinite(mse)):
        raise ValueError(f"information criteria need mse > 0, got {mse}")
