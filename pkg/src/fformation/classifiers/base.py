"""Shared classifier machinery: sample matrices, feature scaling, model type."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional, Sequence

import numpy as np

from ..core import PairSample


class TrainingError(ValueError):
    """Training preconditions violated (degenerate labels or features)."""


KINDS = ("weighted_knn", "bagged_trees", "logistic_regression")

# Short names accepted anywhere a kind is expected; the CLI uses these.
KIND_ALIASES = {
    "knn": "weighted_knn",
    "trees": "bagged_trees",
    "logreg": "logistic_regression",
}

DEFAULT_HYPERPARAMS: dict[str, dict[str, Any]] = {
    "weighted_knn": {"k": 10},
    "bagged_trees": {"n_trees": 30, "max_depth": 12, "min_leaf": 5, "bootstrap": True},
    "logistic_regression": {"l2": 1e-4, "learning_rate": 0.1, "epochs": 2000, "tol": 1e-8},
}


def canonical_kind(kind: str) -> str:
    kind = KIND_ALIASES.get(kind, kind)
    if kind not in KINDS:
        raise ValueError(f"unknown classifier kind {kind!r}; expected one of {KINDS}")
    return kind


def resolve_hyperparams(kind: str, overrides: Optional[dict[str, Any]]) -> dict[str, Any]:
    params = dict(DEFAULT_HYPERPARAMS[kind])
    for key, value in (overrides or {}).items():
        if key not in params:
            raise ValueError(f"unknown hyperparameter {key!r} for kind {kind!r}")
        params[key] = value
    return params


@dataclass(frozen=True)
class FeatureScaling:
    """Per-feature z-score parameters learned from the training set."""

    mean: np.ndarray
    std: np.ndarray

    def apply(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=np.float64) - self.mean) / self.std


@dataclass(frozen=True)
class TrainedModel:
    """A trained pairwise classifier.

    ``params`` holds the kind-specific learned state (KNN keeps its
    standardized training set, bagged trees their node arrays, logistic
    regression its three coefficients). Prediction is a pure function of
    (params, scaling, input); models are immutable and safe to share
    across threads.
    """

    kind: str
    scaling: FeatureScaling
    seed: int
    hyperparams: dict[str, Any]
    params: Any


def samples_to_arrays(samples: Sequence[PairSample]) -> tuple[np.ndarray, np.ndarray]:
    """Order-normalized (X, y) matrices from labeled samples.

    Samples are sorted by (distance, effort_angle, label, ids) so that
    training is deterministic regardless of caller ordering. Raises
    TrainingError for unlabeled samples, fewer than 2 samples,
    single-class label sets, or zero-variance features.
    """
    if any(s.label is None for s in samples):
        raise TrainingError("training requires labeled samples")
    ordered = sorted(samples, key=lambda s: (s.distance, s.effort_angle, s.label, s.id_a, s.id_b))
    if len(ordered) < 2:
        raise TrainingError(f"need at least 2 labeled samples, got {len(ordered)}")
    X = np.array([[s.distance, s.effort_angle] for s in ordered], dtype=np.float64)
    y = np.array([s.label for s in ordered], dtype=np.uint8)
    if not np.isfinite(X).all():
        raise TrainingError("non-finite feature values in training samples")
    if len(np.unique(y)) < 2:
        raise TrainingError("degenerate labels: training set contains a single class")
    return X, y


def fit_scaling(X: np.ndarray) -> FeatureScaling:
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    if np.any(std <= 0.0):
        bad = int(np.argmin(std))
        name = ("distance", "effort_angle")[bad]
        raise TrainingError(f"degenerate feature: {name} has zero variance")
    return FeatureScaling(mean=mean, std=std)
