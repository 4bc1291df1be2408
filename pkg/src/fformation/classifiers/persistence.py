"""Model save/load: a self-describing versioned JSON document.

Floats are serialized with Python's shortest round-trip repr, so a
save -> load cycle reproduces bit-identical predictions.
"""

from __future__ import annotations

import json
import os
from typing import Any

import numpy as np

from .base import FeatureScaling, TrainedModel, canonical_kind
from .knn import KnnParams
from .logreg import LogisticParams
from .trees import ForestParams, TreeArrays

FORMAT_NAME = "fformation-model"
FORMAT_VERSION = 1


class ModelFormatError(ValueError):
    """The model document is malformed or from an unsupported version."""


def model_to_dict(model: TrainedModel) -> dict[str, Any]:
    if model.kind == "weighted_knn":
        params = {
            "points": model.params.points.tolist(),
            "labels": model.params.labels.tolist(),
        }
    elif model.kind == "bagged_trees":
        params = {
            "trees": [
                {
                    "feature": t.feature.tolist(),
                    "threshold": t.threshold.tolist(),
                    "left": t.left.tolist(),
                    "right": t.right.tolist(),
                    "value": t.value.tolist(),
                }
                for t in model.params.trees
            ]
        }
    else:
        params = {"coef": model.params.coef.tolist()}
    return {
        "format": FORMAT_NAME,
        "schema_version": FORMAT_VERSION,
        "kind": model.kind,
        "seed": model.seed,
        "hyperparams": model.hyperparams,
        "scaling": {
            "mean": model.scaling.mean.tolist(),
            "std": model.scaling.std.tolist(),
        },
        "params": params,
    }


def model_from_dict(doc: dict[str, Any]) -> TrainedModel:
    try:
        if doc.get("format") != FORMAT_NAME:
            raise ModelFormatError(f"not a {FORMAT_NAME} document")
        if doc.get("schema_version") != FORMAT_VERSION:
            raise ModelFormatError(f"unsupported schema_version {doc.get('schema_version')!r}")
        kind = canonical_kind(doc["kind"])
        scaling = FeatureScaling(
            mean=np.array(doc["scaling"]["mean"], dtype=np.float64),
            std=np.array(doc["scaling"]["std"], dtype=np.float64),
        )
        raw = doc["params"]
        if kind == "weighted_knn":
            params: Any = KnnParams(
                points=np.array(raw["points"], dtype=np.float64),
                labels=np.array(raw["labels"], dtype=np.uint8),
            )
        elif kind == "bagged_trees":
            params = ForestParams(
                trees=tuple(
                    TreeArrays(
                        feature=np.array(t["feature"], dtype=np.int32),
                        threshold=np.array(t["threshold"], dtype=np.float64),
                        left=np.array(t["left"], dtype=np.int32),
                        right=np.array(t["right"], dtype=np.int32),
                        value=np.array(t["value"], dtype=np.float64),
                    )
                    for t in raw["trees"]
                )
            )
        else:
            params = LogisticParams(coef=np.array(raw["coef"], dtype=np.float64))
        return TrainedModel(
            kind=kind,
            scaling=scaling,
            seed=int(doc["seed"]),
            hyperparams=dict(doc["hyperparams"]),
            params=params,
        )
    except (KeyError, TypeError) as exc:
        raise ModelFormatError(f"malformed model document: {exc}") from exc


def save_model(model: TrainedModel, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, indent=1)
        fh.write("\n")


def load_model(path: str | os.PathLike) -> TrainedModel:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ModelFormatError(f"{path}: expected a JSON object at top level")
    return model_from_dict(doc)
