"""Bagged CART trees with Gini-impurity splits, stored as flat node arrays.

Each tree is grown on a bootstrap resample (same size as the training
set) with axis-aligned splits. Splitting is deterministic: features are
scanned in order, candidate thresholds are midpoints between consecutive
distinct sorted values, and ties keep the first (lowest feature, lowest
threshold) candidate. A node splits whenever it is impure, depth allows,
and some candidate respects the minimum leaf size; zero-gain splits are
allowed so consistent data can always be driven to pure leaves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TreeArrays:
    """One tree as parallel node arrays; feature == -1 marks a leaf."""

    feature: np.ndarray  # int32
    threshold: np.ndarray  # float64 (0.0 at leaves)
    left: np.ndarray  # int32 child index (-1 at leaves)
    right: np.ndarray  # int32 child index (-1 at leaves)
    value: np.ndarray  # float64 positive-class fraction at the node


@dataclass(frozen=True)
class ForestParams:
    trees: tuple[TreeArrays, ...]


def _best_split(X: np.ndarray, y: np.ndarray, min_leaf: int):
    """Lowest weighted-Gini split, or None when no candidate is valid."""
    n = y.shape[0]
    best_score = np.inf
    best = None
    sizes_l = np.arange(1, n, dtype=np.float64)
    sizes_r = n - sizes_l
    for f in range(X.shape[1]):
        xs = X[:, f]
        order = np.argsort(xs, kind="stable")
        xs_sorted = xs[order]
        pos_l = np.cumsum(y[order]).astype(np.float64)[:-1]
        total_pos = float(y.sum())
        valid = (xs_sorted[1:] > xs_sorted[:-1]) & (sizes_l >= min_leaf) & (sizes_r >= min_leaf)
        if not valid.any():
            continue
        pos_r = total_pos - pos_l
        gini_l = 1.0 - (pos_l / sizes_l) ** 2 - ((sizes_l - pos_l) / sizes_l) ** 2
        gini_r = 1.0 - (pos_r / sizes_r) ** 2 - ((sizes_r - pos_r) / sizes_r) ** 2
        score = (sizes_l * gini_l + sizes_r * gini_r) / n
        score[~valid] = np.inf
        i = int(np.argmin(score))
        if score[i] < best_score:
            threshold = 0.5 * (xs_sorted[i] + xs_sorted[i + 1])
            left_mask = xs <= threshold
            # Midpoint can round onto the upper value; fall back to the
            # exact lower value so the partition matches the scan.
            if left_mask.sum() != i + 1:
                threshold = xs_sorted[i]
                left_mask = xs <= threshold
            best_score = float(score[i])
            best = (f, float(threshold), left_mask)
    return best


def _grow(X: np.ndarray, y: np.ndarray, max_depth, min_leaf: int) -> TreeArrays:
    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    value: list[float] = []

    def new_node(val: float) -> int:
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(val)
        return len(feature) - 1

    root = new_node(float(y.mean()))
    stack = [(root, np.arange(y.shape[0]), 0)]
    while stack:
        node, idx, depth = stack.pop()
        ys = y[idx]
        pure = bool((ys == ys[0]).all())
        if pure or (max_depth is not None and depth >= max_depth) or idx.shape[0] < 2 * min_leaf:
            continue
        split = _best_split(X[idx], ys, min_leaf)
        if split is None:
            continue
        f, thr, left_mask = split
        idx_l = idx[left_mask]
        idx_r = idx[~left_mask]
        feature[node] = f
        threshold[node] = thr
        left[node] = new_node(float(y[idx_l].mean()))
        right[node] = new_node(float(y[idx_r].mean()))
        stack.append((left[node], idx_l, depth + 1))
        stack.append((right[node], idx_r, depth + 1))

    return TreeArrays(
        feature=np.array(feature, dtype=np.int32),
        threshold=np.array(threshold, dtype=np.float64),
        left=np.array(left, dtype=np.int32),
        right=np.array(right, dtype=np.int32),
        value=np.array(value, dtype=np.float64),
    )


def fit(
    Xs: np.ndarray,
    y: np.ndarray,
    seed: int,
    n_trees: int,
    max_depth,
    min_leaf: int,
    bootstrap: bool,
) -> ForestParams:
    n = y.shape[0]
    seeds = np.random.SeedSequence(seed).spawn(n_trees)
    trees = []
    for tree_seed in seeds:
        rng = np.random.default_rng(tree_seed)
        if bootstrap:
            idx = np.sort(rng.integers(0, n, size=n))
        else:
            idx = np.arange(n)
        trees.append(_grow(Xs[idx], y[idx], max_depth, min_leaf))
    return ForestParams(trees=tuple(trees))


def _tree_scores(tree: TreeArrays, Xs: np.ndarray) -> np.ndarray:
    node = np.zeros(Xs.shape[0], dtype=np.int32)
    while True:
        feat = tree.feature[node]
        active = np.flatnonzero(feat >= 0)
        if active.size == 0:
            return tree.value[node]
        cur = node[active]
        go_left = Xs[active, feat[active]] <= tree.threshold[cur]
        node[active] = np.where(go_left, tree.left[cur], tree.right[cur])


def scores(params: ForestParams, Xs: np.ndarray) -> np.ndarray:
    """Mean leaf positive-class fraction across the ensemble."""
    Xs = np.atleast_2d(np.asarray(Xs, dtype=np.float64))
    total = np.zeros(Xs.shape[0], dtype=np.float64)
    for tree in params.trees:
        total += _tree_scores(tree, Xs)
    return total / len(params.trees)
