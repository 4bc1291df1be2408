"""Weighted k-nearest-neighbors over standardized pair features.

Votes are weighted by inverse squared Euclidean distance in standardized
feature space. Exact feature matches (distance 0) dominate the vote.
Ties in neighbor selection at the k-th position are broken toward label 0,
then toward the lower training index, so prediction is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Extra neighbors kept past k so boundary ties can be resolved without
# sorting the whole row; if ties spill past the buffer we fall back to a
# full sort of that row.
_TIE_BUFFER = 8


@dataclass(frozen=True)
class KnnParams:
    points: np.ndarray  # (n, 2) standardized training features
    labels: np.ndarray  # (n,) uint8


def fit(Xs: np.ndarray, y: np.ndarray) -> KnnParams:
    pts = np.array(Xs, dtype=np.float64)
    labels = np.array(y, dtype=np.uint8)
    pts.setflags(write=False)
    labels.setflags(write=False)
    return KnnParams(points=pts, labels=labels)


def _row_score(d2: np.ndarray, labels: np.ndarray, k: int) -> float:
    """Score one query given squared distances to every training point."""
    n = d2.shape[0]
    kth = min(k + _TIE_BUFFER, n) - 1
    cand = np.argpartition(d2, kth)[: kth + 1]
    order = np.lexsort((cand, labels[cand], d2[cand]))
    cand = cand[order]
    # Boundary tie spilling past the buffer: resort the full row.
    if kth + 1 < n and d2[cand[k - 1]] == d2[cand[-1]]:
        cand = np.lexsort((np.arange(n), labels, d2))
    sel = cand[:k]
    d2_sel = d2[sel]
    y_sel = labels[sel].astype(np.float64)
    if d2_sel[0] == 0.0:
        exact = d2_sel == 0.0
        return float(y_sel[exact].mean())
    w = 1.0 / d2_sel
    return float((w * y_sel).sum() / w.sum())


def scores(params: KnnParams, k: int, Xs: np.ndarray) -> np.ndarray:
    """Weighted positive-class vote for each standardized query row."""
    pts = params.points
    labels = params.labels
    n = pts.shape[0]
    k = min(int(k), n)
    if k < 1:
        raise ValueError("k must be >= 1")
    Xs = np.atleast_2d(np.asarray(Xs, dtype=np.float64))
    m = Xs.shape[0]
    out = np.empty(m, dtype=np.float64)
    # Block queries so the (block, n) distance matrix stays modest.
    block = max(1, int(2e7) // max(n, 1))
    for start in range(0, m, block):
        q = Xs[start : start + block]
        d2 = (q[:, 0:1] - pts[None, :, 0]) ** 2
        d2 += (q[:, 1:2] - pts[None, :, 1]) ** 2
        for i in range(q.shape[0]):
            out[start + i] = _row_score(d2[i], labels, k)
    return out
