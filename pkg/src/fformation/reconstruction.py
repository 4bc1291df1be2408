"""Aggregate pairwise same-group predictions into whole groups.

Greedy reconstruction repeatedly picks the positively-classified pair
whose belief sets (matrix rows) agree on the most remaining agents,
emits that agreement as a group, and removes its members. Agents never
emitted stay ungrouped; every emitted group has at least 2 members.
"""

from __future__ import annotations

from .classifiers import TrainedModel, build_relation_matrix
from .core import Frame, GroupSet, RelationMatrix

MODES = ("intersection", "union")


def belief_set(matrix: RelationMatrix, i: int) -> set:
    """Agent ids that row index i is predicted to share a group with.

    Always contains the agent's own id (unit diagonal).
    """
    n = matrix.n
    if not 0 <= i < n:
        raise IndexError(f"row index {i} out of range for {n} agents")
    row = matrix.m[i]
    return {matrix.ids[j] for j in range(n) if row[j] == 1}


def greedy_reconstruct(matrix: RelationMatrix, mode: str = "intersection") -> GroupSet:
    """Emit disjoint groups from a relation matrix, largest agreement first.

    Each round considers remaining index pairs (i, j) with m[i][j] = 1 and
    picks the one maximizing |B_i ∩ B_j| over remaining agents, ties going
    to the lexicographically smallest (i, j). The emitted group is
    (B_i ∩ B_j) ∪ {i, j}, or B_i ∪ B_j in union mode. Rounds continue
    while 2+ agents remain and some positive off-diagonal entry survives.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    n = matrix.n
    m = matrix.m
    beliefs = [frozenset(j for j in range(n) if m[i][j] == 1) for i in range(n)]
    remaining = set(range(n))
    groups = []
    while len(remaining) >= 2:
        best_size = -1
        best = None
        for i in sorted(remaining):
            for j in sorted(remaining):
                if j <= i or m[i][j] != 1:
                    continue
                size = len(beliefs[i] & beliefs[j] & remaining)
                if size > best_size:
                    best_size = size
                    best = (i, j)
        if best is None:
            break
        i, j = best
        if mode == "union":
            emitted = (beliefs[i] | beliefs[j]) & remaining
        else:
            emitted = (beliefs[i] & beliefs[j] & remaining) | {i, j}
        groups.append(frozenset(matrix.ids[k] for k in emitted))
        remaining -= emitted
    return GroupSet(groups=tuple(groups))


def detect(model: TrainedModel, frame: Frame, mode: str = "intersection") -> GroupSet:
    """Classify all pairs in a frame and reconstruct its groups."""
    return greedy_reconstruct(build_relation_matrix(model, frame), mode=mode)
