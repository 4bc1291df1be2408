"""Pairwise deconstruction of frames and the two pair features.

A frame of n people is broken into all n*(n-1)/2 unordered pairs; each
pair is described by two numbers:

* distance: Euclidean distance between the two positions, in meters.
* effort angle: total body rotation, in [0, 2*pi], that the two people
  would need in order to face each other directly. 0 means they already
  face each other; 2*pi means they stand back to back.

Both features are commutative, so one sample per unordered pair suffices.
"""

from __future__ import annotations

import math
import warnings
from itertools import combinations

from .core import Frame, PairSample, AgentPose, validate_frame

__all__ = ["distance", "effort_angle", "pairwise_deconstruct"]


def _wrap_pi(theta: float) -> float:
    """Wrap an angle difference into [-pi, pi]."""
    out = math.fmod(theta, 2.0 * math.pi)
    if out > math.pi:
        out -= 2.0 * math.pi
    elif out < -math.pi:
        out += 2.0 * math.pi
    return out


def distance(a: AgentPose, b: AgentPose) -> float:
    """Euclidean distance between two agents' positions."""
    return math.hypot(a.x - b.x, a.y - b.y)


def _turn_toward(pose: AgentPose, other: AgentPose) -> float:
    """Absolute body rotation, in [0, pi], for ``pose`` to face ``other``."""
    bearing = math.atan2(other.y - pose.y, other.x - pose.x)
    return abs(_wrap_pi(pose.body_theta - bearing))


def effort_angle(a: AgentPose, b: AgentPose) -> float:
    """Total body rotation required for a and b to face each other.

    Sum of each agent's absolute wrapped heading-to-bearing difference,
    so the result lies in [0, 2*pi] and is exactly commutative. A pair at
    coincident positions has no defined bearing; it is scored 0 and a
    RuntimeWarning is emitted (distance 0 dominates downstream anyway).
    """
    if a.x == b.x and a.y == b.y:
        warnings.warn(
            f"agents {a.agent_id} and {b.agent_id} share a position; "
            f"effort angle defaulted to 0",
            RuntimeWarning,
            stacklevel=2,
        )
        return 0.0
    return _turn_toward(a, b) + _turn_toward(b, a)


def pairwise_deconstruct(frame: Frame) -> list[PairSample]:
    """Break a frame into one PairSample per unordered agent pair.

    Returns exactly n*(n-1)/2 samples (empty when n < 2). When the frame
    carries ground truth, each sample is labeled 1 iff both agents share
    a truth group; pairs with an ungrouped agent get label 0. Without
    truth the samples are unlabeled.
    """
    validate_frame(frame)
    membership = frame.truth.membership() if frame.truth is not None else None
    samples = []
    for a, b in combinations(frame.agents, 2):
        label = None
        if membership is not None:
            ga = membership.get(a.agent_id)
            gb = membership.get(b.agent_id)
            label = 1 if (ga is not None and ga == gb) else 0
        id_a, id_b = a.agent_id, b.agent_id
        if id_b < id_a:
            id_a, id_b = id_b, id_a
        samples.append(
            PairSample(
                id_a=id_a,
                id_b=id_b,
                distance=distance(a, b),
                effort_angle=effort_angle(a, b),
                label=label,
            )
        )
    return samples
