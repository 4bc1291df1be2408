"""
Characterizing groups: Symmetry and Tightness
=============================================

Group size alone hides a lot of structure. Symmetry measures how evenly
members are spread around the group's center (0 degrees = perfectly even);
Tightness is the mean member-to-center distance in metres.
"""

import math

from fformation import (
    AgentPose,
    SynthConfig,
    characterize_corpus,
    format_size_table,
    generate_synthetic,
    perfect_gap,
    symmetry,
    tightness,
)


def ring(n, radius, squeeze=1.0, offset=0.0):
    """n people around a circle; squeeze < 1 flattens it into an ellipse."""
    poses = []
    for i in range(n):
        ang = offset + 2 * math.pi * i / n
        x, y = radius * math.cos(ang), squeeze * radius * math.sin(ang)
        poses.append(AgentPose.make(i + 1, x, y, math.atan2(-y, -x)))
    return poses


# A perfect square of four people: every adjacent pair sits 90 degrees
# apart as seen from the center, so the symmetry error is zero.
square = ring(4, 1.0)
print(f"perfect gap for 4 people: {perfect_gap(4):.0f} deg")
print(f"square   symmetry={symmetry(square):7.3f} deg  tightness={tightness(square):.3f} m")

# Squash a diamond of four into an ellipse: the gaps seen from the center
# drift away from 90 degrees and the symmetry error grows, while tightness
# shrinks with the average radius. (The diamond orientation matters: with
# people on the squeeze axes the angles would not move at all.)
for squeeze in (0.8, 0.5, 0.25):
    e = ring(4, 1.0, squeeze, offset=math.pi / 4)
    print(
        f"ellipse {squeeze:.2f} symmetry={symmetry(e):7.3f} deg  tightness={tightness(e):.3f} m"
    )

# On a whole corpus the same metrics are averaged per group size. The
# synthetic generator plants groups whose spread grows with size, mirroring
# how real conversational circles widen as people join.
corpus = generate_synthetic(SynthConfig(n_frames=200, seed=42))
print()
print(format_size_table(characterize_corpus(corpus.frames)))
