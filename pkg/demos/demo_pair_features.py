"""
Pairwise features: Distance and Effort Angle
============================================

Every scene is reduced to person pairs before any learning happens. Each
pair gets two numbers: how far apart the two people stand, and how much
total body rotation they would need to face each other head-on (the Effort
Angle, 0 for mutual facing up to 2*pi for mutual back-to-back).
"""

import math

from fformation import AgentPose, distance, effort_angle

# Two people two metres apart, both already facing each other:
# no rotation effort at all.
a = AgentPose.make(1, 0.0, 0.0, 0.0)
b = AgentPose.make(2, 2.0, 0.0, math.pi)
print(f"facing pair:        d={distance(a, b):.3f} m  ea={effort_angle(a, b):.3f} rad")

# Turn both around so they stand back-to-back: the effort angle hits its
# maximum of 2*pi (each person must turn a half circle).
a2 = AgentPose.make(1, 0.0, 0.0, math.pi)
b2 = AgentPose.make(2, 2.0, 0.0, 0.0)
print(f"back-to-back pair:  d={distance(a2, b2):.3f} m  ea={effort_angle(a2, b2):.3f} rad")
print(f"2*pi for reference: {2 * math.pi:.3f}")

# A side-by-side pair looking the same way (think: watching a stage).
# Each needs a quarter-to-half turn toward the other, so the effort lands
# between the extremes.
a3 = AgentPose.make(1, 0.0, 0.0, math.pi / 2)
b3 = AgentPose.make(2, 2.0, 0.0, math.pi / 2)
print(f"side-by-side pair:  d={distance(a3, b3):.3f} m  ea={effort_angle(a3, b3):.3f} rad")

# The feature is symmetric by construction: swapping the two people never
# changes the answer, which is what lets one classifier serve both rows of
# the relation matrix.
assert effort_angle(a3, b3) == effort_angle(b3, a3)
print("effort angle is exactly symmetric in its arguments")
