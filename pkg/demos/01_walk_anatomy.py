"""
Anatomy of a single tourist walk
================================

A walk starts at one pixel and keeps moving to the neighbour whose gray
level is closest (rule ``min``) or farthest (rule ``max``) from the current
one, never stepping onto the last ``mu`` pixels it visited. Sooner or later
it falls into a cycle. The steps before the cycle are the transient, the
cycle length is the attractor period.
"""

import numpy as np

from touristwalk import GrayImage, Rule, WalkConfig, neighbors, run_walk
from touristwalk.walk import format_trajectory

# %%
# A 4x4 image where a memory-2 walk from the top row has transient 5 and
# period 4.
grid = np.array([[7, 9, 0, 7],
                 [2, 5, 9, 2],
                 [7, 1, 3, 9],
                 [4, 5, 2, 1]])
img = GrayImage(grid)

# %%
# Candidates are the pixel itself, then its ring clockwise from north.
print(neighbors((0, 2), img))

# %%
traj = run_walk(img, (0, 2), WalkConfig(mu=2, rule=Rule.MIN), keep_path=True)
print(format_trajectory(img, traj))
print("transient:", traj.path[:traj.tau])
print("attractor:", traj.path[traj.tau:traj.tau + traj.rho])

# %%
# Memory changes everything. With mu=0 the pixel itself is admissible and
# has weight 0, so rule min never moves. rho=0 means no cycle was found
# before the step cap (W*H steps) or the walk ran out of admissible moves.
for mu in range(5):
    t = run_walk(img, (0, 2), WalkConfig(mu, Rule.MIN))
    print(f"mu={mu}: tau={t.tau} rho={t.rho}")
