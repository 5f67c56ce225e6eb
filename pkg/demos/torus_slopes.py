"""
Flips on the once-punctured torus
=================================

Every triangulation of the once-punctured torus looks the same, so the
flip graph is a regular tree of degree three.  Intersection numbers with
the starting triangulation grow quickly along a walk, while the distance
only grows by one per flip.
"""

import numpy as np

from flipforge import fixtures
from flipforge.arcs import ArcWord
from flipforge.explorer import MarkedTriangulation, ball, distance, marked_intersection, stratum_subgraph
from flipforge.paths import pairwise_lower_bound

T = fixtures.get("punctured_torus")

# layer sizes of balls: 1, 3, 6, 12, ...
print("layers:", ball(T, 5).layer_sizes)

# walk without backtracking and watch i(S, T) against d(S, T)
rng = np.random.default_rng(0)
start = MarkedTriangulation.at(T)
M, last = start, None
for step in range(1, 9):
    options = [a for a in M.triangulation.flippable_arcs() if a != last]
    last = options[int(rng.integers(len(options)))]
    M = M.flip(last)
    i = marked_intersection(start, M)
    print(f"step {step}: distance {distance(start, M)}  intersection {i}"
          f"  lower bound {pairwise_lower_bound(i, T.kappa)}")

# triangulations that keep one arc form a line
line = stratum_subgraph([ArcWord.of_arc(T, 0)], radius=5)
print("stratum window:", len(line), "vertices, degrees", sorted(line.degrees()))
