"""
Flipping arcs into a triangulation
==================================

Given arcs drawn over a triangulation, repeatedly flip an arc that the
drawing crosses most often, choosing one whose flip lowers the count.
The number of flips never exceeds the number of crossings, and on the
heptagon we can compare with the exact distance.
"""

import numpy as np

from flipforge import fixtures
from flipforge.explorer import explore
from flipforge.paths import path_to_stratum

graph = explore(fixtures.get("heptagon"))
distances = graph.distance_matrix()
rng = np.random.default_rng(1)

print("distance  path  crossings")
for _ in range(12):
    a, b = rng.integers(len(graph), size=2)
    S, T = graph.nodes[a], graph.nodes[b]
    words = S.words_here(T.arcs_over_reference())
    path = path_to_stratum(S.triangulation, words)
    crossings = sum(len(w.exits) for w in words)
    print(f"{int(distances[a, b]):8d}  {len(path):4d}  {crossings:9d}")
