"""
Paths to canonical triangulations
=================================

A punctured disk is split by two arcs into halves, each half is solved
recursively and the layers are merged back a few flips at a time.  The
measured length is compared with the recursive budget.
"""

import numpy as np

from flipforge import fixtures
from flipforge.constructions import canonical_path
from flipforge.explorer import MarkedTriangulation, random_walk

rng = np.random.default_rng(2)
for m in (2, 3, 4, 5):
    start = MarkedTriangulation.at(fixtures.punctured_disk(m))
    M = random_walk(start, 30, rng)
    report = canonical_path(M.triangulation)
    print(f"{m} punctures: {report.measured} flips (budget {report.claimed}),"
          f" splits {report.split_lengths}, merges {report.merge_lengths}")

# genus pieces use the same scheme with a different pair of splitting arcs
for g in (1, 2, 3):
    M = random_walk(MarkedTriangulation.at(fixtures.genus_piece(g)), 30, rng)
    report = canonical_path(M.triangulation)
    print(f"genus {g}: {report.measured} flips (budget {report.claimed})")
