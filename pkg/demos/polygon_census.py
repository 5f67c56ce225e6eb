"""
Diameters of polygon flip graphs
================================

Triangulations of a convex polygon with labeled corners, joined by flips,
form the associahedron.  We count them, measure the exact diameter and
compare with the closed form 2n - 10 that holds once n > 12.
"""

import time

from flipforge.census import build_quotient, catalan, diameter_bounds
from flipforge.surface import SurfaceSig

# the census enumerates every class from a fan triangulation
for n in range(4, 12):
    start = time.perf_counter()
    report = build_quotient(SurfaceSig(0, 1, 0, n))
    seconds = time.perf_counter() - start
    print(f"n={n:2d}  vertices={report.vertices:6d} (Catalan {catalan(n - 2):6d})"
          f"  diameter={report.diameter:2d}  {seconds:.2f}s")

# for 13 corners the diameter formula applies
print("closed form at n=13:", diameter_bounds(SurfaceSig(0, 1, 0, 13)).upper)

# the eccentricity histogram of the hexagon: six centres, eight peripheral vertices
print("hexagon eccentricities:", build_quotient(SurfaceSig(0, 1, 0, 6)).eccentricities)
