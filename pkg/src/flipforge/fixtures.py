"""Named triangulations used by the tests, the demos and the CLI.

Every surface that the acceptance suite touches has an entry here, so a
fixture can be asked for by name (``get("punctured_torus")``) or written
to disk with ``flipforge export``.
"""
from __future__ import annotations

from .surface import Triangulation, polygon_with_pairing, standard_triangulation

POLYGON_NAMES = {4: "square", 5: "pentagon", 6: "hexagon", 7: "heptagon", 8: "octagon"}


def polygon(n: int, labeled: bool = True) -> Triangulation:
    """Fan triangulation of a disk with n labeled boundary points."""
    return polygon_with_pairing([("side", i) for i in range(n)], labeled)


def punctured_disk(punctures: int, labeled: bool = True) -> Triangulation:
    """Disk with one boundary point and the given number of interior punctures."""
    return standard_triangulation(0, 1, punctures, 1, labeled)


def genus_piece(g: int, labeled: bool = True) -> Triangulation:
    """Genus g surface with one boundary curve carrying one marked point."""
    return standard_triangulation(g, 1, 0, 1, labeled)


def _library() -> dict:
    lib = {}
    for n in range(4, 14):
        lib[POLYGON_NAMES.get(n, f"polygon_{n}")] = (
            lambda n=n: polygon(n), f"disk with {n} boundary points")
    lib.update({
        "punctured_torus": (lambda: standard_triangulation(1, 0, 1),
                            "torus with one puncture, two triangles"),
        "cylinder": (lambda: standard_triangulation(0, 2, 0, 2),
                     "annulus with one marked point on each boundary curve"),
        "holed_torus": (lambda: genus_piece(1),
                        "torus with one boundary curve and one boundary point"),
        "holed_torus_two_points": (lambda: standard_triangulation(1, 1, 0, 2),
                                   "torus with one boundary curve and two boundary points"),
        "two_holed_torus": (lambda: standard_triangulation(1, 2, 0, 2),
                            "torus with two boundary curves, one point on each"),
        "genus_two_piece": (lambda: genus_piece(2), "genus two with one boundary point"),
        "genus_three_piece": (lambda: genus_piece(3), "genus three with one boundary point"),
        "punctured_monogon": (lambda: punctured_disk(1),
                              "one puncture inside a monogon, a single self-folded triangle"),
        "twice_punctured_disk": (lambda: punctured_disk(2), "two punctures, one boundary point"),
        "thrice_punctured_disk": (lambda: punctured_disk(3), "three punctures, one boundary point"),
        "four_punctured_disk": (lambda: punctured_disk(4), "four punctures, one boundary point"),
        "five_punctured_disk": (lambda: punctured_disk(5), "five punctures, one boundary point"),
        "four_punctured_sphere": (lambda: standard_triangulation(0, 0, 4),
                                  "sphere with four punctures"),
        "thrice_punctured_torus": (lambda: standard_triangulation(1, 0, 3),
                                   "torus with three punctures"),
        "genus_two_four_punctures": (lambda: standard_triangulation(2, 0, 4),
                                     "closed genus two surface with four punctures"),
    })
    return lib


LIBRARY = _library()


def names() -> list[str]:
    return list(LIBRARY)


def describe(name: str) -> str:
    return LIBRARY[name][1]


def get(name: str, labeled: bool = True) -> Triangulation:
    """Build the named fixture; ``labeled=False`` forgets the marked point labels."""
    if name not in LIBRARY:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(LIBRARY)}")
    T = LIBRARY[name][0]()
    if not labeled:
        T = Triangulation(T.glue, T.verts, T.arcs, T.sig.with_labeled(False))
    return T
