"""JSON interchange for triangulations, arcs, multiarcs and flip paths.

Every document carries ``"format": "flipforge/1"`` and a ``"kind"``.
Triangle sides are numbered counterclockwise; side j runs from corner j to
corner j + 1.  Boundary sides are the sides missing from ``"gluings"``.
An arc crossing is written ``[arc id, flag]`` where the flag says which of
the two sides of that arc the word leaves through (0 for the side in the
lower numbered slot).
"""
from __future__ import annotations

import json

from .arcs import ArcWord, MultiArc
from .errors import FlipForgeError, SchemaError
from .paths import FlipPath
from .surface import SurfaceSig, Triangulation, build_triangulation

FORMAT = "flipforge/1"


def _need(obj, key, kind, pointer):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"missing field {key!r}", pointer)
    value = obj[key]
    if kind is int and (not isinstance(value, int) or isinstance(value, bool)):
        raise SchemaError(f"field {key!r} must be an integer", f"{pointer}/{key}")
    if kind is not int and not isinstance(value, kind):
        raise SchemaError(f"field {key!r} has the wrong type", f"{pointer}/{key}")
    return value


# -- triangulations ------------------------------------------------------------

def triangulation_to_dict(T: Triangulation) -> dict:
    sig = T.sig
    gluings = [[[d // 3, d % 3], [e // 3, e % 3]] for d, e in enumerate(T.glue) if e > d]
    return {
        "format": FORMAT,
        "kind": "triangulation",
        "signature": {"g": sig.g, "b": sig.b, "s": sig.s, "p": sig.p, "labeled": sig.labeled},
        "triangles": T.n_triangles,
        "gluings": gluings,
        "corner_vertices": [list(T.verts[3 * t:3 * t + 3]) for t in range(T.n_triangles)],
        "arc_ids": [T.arcs[d] for d, e in enumerate(T.glue) if e > d],
    }


def triangulation_from_dict(obj, pointer: str = "") -> Triangulation:
    sig_obj = _need(obj, "signature", dict, pointer)
    sp = f"{pointer}/signature"
    sig = SurfaceSig(_need(sig_obj, "g", int, sp), _need(sig_obj, "b", int, sp),
                     _need(sig_obj, "s", int, sp), _need(sig_obj, "p", int, sp),
                     bool(sig_obj.get("labeled", True)))
    n = _need(obj, "triangles", int, pointer)
    gluings = _need(obj, "gluings", list, pointer)
    used = {}
    pairs = []
    for k, pair in enumerate(gluings):
        where = f"{pointer}/gluings/{k}"
        ok = (isinstance(pair, list) and len(pair) == 2
              and all(isinstance(x, list) and len(x) == 2 and all(isinstance(y, int) for y in x) for x in pair))
        if not ok:
            raise SchemaError("gluing must be [[t, s], [t', s']]", where)
        for t, s in pair:
            if not (0 <= t < n and 0 <= s < 3):
                raise SchemaError(f"side {[t, s]} out of range in pair {pair}", where)
            if (t, s) in used:
                raise SchemaError(f"side {[t, s]} of pair {pair} already glued in pair {used[(t, s)]}", where)
            used[(t, s)] = k
        if pair[0] == pair[1]:
            raise SchemaError(f"pair {pair} glues a side to itself", where)
        pairs.append((tuple(pair[0]), tuple(pair[1])))
    corners = _need(obj, "corner_vertices", list, pointer)
    if len(corners) != n or not all(isinstance(c, list) and len(c) == 3 for c in corners):
        raise SchemaError("need three corner vertices per triangle", f"{pointer}/corner_vertices")
    arc_ids = None
    if "arc_ids" in obj:
        ids = _need(obj, "arc_ids", list, pointer)
        if len(ids) != len(pairs):
            raise SchemaError("one arc id per gluing", f"{pointer}/arc_ids")
        per_dart = [-1] * (3 * n)
        for ((t, s), (u, r)), a in zip(pairs, ids):
            per_dart[3 * t + s] = per_dart[3 * u + r] = a
        arc_ids = per_dart
    try:
        return build_triangulation(n, pairs, corners, sig, arc_ids)
    except FlipForgeError as exc:
        raise SchemaError(str(exc), pointer) from exc


# -- arcs ----------------------------------------------------------------------

def _corner(T: Triangulation, c: int) -> list:
    return [T.verts[c], [c // 3, c % 3]]


def word_to_dict(w: ArcWord) -> dict:
    T = w.base
    crossings = []
    for x in w.exits:
        a = T.arcs[x]
        crossings.append([a, 0 if T.arc_darts[a][0] == x else 1])
    return {"start": _corner(T, w.start), "crossings": crossings, "end": _corner(T, w.end)}


def _read_corner(T: Triangulation, obj, pointer) -> int:
    try:
        v, (t, c) = obj
    except (TypeError, ValueError) as exc:
        raise SchemaError("corner must be [vertex, [triangle, corner]]", pointer) from exc
    if not (0 <= t < T.n_triangles and 0 <= c < 3):
        raise SchemaError("corner out of range", pointer)
    d = 3 * t + c
    if T.verts[d] != v:
        raise SchemaError(f"corner holds marked point {T.verts[d]}, not {v}", pointer)
    return d


def word_from_dict(T: Triangulation, obj, pointer: str = "") -> ArcWord:
    start = _read_corner(T, _need(obj, "start", list, pointer), f"{pointer}/start")
    end = _read_corner(T, _need(obj, "end", list, pointer), f"{pointer}/end")
    exits = []
    for k, item in enumerate(_need(obj, "crossings", list, pointer)):
        where = f"{pointer}/crossings/{k}"
        if not (isinstance(item, list) and len(item) == 2):
            raise SchemaError("crossing must be [arc, flag]", where)
        a, flag = item
        if not (isinstance(a, int) and 0 <= a < T.kappa and flag in (0, 1)):
            raise SchemaError("crossing out of range", where)
        exits.append(T.arc_darts[a][flag])
    try:
        return ArcWord.make(T, start, exits, end)
    except FlipForgeError as exc:
        raise SchemaError(str(exc), pointer) from exc


# -- documents -----------------------------------------------------------------

def to_document(obj) -> dict:
    if isinstance(obj, Triangulation):
        return triangulation_to_dict(obj)
    if isinstance(obj, ArcWord):
        return {"format": FORMAT, "kind": "arc", "base": triangulation_to_dict(obj.base),
                "word": word_to_dict(obj)}
    if isinstance(obj, MultiArc):
        return {"format": FORMAT, "kind": "multiarc", "base": triangulation_to_dict(obj.base),
                "components": [word_to_dict(w) for w in obj.components],
                "orientations": [bool(x) for x in obj.orientations]}
    if isinstance(obj, FlipPath):
        return {"format": FORMAT, "kind": "path", "start": triangulation_to_dict(obj.start),
                "steps": list(obj.steps)}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def from_document(doc):
    if not isinstance(doc, dict):
        raise SchemaError("document must be an object")
    if doc.get("format") != FORMAT:
        raise SchemaError(f"expected format {FORMAT!r}", "/format")
    kind = doc.get("kind", "triangulation")
    if kind == "triangulation":
        return triangulation_from_dict(doc)
    if kind == "arc":
        T = triangulation_from_dict(_need(doc, "base", dict, ""), "/base")
        return word_from_dict(T, _need(doc, "word", dict, ""), "/word")
    if kind == "multiarc":
        T = triangulation_from_dict(_need(doc, "base", dict, ""), "/base")
        comps = [word_from_dict(T, c, f"/components/{k}")
                 for k, c in enumerate(_need(doc, "components", list, ""))]
        orient = doc.get("orientations")
        return MultiArc(tuple(comps), None if orient is None else tuple(bool(x) for x in orient))
    if kind == "path":
        T = triangulation_from_dict(_need(doc, "start", dict, ""), "/start")
        steps = _need(doc, "steps", list, "")
        for k, a in enumerate(steps):
            if not isinstance(a, int) or not 0 <= a < T.kappa:
                raise SchemaError("step is not an arc id", f"/steps/{k}")
        path = FlipPath(T, tuple(steps))
        try:
            path.triangulations
        except FlipForgeError as exc:
            raise SchemaError(str(exc), "/steps") from exc
        return path
    raise SchemaError(f"unknown kind {kind!r}", "/kind")


def dumps(obj) -> str:
    """Normalized JSON text; loading and dumping it again gives the same bytes."""
    doc = obj if isinstance(obj, dict) else to_document(obj)
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not JSON: {exc}") from exc
    return from_document(doc)


def save(obj, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(obj))


def load(path):
    with open(path) as fh:
        return loads(fh.read())
