"""Command line entry point: ``flipforge <subcommand> ...``.

Objects are read from JSON files written in the ``flipforge/1`` format, or
from the fixture library with ``fixture:NAME``.  Results go to standard
output as JSON unless ``--format`` asks for CSV or DOT.  Exit status is 0 on
success, 2 when a search budget is exceeded and 1 on invalid input.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import json
import os
import sys

from . import fixtures, io
from .arcs import ArcWord, MultiArc, as_words, intersection_with_triangulation
from .census import build_quotient, code_bytes, canonical_code
from .constructions import (canonical_genus, canonical_path, canonical_seashell,
                            genus_split_arcs, puncture_split_arcs, separation_signatures,
                            spanning_tree_loop)
from .errors import FlipForgeError, SchemaError, SearchBudgetExceeded
from .explorer import MarkedTriangulation, ball, default_budget, distance, explore
from .paths import FlipPath, path_to_stratum
from .projection import project_multiarc
from .surface import SurfaceSig, Triangulation
from .verify import SUITES, run_suites

FORMAT = io.FORMAT


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(obj, out) -> None:
    if isinstance(obj, str):
        out.write(obj if obj.endswith("\n") else obj + "\n")
    else:
        out.write(json.dumps(obj, indent=1, sort_keys=True) + "\n")


def _load(source: str):
    if source.startswith("fixture:"):
        name = source.split(":", 1)[1]
        labeled = not name.endswith("/unlabeled")
        return fixtures.get(name.removesuffix("/unlabeled"), labeled)
    return io.load(source)


def _triangulation_of(obj) -> Triangulation:
    if isinstance(obj, Triangulation):
        return obj
    if isinstance(obj, (ArcWord, MultiArc)):
        return obj.base
    if isinstance(obj, FlipPath):
        return obj.start
    raise SchemaError("expected a triangulation")


def _parse_sig(text: str, labeled: bool) -> SurfaceSig:
    fields = {}
    for part in text.split(","):
        key, _, value = part.partition("=")
        if key.strip() not in "gbsp" or not value.strip().lstrip("-").isdigit():
            raise UsageError(f"bad signature field {part!r}; expected g=..,b=..,s=..,p=..")
        fields[key.strip()] = int(value)
    missing = [k for k in "gbsp" if k not in fields]
    if missing:
        raise UsageError(f"signature misses {', '.join(missing)}")
    return SurfaceSig(fields["g"], fields["b"], fields["s"], fields["p"], labeled)


def _budget(args) -> int:
    return args.budget if args.budget is not None else default_budget()


# -- subcommands ---------------------------------------------------------------

def cmd_info(args):
    obj = _load(args.source)
    T = _triangulation_of(obj)
    sig = T.sig
    out = {
        "format": FORMAT,
        "kind": io.to_document(obj)["kind"],
        "signature": {"g": sig.g, "b": sig.b, "s": sig.s, "p": sig.p, "labeled": sig.labeled},
        "arcs": T.kappa,
        "triangles": T.n_triangles,
        "flippable": T.flippable_arcs(),
        "code": code_bytes(canonical_code(T)).hex(),
    }
    if isinstance(obj, (ArcWord, MultiArc)):
        counts, total = intersection_with_triangulation(T, as_words(obj))
        out["intersection"] = {"per_arc": counts, "total": total}
    if isinstance(obj, FlipPath):
        out["length"] = len(obj)
    return out


def cmd_flip(args):
    T = _triangulation_of(_load(args.source))
    path = FlipPath(T, tuple(args.arcs))
    path.triangulations
    return io.to_document(path if args.as_path else path.end)


def cmd_distance(args):
    first = _load(args.source)
    if isinstance(first, FlipPath):
        if args.other:
            raise UsageError("give either a path document or two triangulations")
        S = MarkedTriangulation.at(first.start)
        T = S.follow(first.steps)
    else:
        if not args.other:
            raise UsageError("distance needs a second triangulation or a path document")
        S, T = _triangulation_of(first), _triangulation_of(_load(args.other))
    d = distance(S, T, _budget(args))
    return {"format": FORMAT, "distance": d}


def cmd_ball(args):
    T = _triangulation_of(_load(args.source))
    if args.format == "dot":
        return explore(T, radius=args.radius, budget=_budget(args)).to_dot()
    rep = ball(T, args.radius, _budget(args))
    if args.format == "csv":
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["radius", "layer_size", "cumulative"])
        for m, (size, total) in enumerate(zip(rep.layer_sizes, rep.cumulative)):
            w.writerow([m, size, total])
        return buf.getvalue()
    return rep.as_dict()


def cmd_path_to_stratum(args):
    obj = _load(args.source)
    if not isinstance(obj, (ArcWord, MultiArc)):
        raise SchemaError("path-to-stratum needs an arc or multiarc document", "/kind")
    words = as_words(obj)
    T = obj.base
    _, total = intersection_with_triangulation(T, words)
    path = path_to_stratum(T, words)
    doc = io.to_document(path)
    doc["intersection"] = total
    doc["length"] = len(path)
    return doc


def cmd_project(args):
    obj = _load(args.source)
    if not isinstance(obj, (ArcWord, MultiArc)):
        raise SchemaError("project needs an arc or multiarc document", "/kind")
    A = obj if isinstance(obj, MultiArc) else MultiArc((obj,))
    proj = project_multiarc(A.base, A)
    doc = io.to_document(FlipPath(A.base, proj.steps))
    doc["image"] = io.triangulation_to_dict(proj.triangulation)
    doc["arcs_in_image"] = [w.edge_arc() for w in proj.arcs]
    return doc


def cmd_census(args):
    labeled = args.mode == "labeled"
    sig = _parse_sig(args.sig, labeled)
    rep = build_quotient(sig, args.mode, max_vertices=args.max_vertices)
    if args.format == "csv":
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["vertex", "degree", "code"])
        degrees = rep.adjacency.getnnz(axis=1)
        for i, code in enumerate(rep.codes):
            w.writerow([i, int(degrees[i]), code_bytes(code).hex()])
        return buf.getvalue()
    if args.format == "dot":
        coo = rep.adjacency.tocoo()
        lines = ["graph census {"]
        lines += [f"  v{i} -- v{j};" for i, j in zip(coo.row, coo.col) if i < j]
        lines.append("}")
        return "\n".join(lines) + "\n"
    return rep.as_dict()


def cmd_construct(args):
    kind = args.kind
    if kind == "seashell":
        return io.to_document(canonical_seashell(args.n))
    if kind == "canonical-genus":
        return io.to_document(canonical_genus(args.g))
    if args.source is None:
        raise UsageError(f"construct {kind} needs --source")
    T = _triangulation_of(_load(args.source))
    if kind == "loop":
        a, cert = spanning_tree_loop(T, args.point)
        doc = io.to_document(a)
        doc["certificate"] = {**cert.as_dict(), "pieces": [list(s) for s in separation_signatures(T, a)]}
        return doc
    if kind in ("genus-split", "puncture-split"):
        split = genus_split_arcs if kind == "genus-split" else puncture_split_arcs
        b, b2, cert = split(T)
        doc = io.to_document(MultiArc((b, b2)))
        doc["certificate"] = cert.as_dict()
        return doc
    if kind == "canonical-path":
        rep = canonical_path(T)
        doc = io.to_document(rep.path)
        doc["certificate"] = {"claimed": rep.claimed, "measured": rep.measured, "ok": rep.ok,
                              "split_lengths": rep.split_lengths, "merge_lengths": rep.merge_lengths}
        return doc
    raise UsageError(f"unknown construction {kind!r}")


def cmd_verify(args):
    suites = SUITES if args.suites == "all" else tuple(s.strip() for s in args.suites.split(","))
    unknown = [s for s in suites if s not in SUITES]
    if unknown:
        raise UsageError(f"unknown suites {unknown}; known: {', '.join(SUITES)}")
    report = run_suites(suites, seed=args.seed, budget=_budget(args))
    if args.format == "csv":
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["suite", "check", "passed", "detail"])
        for suite, checks in report["suites"].items():
            for c in checks:
                w.writerow([suite, c["name"], c["passed"], c["detail"]])
        return buf.getvalue(), report["passed"]
    return report, report["passed"]


def cmd_export(args):
    if args.all:
        os.makedirs(args.dir, exist_ok=True)
        written = []
        for name in fixtures.names():
            path = os.path.join(args.dir, f"{name}.json")
            io.save(fixtures.get(name), path)
            written.append(path)
        return {"format": FORMAT, "written": written}
    if args.source is None:
        raise UsageError("export needs a source or --all")
    obj = _load(args.source)
    if args.format == "dot":
        T = _triangulation_of(obj)
        lines = ["graph triangulation {"]
        for a, (d, e) in enumerate(T.arc_darts):
            u, v = T.arc_endpoints(a)
            lines.append(f"  p{u} -- p{v} [label=\"{a}\"];")
        for d, e in enumerate(T.glue):
            if e == -1:
                lines.append(f"  p{T.verts[d]} -- p{T.verts[3 * (d // 3) + (d % 3 + 1) % 3]} [style=bold];")
        lines.append("}")
        return "\n".join(lines) + "\n"
    text = io.dumps(obj)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        return {"format": FORMAT, "written": [args.out]}
    return text


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="flipforge", description="Flip graphs of triangulated surfaces.")
    p.add_argument("--budget", type=int, default=None,
                   help="state cap for searches (default: FLIPFORGE_BUDGET or 5000000)")
    p.add_argument("--threads", type=int, default=1,
                   help="worker count; results do not depend on it")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("info", help="summary of a triangulation, arc or path")
    s.add_argument("source")
    s.set_defaults(run=cmd_info)

    s = sub.add_parser("flip", help="flip arcs in order")
    s.add_argument("source")
    s.add_argument("arcs", type=int, nargs="+")
    s.add_argument("--as-path", action="store_true", help="emit the path instead of its end")
    s.set_defaults(run=cmd_flip)

    s = sub.add_parser("distance", help="exact flip distance")
    s.add_argument("source", help="a path document, or the first of two polygon triangulations")
    s.add_argument("other", nargs="?")
    s.set_defaults(run=cmd_distance)

    s = sub.add_parser("ball", help="layer sizes of a ball in the flip graph")
    s.add_argument("source")
    s.add_argument("--radius", type=int, required=True)
    s.add_argument("--format", choices=("json", "csv", "dot"), default="json")
    s.set_defaults(run=cmd_ball)

    s = sub.add_parser("path-to-stratum", help="convenient flips until the arcs appear")
    s.add_argument("source", help="an arc or multiarc document")
    s.set_defaults(run=cmd_path_to_stratum)

    s = sub.add_parser("project", help="projection onto the stratum of a multiarc")
    s.add_argument("source", help="an arc or multiarc document")
    s.set_defaults(run=cmd_project)

    s = sub.add_parser("census", help="modular flip graph census")
    s.add_argument("--sig", required=True, help="g=..,b=..,s=..,p=..")
    s.add_argument("--mode", choices=("labeled", "unlabeled"), default="labeled")
    s.add_argument("--max-vertices", type=int, default=10 ** 6)
    s.add_argument("--format", choices=("json", "csv", "dot"), default="json")
    s.set_defaults(run=cmd_census)

    s = sub.add_parser("construct", help="separating loops, splitting arcs, canonical forms")
    s.add_argument("kind", choices=("loop", "genus-split", "puncture-split", "seashell",
                                    "canonical-genus", "canonical-path"))
    s.add_argument("--source")
    s.add_argument("--point", type=int, default=0)
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--g", type=int, default=2)
    s.set_defaults(run=cmd_construct)

    s = sub.add_parser("verify", help="run bound checks")
    s.add_argument("--suites", default="all", help=f"comma list from {','.join(SUITES)}")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.set_defaults(run=cmd_verify)

    s = sub.add_parser("export", help="write fixtures or objects as JSON or DOT")
    s.add_argument("source", nargs="?")
    s.add_argument("--all", action="store_true", help="write every fixture into --dir")
    s.add_argument("--dir", default="fixtures")
    s.add_argument("--out")
    s.add_argument("--format", choices=("json", "dot"), default="json")
    s.set_defaults(run=cmd_export)
    return p


def _diagnostic(kind: str, exc: Exception) -> dict:
    doc = {"format": FORMAT, "error": kind, "message": str(exc)}
    if isinstance(exc, SchemaError) and exc.pointer:
        doc["pointer"] = exc.pointer
    return doc


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        if args.budget is not None and args.budget <= 0:
            raise UsageError("budget must be positive")
        result = args.run(args)
        passed = True
        if isinstance(result, tuple):
            result, passed = result
        _emit(result, out)
        return 0 if passed else 1
    except SearchBudgetExceeded as exc:
        _emit(_diagnostic(type(exc).__name__, exc), err)
        return 2
    except (UsageError, FlipForgeError, KeyError, TypeError, ValueError, OSError) as exc:
        _emit(_diagnostic(type(exc).__name__, exc), err)
        return 1


if __name__ == "__main__":
    sys.exit(main())
