"""Command-line front end: classify, generate, verify, matchings.

Exit codes are the process-level contract: 0 for success, 1 for a
verification failure, 2 for invalid parameters or unparseable input.
Reports go to stdout or to the file named by ``--out``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional

import numpy as np

from .trig import AngleSolution, NonexistenceEvidence, solve_closure, vertex_label
from .complexes import TilingComplex, TilingError, verify_combinatorial
from .combinatorics import (
    ClassificationReport,
    FamilyOutcome,
    SubsumedNote,
    classify,
)
from .generators import earth_map, football, fusion_classification, prism, snub_fusion
from . import realization as rz
from .serialization import (
    SchemaError,
    _angles_payload,
    export_obj,
    export_svg,
    parse_tiling,
    serialize_tiling,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

GENERATE_FAMILIES = ("prism", "earthmap", "snub1", "snub2", "snub3", "football")


def _usage_error(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(out, "w") as fh:
            fh.write(text)


# -- classify ------------------------------------------------------------------


def report_payload(report: ClassificationReport, c_max: int = 8) -> dict:
    """JSON-ready dict for a classification report.

    The earth-map family is infinite, so its solution list is expanded up
    to block count ``c_max``; everything else carries the solutions the
    classification produced.
    """
    entries = []
    for entry in report.entries:
        item: dict = {
            "seed": list(entry.seed),
            "seed_label": vertex_label(entry.seed),
        }
        out = entry.outcome
        if isinstance(out, FamilyOutcome):
            solutions = list(out.solutions)
            if out.name == "earth-map":
                solutions = [rz.earth_map_solution(c) for c in range(2, c_max + 1)]
            item["kind"] = "family"
            item["family"] = {
                "name": out.name,
                "generator": out.generator,
                "parameterized": out.parameterized,
                "variants": out.variants,
                "avc": {
                    "members": [list(v) for v in out.avc.members],
                    "realized": sorted(list(v) for v in out.avc.realized),
                    "warnings": list(out.avc.warnings),
                },
                "solutions": [_angles_payload(s) for s in solutions],
                "notes": list(out.notes),
            }
        elif isinstance(out, NonexistenceEvidence):
            item["kind"] = "nonexistence"
            item["evidence"] = json.loads(out.to_json())
        else:
            assert isinstance(out, SubsumedNote)
            item["kind"] = "subsumed"
            item["subsumed_by"] = list(out.subsumed_by)
            item["reason"] = out.reason
        if entry.notes:
            item["notes"] = list(entry.notes)
        entries.append(item)
    return {"m": report.m, "entries": entries}


def cmd_classify(
    m: int, c_max: int = 8, out: Optional[str] = None, tol: float = 1e-6
) -> int:
    if not (5 <= m <= 64):
        return _usage_error(f"--m must be between 5 and 64, got {m}")
    if c_max < 2:
        return _usage_error(f"--c-max must be at least 2, got {c_max}")
    report = classify(m, tol=tol)
    _emit(json.dumps(report_payload(report, c_max=c_max), indent=1), out)
    return EXIT_OK


# -- generate ------------------------------------------------------------------


def cmd_generate(
    family: str,
    m: Optional[int] = None,
    c: Optional[int] = None,
    r: Optional[float] = None,
    realize: bool = False,
    obj: Optional[str] = None,
    svg: Optional[str] = None,
    out: Optional[str] = None,
) -> int:
    if family not in GENERATE_FAMILIES:
        return _usage_error(
            f"unknown family {family!r}; choose from {', '.join(GENERATE_FAMILIES)}"
        )
    if m is not None and family != "prism":
        return _usage_error("--m only applies to the prism family")
    if c is not None and family != "earthmap":
        return _usage_error("--c only applies to the earthmap family")
    if r is not None and family != "prism":
        return _usage_error("--r only applies to the prism family")
    realize = realize or obj is not None or svg is not None

    embedding = None
    solution = None
    if family == "prism":
        if m is None:
            return _usage_error("prism needs --m")
        if m < 3:
            return _usage_error(f"prism needs --m of at least 3, got {m}")
        t = prism(m)
        if realize:
            lo, hi = rz.prism_geometric_bounds(m)
            radius = rz.prism_default_radius(m) if r is None else r
            if not (lo < radius < hi):
                return _usage_error(
                    f"--r must lie in ({lo:.6f}, {hi:.6f}) for m={m}, got {radius}"
                )
            solution = rz.prism_solution(m, radius)
            t, embedding = rz.embed_prism(m, radius)
    elif family == "earthmap":
        if c is None:
            return _usage_error("earthmap needs --c")
        if c < 2:
            return _usage_error(f"earthmap needs --c of at least 2, got {c}")
        t = earth_map(c)
        print(
            f"note: earth map with c={c} has {t.face_count} faces (10*c-3); "
            "the count 8*c-2 sometimes quoted for this family fails the "
            "incidence check",
            file=sys.stderr,
        )
        if realize:
            solution = rz.earth_map_solution(c)
            t, embedding = rz.embed_earth_map(c)
    elif family == "football":
        t = football()
        if realize:
            solution = rz.sporadic_solution("football")
            embedding = rz.embed_generic(t, solution)
    else:
        variant = int(family[-1])
        t = snub_fusion(variant)
        if realize:
            solution = rz.sporadic_solution("snub-fusion")
            embedding = rz.embed_generic(t, solution)

    _emit(serialize_tiling(t, embedding=embedding, angles=solution), out)
    if obj is not None:
        with open(obj, "w") as fh:
            fh.write(export_obj(t, embedding))
    if svg is not None:
        with open(svg, "w") as fh:
            fh.write(export_svg(t, embedding))
    return EXIT_OK


# -- verify --------------------------------------------------------------------


def _measured_solution(t: TilingComplex, embedding) -> AngleSolution:
    """Angle solution read off the coordinates themselves.

    One corner per label and one edge fix the candidate values; the
    verifier then checks every other corner and edge against them, which
    is exactly internal consistency of the document.
    """
    pos = embedding.positions
    values = {}
    for face in t.faces:
        for i, lab in enumerate(face.labels):
            if lab in values:
                continue
            k = face.size
            p_prev = pos[face.vertices[(i - 1) % k]]
            p_cur = pos[face.vertices[i]]
            p_next = pos[face.vertices[(i + 1) % k]]
            values[lab] = rz._corner_angle(p_prev, p_cur, p_next)
    u, v = t.undirected_edges()[0]
    cos_x = max(-1.0, min(1.0, float(np.dot(pos[u], pos[v]))))
    return AngleSolution(
        m=t.gonality,
        alpha=values.get("alpha", 0.0),
        beta=values.get("beta", 0.0),
        gamma=values.get("gamma", 0.0),
        cos_x=cos_x,
    )


def _census_solution(t: TilingComplex) -> tuple[Optional[AngleSolution], str]:
    """Infer the angle solution from the vertex-type census.

    Two independent census rows pin the angles via the closure equation.
    A rank-one census only happens for the prism census {alpha.beta.gamma}
    (a one-parameter family), where any representative radius verifies.
    """
    rows = sorted(t.census().keys())
    m = t.gonality
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            try:
                roots = solve_closure(m, [rows[i], rows[j]])
            except ValueError:
                continue
            for root in roots:
                if verify_combinatorial(t, root, tol=1e-6).ok:
                    return root, f"solved from census rows {rows[i]} and {rows[j]}"
            if roots:
                return roots[0], f"solved from census rows {rows[i]} and {rows[j]}"
    if rows == [(1, 1, 1)]:
        return (
            rz.prism_solution(m, rz.prism_default_radius(m)),
            "census is the one-parameter prism type; using a representative radius",
        )
    return None, "census does not determine the angles and no angles field is present"


def cmd_verify(path: str, tol: Optional[float] = None) -> int:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        return _usage_error(f"cannot read {path}: {exc}")
    try:
        doc = parse_tiling(text)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        t = doc.build()
    except TilingError as exc:
        print(f"FAIL [{type(exc).__name__}] {exc}")
        return EXIT_FAIL

    embedding = doc.embedding_for(t) if doc.coordinates is not None else None
    if doc.angles is not None:
        solution, origin = doc.angles, "from the document's angles field"
    elif embedding is not None:
        solution, origin = _measured_solution(t, embedding), "measured from coordinates"
    else:
        solution, origin = _census_solution(t)
        if solution is None:
            print(f"FAIL {origin}")
            return EXIT_FAIL
    print(f"angles {origin}: {solution.describe()}")

    comb_tol = tol if tol is not None else 1e-9
    report = verify_combinatorial(t, solution, tol=comb_tol)
    print(
        f"combinatorial: {'ok' if report.ok else 'FAIL'} "
        f"(V={report.vertex_count}, E={report.edge_count}, F={report.face_count}, "
        f"worst vertex defect {report.worst_vertex_defect:.3e})"
    )
    for msg in report.failures:
        print(f"  FAIL {msg}")
    failed = not report.ok

    if embedding is not None:
        geo_tol = tol if tol is not None else 1e-6
        geo = rz.verify_geometric(t, embedding, solution, tol=geo_tol)
        print(
            f"geometric: {'ok' if geo.ok else 'FAIL'} "
            f"(edge spread {geo.edge_spread:.3e}, worst corner "
            f"{geo.worst_corner_defect:.3e}, area defect {geo.area_defect:.3e})"
        )
        for msg in geo.failures:
            print(f"  FAIL {msg}")
        failed = failed or not geo.ok

    return EXIT_FAIL if failed else EXIT_OK


# -- matchings -----------------------------------------------------------------


def cmd_matchings(out: Optional[str] = None) -> int:
    data = fusion_classification()
    matchings = data["matchings"]
    payload = {
        "matching_count": len(matchings),
        "matchings": [[list(edge) for edge in matching] for matching in matchings],
        "classes": [
            {
                "variant": variant,
                "size": len(cl["members"]),
                "members": list(cl["members"]),
                "representative_matching": cl["members"][0],
                "pentagon_bullet_counts": list(cl["bullet_counts"]),
                "trio_chain_length": cl["chain_length"],
            }
            for variant, cl in enumerate(data["classes"], start=1)
        ],
        "variant_of_matching": [
            data["variant_of_matching"][i] for i in range(len(matchings))
        ],
    }
    _emit(json.dumps(payload, indent=1), out)
    return EXIT_OK


# -- argument parsing ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spheretile",
        description=(
            "Classify, generate, realize and verify the edge-to-edge "
            "sphere tilings by one regular m-gon and one rhombus."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_classify = sub.add_parser(
        "classify", help="resolve every degree-3 vertex seed at gonality m"
    )
    p_classify.add_argument("--m", type=int, required=True, help="gonality, 5..64")
    p_classify.add_argument(
        "--c-max",
        type=int,
        default=8,
        help="largest earth-map block count listed in the report (default 8)",
    )
    p_classify.add_argument("--out", help="write the report JSON here")
    p_classify.add_argument(
        "--tol", type=float, default=1e-6, help="vertex-type enumeration tolerance"
    )

    p_generate = sub.add_parser("generate", help="emit a tiling as JSON/OBJ/SVG")
    p_generate.add_argument("family", choices=GENERATE_FAMILIES)
    p_generate.add_argument("--m", type=int, help="prism gonality (>= 3)")
    p_generate.add_argument("--c", type=int, help="earth-map block count (>= 2)")
    p_generate.add_argument("--r", type=float, help="prism polar radius")
    p_generate.add_argument(
        "--realize", action="store_true", help="embed on the sphere and include coordinates"
    )
    p_generate.add_argument("--obj", help="also write a chordal OBJ mesh here")
    p_generate.add_argument("--svg", help="also write a stereographic SVG here")
    p_generate.add_argument("--out", help="write the tiling JSON here")

    p_verify = sub.add_parser("verify", help="check a tiling JSON document")
    p_verify.add_argument("--in", dest="path", required=True, help="tiling JSON file")
    p_verify.add_argument(
        "--tol", type=float, help="override the verification tolerances"
    )

    p_matchings = sub.add_parser(
        "matchings", help="dodecahedron perfect matchings and fusion classes"
    )
    p_matchings.add_argument("--out", help="write the matchings JSON here")

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK

    if args.command == "classify":
        return cmd_classify(args.m, c_max=args.c_max, out=args.out, tol=args.tol)
    if args.command == "generate":
        return cmd_generate(
            args.family,
            m=args.m,
            c=args.c,
            r=args.r,
            realize=args.realize,
            obj=args.obj,
            svg=args.svg,
            out=args.out,
        )
    if args.command == "verify":
        return cmd_verify(args.path, tol=args.tol)
    assert args.command == "matchings"
    return cmd_matchings(out=args.out)


if __name__ == "__main__":
    sys.exit(main())
