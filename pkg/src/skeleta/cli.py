"""Command-line driver.

Exit codes: 0 success, 1 internal error, 2 invalid input (parse,
reflexivity, simpliciality), 3 verification mismatch under ``--strict``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Sequence

from . import _kernels
from .formats import ParseError, PolytopeDocument, ResultDocument, load_polytope
from .homology import build_complex, homology_q, homology_z
from .oracles import verify
from .polytope import (
    PolytopeError,
    enumerate_faces,
    is_facet_simplicial,
    is_reflexive,
    is_vertex_simplicial,
    _require_reflexive_simplicial,
)
from .skeleton import chart, strata

EXIT_OK, EXIT_INTERNAL, EXIT_INVALID, EXIT_MISMATCH = 0, 1, 2, 3


class VerificationMismatch(Exception):
    pass


def run_homology(doc: PolytopeDocument, ring: str = "q", check: bool = False) -> ResultDocument:
    """check -> faces -> groups -> complex -> E2 -> optional verification."""
    timing = {}
    t0 = time.perf_counter()
    p = doc.polytope()
    reflexive = p.origin_interior() and is_reflexive(p)
    facet_simplicial = is_facet_simplicial(p)
    vertex_simplicial = is_vertex_simplicial(p)
    _require_reflexive_simplicial(p)
    timing["check"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    lattice = enumerate_faces(p)
    timing["faces"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    groups = dict(strata(p))
    timing["groups"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    c = build_complex(p, groups)
    timing["complex"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    rep_q = homology_q(c)
    rep_z = homology_z(c) if ring == "z" or check else None
    timing["e2"] = time.perf_counter() - t0

    verification = None
    if check:
        t0 = time.perf_counter()
        verification = verify(p, doc.name or "", c, rep_q, rep_z).to_dict()
        timing["verify"] = time.perf_counter() - t0

    rep = rep_z if ring == "z" else rep_q
    face_rows = [
        {
            "face": list(f.vertex_indices),
            "dim": f.dim,
            "torus_rank": g.torus_rank,
            "invariant_factors": list(g.invariant_factors),
            "component_order": g.component_order,
        }
        for f, g in groups.items()
    ]
    return ResultDocument(
        name=doc.name,
        ambient_rank=p.ambient_rank,
        vertices=[list(v) for v in p.vertices],
        interpretation=doc.interpretation,
        reflexive=reflexive,
        facet_simplicial=facet_simplicial,
        vertex_simplicial=vertex_simplicial,
        f_vector=list(lattice.f_vector),
        face_groups=face_rows,
        ring=ring,
        c_dims=dict(c.dims),
        e2_dims=dict(rep.e2_dims),
        betti=list(rep.betti),
        torsion={k: list(v) for k, v in rep.torsion.items()},
        euler=rep.euler,
        conjectural_degeneration=rep.conjectural_degeneration,
        verification=verification,
        timing=timing,
    )


# --------------------------------------------------------------------------
# batch


def _batch_one(args: tuple[str, bool]) -> dict:
    path, primal = args
    row = {"name": Path(path).stem, "source": path}
    try:
        doc = load_polytope(path)
        if primal:
            doc.interpretation = "primal"
        row["name"] = doc.name
        res = run_homology(doc, check=True)
    except (ParseError, PolytopeError) as exc:
        row.update(status="invalid", error=str(exc))
        return row
    except Exception as exc:  # isolate per-item failures
        row.update(status="error", error=f"{type(exc).__name__}: {exc}")
        return row
    row.update(
        status=res.verification["status"],
        f_vector=res.f_vector,
        betti=res.betti,
        euler=res.euler,
    )
    return row


def expand_inputs(paths: Sequence[str]) -> list[str]:
    out = []
    for p in paths:
        path = Path(p)
        if path.is_dir():
            out.extend(str(x) for x in sorted(path.iterdir()) if x.suffix in (".json", ".txt"))
        else:
            out.append(str(path))
    return out


def run_batch(inputs: Sequence[str], jobs: int = 1, primal: bool = False) -> list[dict]:
    """One summary row per input, in input order regardless of scheduling."""
    work = [(p, primal) for p in inputs]
    if jobs <= 1 or len(work) <= 1:
        return [_batch_one(w) for w in work]
    _kernels.warm_up()
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_batch_one, work))


TSV_COLUMNS = ("name", "f_vector", "betti", "euler", "status")


def format_tsv(rows: Sequence[dict]) -> str:
    lines = ["\t".join(TSV_COLUMNS)]
    for r in rows:
        cells = []
        for col in TSV_COLUMNS:
            v = r.get(col, "")
            cells.append(" ".join(map(str, v)) if isinstance(v, list) else str(v))
        if r.get("error"):
            cells[-1] += f" ({r['error']})"
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"


def format_jsonl(rows: Sequence[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in rows)


# --------------------------------------------------------------------------
# tables


def format_result_table(res: ResultDocument) -> str:
    yes = {True: "yes", False: "no"}
    out = [
        f"name: {res.name or '-'}",
        f"ambient rank: {res.ambient_rank}  vertices: {len(res.vertices)}  input: {res.interpretation}",
        f"reflexive: {yes[res.reflexive]}  facet-simplicial: {yes[res.facet_simplicial]}"
        f"  vertex-simplicial: {yes[res.vertex_simplicial]}",
        f"f-vector: {' '.join(map(str, res.f_vector))}",
    ]
    n = res.ambient_rank - 1
    label = "Q, conjectural degeneration" if res.conjectural_degeneration else "Z, E2 only"
    out.append(f"E2 page ({label}); rows deg, columns r:")
    out.append("deg\\r " + " ".join(f"{r:>6}" for r in range(n + 1)))
    for deg in range(n + 1):
        cells = []
        for r in range(n + 1):
            v = res.e2_dims.get((deg, r))
            cells.append(f"{'.' if v is None else v:>6}")
        out.append(f"{deg:>5} " + " ".join(cells))
    out.append(f"betti: {' '.join(map(str, res.betti))}")
    if res.torsion:
        tors = ", ".join(f"({d},{r}): {' '.join(map(str, v))}" for (d, r), v in sorted(res.torsion.items()))
        out.append(f"torsion: {tors}")
    out.append(f"euler: {res.euler}")
    if res.verification is not None:
        out.append(f"verify: {res.verification['status']}")
        for c in res.verification["checks"]:
            tag = "expect" if c["expectation"] else "check"
            mark = "ok" if c["passed"] else "MISMATCH"
            out.append(f"  [{tag}] {c['name']}: expected {c['expected']} computed {c['computed']} {mark}")
    return "\n".join(out) + "\n"


def format_strata_table(doc: PolytopeDocument) -> str:
    p = doc.polytope()
    rows = strata(p)
    out = [f"strata of {doc.name or '-'}: {len(rows)} faces", "face\tdim\ttorus_rank\tinvariant_factors\tcomponents"]
    for f, g in rows:
        inv = " ".join(map(str, g.invariant_factors))
        out.append(f"{' '.join(map(str, f.vertex_indices))}\t{f.dim}\t{g.torus_rank}\t{inv}\t{g.component_order}")
    out.append("vertex charts:")
    for f, _ in rows:
        if f.dim != 0:
            continue
        faces = chart(p, f)
        out.append(f"{f.vertex_indices[0]}\t" + " | ".join(" ".join(map(str, g.vertex_indices)) for g in faces))
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# entry point


def _load(args) -> PolytopeDocument:
    doc = load_polytope(args.file)
    if getattr(args, "primal", False):
        doc.interpretation = "primal"
    return doc


def cmd_check(args) -> int:
    doc = _load(args)
    p = doc.polytope()
    reflexive = p.origin_interior() and is_reflexive(p)
    fs = is_facet_simplicial(p)
    print(f"name: {doc.name or '-'}")
    print(f"ambient rank: {p.ambient_rank}  vertices: {len(p.vertices)}  facets: {len(p.facets)}")
    print(f"reflexive: {'yes' if reflexive else 'no'}")
    print(f"facet-simplicial: {'yes' if fs else 'no'}")
    print(f"vertex-simplicial: {'yes' if is_vertex_simplicial(p) else 'no'}")
    return EXIT_OK if reflexive and fs else EXIT_INVALID


def cmd_homology(args) -> int:
    doc = _load(args)
    res = run_homology(doc, ring=args.ring, check=args.verify)
    if args.json:
        sys.stdout.write(res.to_json() + "\n")
    else:
        sys.stdout.write(format_result_table(res))
    if args.strict and res.verification is not None and res.verification["status"] != "pass":
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_strata(args) -> int:
    sys.stdout.write(format_strata_table(_load(args)))
    return EXIT_OK


def cmd_batch(args) -> int:
    rows = run_batch(expand_inputs(args.paths), jobs=args.jobs, primal=args.primal)
    sys.stdout.write(format_jsonl(rows) if args.jsonl else format_tsv(rows))
    if args.strict:
        statuses = {r["status"] for r in rows}
        if "error" in statuses:
            return EXIT_INTERNAL
        if "invalid" in statuses:
            return EXIT_INVALID
        if "fail" in statuses:
            return EXIT_MISMATCH
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skeleta", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_file(sp):
        sp.add_argument("file", help="polytope file (.json, otherwise text)")
        sp.add_argument("--primal", action="store_true", help="input is the primal polytope; dualize first")

    sp = sub.add_parser("check", help="reflexivity and simpliciality flags")
    add_file(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("homology", help="E2 page and Betti numbers")
    add_file(sp)
    sp.add_argument("--ring", choices=("q", "z"), default="q")
    sp.add_argument("--verify", action="store_true", help="attach a verification report")
    sp.add_argument("--strict", action="store_true", help="exit 3 when verification fails")
    fmt = sp.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--table", action="store_true", help="human-readable table (default)")
    sp.set_defaults(func=cmd_homology)

    sp = sub.add_parser("strata", help="per-face groups and vertex charts")
    add_file(sp)
    sp.set_defaults(func=cmd_strata)

    sp = sub.add_parser("batch", help="summary rows for many polytopes")
    sp.add_argument("paths", nargs="+", help="files or directories of .json/.txt files")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--primal", action="store_true")
    sp.add_argument("--strict", action="store_true", help="nonzero exit if any item fails")
    fmt = sp.add_mutually_exclusive_group()
    fmt.add_argument("--tsv", action="store_true", help="tab-separated output (default)")
    fmt.add_argument("--jsonl", action="store_true", help="one JSON object per line")
    sp.set_defaults(func=cmd_batch)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, PolytopeError) as exc:
        print(f"skeleta: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"skeleta: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:
        print(f"skeleta: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
