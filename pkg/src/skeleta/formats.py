"""Polytope input documents and result documents.

Input formats:

* JSON: ``{"vertices": [[...], ...], "name": optional, "interpretation":
  optional "dual" | "primal"}``
* text: a header line ``<d> <p>`` followed by ``p`` lines of ``d``
  whitespace-separated integers, one vertex per line.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

from .polytope import LatticePolytope, polar_dual

INTERPRETATIONS = ("dual", "primal")


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, field_name: str | None = None):
        self.line = line
        self.field = field_name
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field_name is not None:
            where.append(f"field {field_name}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


@dataclass
class PolytopeDocument:
    vertices: list[list[int]]
    name: str | None = None
    interpretation: str = "dual"

    @property
    def ambient_rank(self) -> int:
        return len(self.vertices[0])

    def polytope(self) -> LatticePolytope:
        """The polytope the skeleton is built from (dualized for ``primal``)."""
        p = LatticePolytope(tuple(tuple(v) for v in self.vertices))
        return polar_dual(p) if self.interpretation == "primal" else p

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"vertices": [list(v) for v in self.vertices]}
        if self.name is not None:
            d["name"] = self.name
        if self.interpretation != "dual":
            d["interpretation"] = self.interpretation
        return d


def _check_vertices(rows: list[list[int]], first_line: int | None = None) -> None:
    seen: dict[tuple[int, ...], int] = {}
    for i, row in enumerate(rows):
        line = None if first_line is None else first_line + i
        fld = None if first_line is not None else f"vertices[{i}]"
        key = tuple(row)
        if key in seen:
            raise ParseError(f"duplicate vertex {list(key)} (also vertex {seen[key]})", line, fld)
        seen[key] = i


def _parse_json(text: str) -> PolytopeDocument:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from None
    if not isinstance(obj, dict):
        raise ParseError("top level must be an object")
    if "vertices" not in obj:
        raise ParseError("missing required key", field_name="vertices")
    verts = obj["vertices"]
    if not isinstance(verts, list) or not verts:
        raise ParseError("must be a nonempty array", field_name="vertices")
    width = None
    rows = []
    for i, row in enumerate(verts):
        fld = f"vertices[{i}]"
        if not isinstance(row, list) or not row:
            raise ParseError("must be a nonempty array of integers", field_name=fld)
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, int):
                raise ParseError(f"non-integer entry {x!r}", field_name=f"{fld}[{j}]")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"ragged row: length {len(row)}, expected {width}", field_name=fld)
        rows.append(list(row))
    _check_vertices(rows)
    name = obj.get("name")
    if name is not None and not isinstance(name, str):
        raise ParseError("must be a string", field_name="name")
    interp = obj.get("interpretation", "dual")
    if interp not in INTERPRETATIONS:
        raise ParseError(f"must be one of {INTERPRETATIONS}", field_name="interpretation")
    if "ambient_rank" in obj and obj["ambient_rank"] != width:
        raise ParseError(f"does not match vertex length {width}", field_name="ambient_rank")
    return PolytopeDocument(rows, name, interp)


def _ints(tokens: list[str], line: int) -> list[int]:
    out = []
    for t in tokens:
        try:
            out.append(int(t))
        except ValueError:
            raise ParseError(f"non-integer token {t!r}", line) from None
    return out


def _parse_text(text: str) -> PolytopeDocument:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ParseError("empty input", 1)
    header = _ints(lines[0].split(), 1)
    if len(header) != 2 or header[0] < 1 or header[1] < 1:
        raise ParseError("header must be '<d> <p>' with positive integers", 1)
    d, p = header
    body = lines[1:]
    if len(body) != p:
        raise ParseError(f"expected {p} vertex lines, found {len(body)}", 1 + len(body))
    rows = []
    for i, ln in enumerate(body):
        row = _ints(ln.split(), i + 2)
        if len(row) != d:
            raise ParseError(f"ragged row: {len(row)} entries, expected {d}", i + 2)
        rows.append(row)
    _check_vertices(rows, first_line=2)
    return PolytopeDocument(rows)


def parse_polytope(data: bytes | str, format: str) -> PolytopeDocument:
    """Parse a polytope document; ``format`` is ``"json"`` or ``"text"``."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8: {exc}") from None
    if format == "json":
        return _parse_json(data)
    if format == "text":
        return _parse_text(data)
    raise ValueError(f"unknown format {format!r}")


def serialize_polytope(doc: PolytopeDocument, format: str) -> str:
    if format == "json":
        return json.dumps(doc.to_dict()) + "\n"
    if format == "text":
        lines = [f"{doc.ambient_rank} {len(doc.vertices)}"]
        lines += [" ".join(str(x) for x in v) for v in doc.vertices]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {format!r}")


def format_for(path: str | os.PathLike) -> str:
    return "json" if str(path).endswith(".json") else "text"


def load_polytope(path: str | os.PathLike) -> PolytopeDocument:
    path = Path(path)
    doc = parse_polytope(path.read_bytes(), format_for(path))
    if doc.name is None:
        doc.name = path.stem
    return doc


# --------------------------------------------------------------------------
# Results


def _key(k: tuple[int, int]) -> str:
    return f"{k[0]},{k[1]}"


def _unkey(s: str) -> tuple[int, int]:
    a, b = s.split(",")
    return int(a), int(b)


@dataclass
class ResultDocument:
    name: str | None
    ambient_rank: int
    vertices: list[list[int]]
    interpretation: str
    reflexive: bool
    facet_simplicial: bool
    vertex_simplicial: bool
    f_vector: list[int]
    face_groups: list[dict[str, Any]]
    ring: str
    c_dims: dict[tuple[int, int], int]
    e2_dims: dict[tuple[int, int], int]
    betti: list[int]
    torsion: dict[tuple[int, int], list[int]]
    euler: int
    conjectural_degeneration: bool
    verification: dict[str, Any] | None = None
    timing: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        for k in ("c_dims", "e2_dims", "torsion"):
            d[k] = {_key(x): v for x, v in sorted(getattr(self, k).items())}
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> ResultDocument:
        d = dict(d)
        for k in ("c_dims", "e2_dims", "torsion"):
            d[k] = {_unkey(x): v for x, v in d[k].items()}
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> ResultDocument:
        return cls.from_dict(json.loads(text))


CORPORA = ("polygons", "polytopes3d")


def corpus_dir(kind: str) -> Path:
    """Directory of a bundled corpus (``polygons`` or ``polytopes3d``)."""
    if kind not in CORPORA:
        raise ValueError(f"unknown corpus {kind!r}; expected one of {CORPORA}")
    return Path(__file__).parent / "data" / kind


def load_corpus(kind: str) -> list[PolytopeDocument]:
    return [load_polytope(p) for p in sorted(corpus_dir(kind).glob("*.json"))]
