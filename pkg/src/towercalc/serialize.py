"""Flat-file documents for complexes, towers, and cospans.

All matrix entries are decimal strings so no reader ever has to guess an
integer width.  Counts and degrees are ordinary JSON numbers.  Loading
validates everything the constructors validate; a malformed document raises
ParseError, a well-formed document describing a broken object (d squared
nonzero, a non-commuting square) raises ValidationError, both with a
location naming the offending spot.
"""
from __future__ import annotations

import json
import re

from .complexes import ChainComplex, ChainMap
from .errors import IllFormedMap, ParseError, StabilizationViolated, ValidationError
from .exactalg import IntegerMatrix, Presentation
from .sections import CospanSection, TowerSection

_INT = re.compile(r"^-?[0-9]+$")


def _need(doc: dict, key: str, where: str):
    if not isinstance(doc, dict):
        raise ParseError(where, "expected an object")
    if key not in doc:
        raise ParseError(where, f"missing key '{key}'")
    return doc[key]


def _count(value, where: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise ParseError(where, "expected a non-negative count")
    return value


def _entry(value, where: str) -> int:
    if not isinstance(value, str) or not _INT.match(value):
        raise ParseError(where, f"matrix entries are decimal strings, got {value!r}")
    return int(value)


def matrix_from_doc(doc, rows: int, cols: int, where: str) -> IntegerMatrix:
    if not isinstance(doc, list):
        raise ParseError(where, "expected an array of rows")
    if len(doc) != rows:
        raise ParseError(where, f"expected {rows} rows, got {len(doc)}")
    flat = []
    for i, row in enumerate(doc):
        if not isinstance(row, list) or len(row) != cols:
            raise ParseError(f"{where}[{i}]", f"expected a row of {cols} entries")
        flat.extend(_entry(e, f"{where}[{i}][{j}]") for j, e in enumerate(row))
    return IntegerMatrix(rows, cols, tuple(flat))


def matrix_to_doc(m: IntegerMatrix) -> list:
    return [[str(e) for e in row] for row in m.to_rows()]


# ---------------------------------------------------------------------------
# complexes


def complex_from_doc(doc: dict, where: str = "complex") -> ChainComplex:
    min_deg = _need(doc, "min_degree", where)
    if not isinstance(min_deg, int) or isinstance(min_deg, bool):
        raise ParseError(f"{where}.min_degree", "expected an integer")
    degrees_doc = _need(doc, "degrees", where)
    if not isinstance(degrees_doc, list):
        raise ParseError(f"{where}.degrees", "expected an array")
    presentations = []
    for i, deg in enumerate(degrees_doc):
        spot = f"{where}.degrees[{i}]"
        gens = _count(_need(deg, "generators", spot), f"{spot}.generators")
        rel_doc = _need(deg, "relations", spot)
        if not isinstance(rel_doc, list):
            raise ParseError(f"{spot}.relations", "expected an array of rows")
        rel = matrix_from_doc(rel_doc, len(rel_doc), gens, f"{spot}.relations")
        presentations.append(Presentation(gens, rel))
    diffs_doc = _need(doc, "differentials", where)
    if not isinstance(diffs_doc, list) or len(diffs_doc) != max(0, len(presentations) - 1):
        raise ParseError(f"{where}.differentials",
                         "expected one matrix per adjacent degree pair")
    diffs = []
    for j, mdoc in enumerate(diffs_doc):
        diffs.append(matrix_from_doc(mdoc, presentations[j].generators,
                                     presentations[j + 1].generators,
                                     f"{where}.differentials[{j}]"))
    return ChainComplex(min_deg, tuple(presentations), tuple(diffs))


def complex_to_doc(x: ChainComplex, name: str, metadata: dict | None = None) -> dict:
    doc = {
        "name": name,
        "min_degree": x.min_deg,
        "degrees": [{"generators": p.generators, "relations": matrix_to_doc(p.relations)}
                    for p in x.degrees],
        "differentials": [matrix_to_doc(d) for d in x.differentials],
    }
    if metadata:
        doc["metadata"] = metadata
    return doc


# ---------------------------------------------------------------------------
# chain maps (arrays of matrices over the source window)


def chain_map_from_doc(doc, source: ChainComplex, target: ChainComplex,
                       where: str) -> ChainMap:
    if not isinstance(doc, list) or len(doc) != len(source.degrees):
        raise ParseError(where, "expected one matrix per source degree")
    comps = []
    for j, mdoc in enumerate(doc):
        i = source.min_deg + j
        comps.append(matrix_from_doc(mdoc, target.pres_at(i).generators,
                                     source.pres_at(i).generators, f"{where}[{j}]"))
    try:
        return ChainMap(source, target, tuple(comps))
    except IllFormedMap as err:
        raise ValidationError(where, str(err)) from err


def chain_map_to_doc(f: ChainMap) -> list:
    return [matrix_to_doc(m) for m in f.components]


# ---------------------------------------------------------------------------
# towers and cospans


def _minimal_stabilization(levels, maps) -> int:
    s = len(maps)
    while s > 0 and levels[s] == levels[s - 1] and maps[s - 1] == ChainMap.identity(levels[s - 1]):
        s -= 1
    return s


def tower_from_doc(doc: dict, where: str = "tower") -> TowerSection:
    levels_doc = _need(doc, "levels", where)
    if not isinstance(levels_doc, list) or not levels_doc:
        raise ParseError(f"{where}.levels", "expected a non-empty array of complexes")
    levels = [complex_from_doc(d, f"{where}.levels[{i}]") for i, d in enumerate(levels_doc)]
    maps_doc = _need(doc, "maps", where)
    if not isinstance(maps_doc, list) or len(maps_doc) != len(levels) - 1:
        raise ParseError(f"{where}.maps", "expected one map per adjacent level pair")
    maps = [chain_map_from_doc(d, levels[i + 1], levels[i], f"{where}.maps[{i}]")
            for i, d in enumerate(maps_doc)]
    try:
        return TowerSection(tuple(levels), tuple(maps),
                            _minimal_stabilization(levels, maps))
    except (IllFormedMap, StabilizationViolated) as err:
        raise ValidationError(where, str(err)) from err


def tower_to_doc(t: TowerSection) -> dict:
    return {
        "levels": [complex_to_doc(c, f"level_{i}") for i, c in enumerate(t.complexes)],
        "maps": [chain_map_to_doc(m) for m in t.structure_maps],
    }


def cospan_from_doc(doc: dict, where: str = "cospan") -> CospanSection:
    vertices = {}
    for key in ("x1", "x0", "x2"):
        vertices[key] = complex_from_doc(_need(doc, key, where), f"{where}.{key}")
    left = chain_map_from_doc(_need(doc, "left", where),
                              vertices["x1"], vertices["x0"], f"{where}.left")
    right = chain_map_from_doc(_need(doc, "right", where),
                               vertices["x2"], vertices["x0"], f"{where}.right")
    tags = _need(doc, "tags", where)
    if (not isinstance(tags, list) or len(tags) != 3
            or not all(isinstance(t, str) for t in tags)):
        raise ParseError(f"{where}.tags", "expected three tag strings")
    try:
        return CospanSection(vertices["x1"], vertices["x0"], vertices["x2"],
                             left, right, tags=tuple(tags))
    except IllFormedMap as err:
        raise ValidationError(where, str(err)) from err


def cospan_to_doc(s: CospanSection) -> dict:
    return {
        "x1": complex_to_doc(s.x1, "x1"),
        "x0": complex_to_doc(s.x0, "x0"),
        "x2": complex_to_doc(s.x2, "x2"),
        "left": chain_map_to_doc(s.left),
        "right": chain_map_to_doc(s.right),
        "tags": list(s.tags),
    }


# ---------------------------------------------------------------------------
# files


def object_from_doc(doc, where: str):
    if not isinstance(doc, dict):
        raise ParseError(where, "expected a JSON object")
    if "levels" in doc:
        return tower_from_doc(doc, where)
    if "x0" in doc:
        return cospan_from_doc(doc, where)
    if "degrees" in doc:
        return complex_from_doc(doc, where)
    raise ParseError(where, "unrecognized document shape "
                            "(need 'degrees', 'levels', or 'x0')")


def object_to_doc(obj, name: str) -> dict:
    if isinstance(obj, ChainComplex):
        return complex_to_doc(obj, name)
    if isinstance(obj, TowerSection):
        return tower_to_doc(obj)
    if isinstance(obj, CospanSection):
        return cospan_to_doc(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def document_text(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def load(path: str):
    where = str(path)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as err:
        raise ParseError(where, str(err)) from err
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as err:
        raise ParseError(where, f"not valid JSON: {err}") from err
    return object_from_doc(doc, where)


def save(obj, path: str, name: str | None = None) -> None:
    doc = object_to_doc(obj, name or "complex")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(document_text(doc))
