"""JSON (de)serialization for structures, towers and families.

Rational entries travel as strings like "3/2" or "-1"; matrices as lists of
rows.  Set-level structures use the element/shift-map format; towers accept
either explicit rational column bases per level or ambient coordinate index
sets (the common case for towers of set origin).
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import FormatError
from .linalg import Matrix
from .scs import TruncatedSCS
from .spread import SpreadableFamily
from .tower import HilbertTower


def _frac_to_str(x: Fraction) -> str:
    return str(x)


def _str_to_frac(s) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational literal {s!r}: {exc}") from None


def matrix_to_json(mat: Matrix) -> list:
    return [[_frac_to_str(x) for x in row] for row in mat.rows]


def matrix_from_json(data, ncols=None) -> Matrix:
    if not isinstance(data, list):
        raise FormatError("matrix must be a list of rows")
    return Matrix([[_str_to_frac(x) for x in row] for row in data], ncols=ncols)


# -- set-level structures ------------------------------------------------------------


def scs_to_dict(scs: TruncatedSCS) -> dict:
    elements = []
    for x in scs.elements():
        entry = {"id": x, "level": scs.levels[x]}
        if x in scs.names:
            entry["name"] = scs.names[x]
        elements.append(entry)
    return {
        "max_level": scs.max_level,
        "elements": elements,
        "shifts": [
            {"i": i, "map": [[x, mapping[x]] for x in sorted(mapping)]}
            for i, mapping in enumerate(scs.shifts)
        ],
    }


def scs_from_dict(data: dict) -> TruncatedSCS:
    try:
        N = int(data["max_level"])
        levels = {}
        names = {}
        for entry in data["elements"]:
            x = int(entry["id"])
            levels[x] = int(entry["level"])
            if "name" in entry:
                names[x] = str(entry["name"])
        shifts = [dict() for _ in range(max(0, N))]
        for block in data.get("shifts", []):
            i = int(block["i"])
            if not (0 <= i < max(0, N)):
                raise FormatError(f"shift index {i} out of range for max_level {N}")
            shifts[i] = {int(a): int(b) for a, b in block["map"]}
        return TruncatedSCS(N, levels, tuple(shifts), names)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad structure payload: {exc}") from None


# -- towers ---------------------------------------------------------------------------


def tower_to_dict(tower: HilbertTower) -> dict:
    levels = []
    for k in range(-1, tower.max_level + 1):
        B = tower.basis(k)
        indices = _as_index_set(B)
        if indices is not None:
            levels.append({"level": k, "basis_indices": indices})
        else:
            levels.append({"level": k, "basis": matrix_to_json(B)})
    out = {
        "max_level": tower.max_level,
        "ambient_dim": tower.ambient_dim,
        "levels": levels,
        "shifts": [
            {"i": i, "matrix": matrix_to_json(tower.shifts[i])}
            for i in range(len(tower.shifts))
        ],
    }
    if tower.coordinate_names:
        out["coordinate_names"] = list(tower.coordinate_names)
    return out


def _as_index_set(B: Matrix):
    indices = []
    for j in range(B.ncols):
        col = B.column(j)
        nz = [i for i, x in enumerate(col) if x != 0]
        if len(nz) != 1 or col[nz[0]] != 1:
            return None
        indices.append(nz[0])
    return indices


def tower_from_dict(data: dict) -> HilbertTower:
    try:
        N = int(data["max_level"])
        dim = int(data["ambient_dim"])
        by_level = {}
        for entry in data["levels"]:
            k = int(entry["level"])
            if "basis_indices" in entry:
                cols = [
                    tuple(Fraction(1) if r == idx else Fraction(0) for r in range(dim))
                    for idx in entry["basis_indices"]
                ]
                by_level[k] = Matrix.from_columns(cols, nrows=dim)
            else:
                rows = [[_str_to_frac(x) for x in row] for row in entry["basis"]]
                by_level[k] = Matrix(rows, ncols=len(rows[0]) if rows else 0)
        level_bases = []
        for k in range(-1, N + 1):
            if k not in by_level:
                raise FormatError(f"missing level {k}")
            level_bases.append(by_level[k])
        shifts = [Matrix.identity(dim) for _ in range(max(0, N))]
        for block in data.get("shifts", []):
            shifts[int(block["i"])] = matrix_from_json(block["matrix"], ncols=dim)
        names = data.get("coordinate_names")
        return HilbertTower(N, dim, level_bases, shifts, names)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise FormatError(f"bad tower payload: {exc}") from None


# -- spreadable families ------------------------------------------------------------------


def family_to_dict(family: SpreadableFamily) -> dict:
    out = {
        "k_dim": family.k_dim,
        "ambient_dim": family.ambient_dim,
        "isometries": [matrix_to_json(m) for m in family.isometries],
    }
    if family.gram != Matrix.identity(family.k_dim):
        out["gram"] = matrix_to_json(family.gram)
    if family.ambient_shifts:
        out["ambient_shifts"] = [matrix_to_json(m) for m in family.ambient_shifts]
    return out


def family_from_dict(data: dict) -> SpreadableFamily:
    try:
        k = int(data["k_dim"])
        dim = int(data["ambient_dim"])
        isometries = [matrix_from_json(m, ncols=k) for m in data["isometries"]]
        gram = matrix_from_json(data["gram"], ncols=k) if "gram" in data else None
        shifts = (
            [matrix_from_json(m, ncols=dim) for m in data["ambient_shifts"]]
            if "ambient_shifts" in data
            else None
        )
        return SpreadableFamily(k, dim, isometries, gram, shifts)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad family payload: {exc}") from None


# -- file helpers ------------------------------------------------------------------------------


def load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
