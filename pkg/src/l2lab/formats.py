"""JSON file formats for matrices, complexes and unit products, plus atomic writes."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .complexes import ChainMap, CochainComplex, require_valid
from .errors import InputError
from .groupring import element_from_json, element_to_json, matrix_from_json, matrix_to_json
from .groups import spec_from_json, spec_to_json
from .invariants import Elementary, Unit, UnitProduct


def read_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _group(obj):
    if not isinstance(obj, dict) or "group" not in obj:
        raise InputError("file must be a JSON object with a 'group' field")
    return spec_from_json(obj["group"])


def matrix_from_file_obj(obj):
    spec = _group(obj)
    return matrix_from_json(spec, obj)


def matrix_to_file_obj(A) -> dict:
    return {"group": spec_to_json(A.spec), **matrix_to_json(A)}


def load_matrix(path):
    return matrix_from_file_obj(read_json(path))


def complex_from_file_obj(obj, validate: bool = True) -> CochainComplex:
    spec = _group(obj)
    try:
        ranks = [int(r) for r in obj["ranks"]]
        diffs = [matrix_from_json(spec, d) for d in obj.get("differentials", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed complex: {exc}") from None
    C = CochainComplex(spec, tuple(ranks), tuple(diffs))
    return require_valid(C) if validate else C


def complex_to_file_obj(C: CochainComplex) -> dict:
    return {
        "group": spec_to_json(C.spec),
        "ranks": list(C.ranks),
        "differentials": [matrix_to_json(d) for d in C.differentials],
    }


def load_complex(path, validate: bool = True) -> CochainComplex:
    return complex_from_file_obj(read_json(path), validate)


def chain_map_from_file_obj(obj) -> ChainMap:
    """{"source": complex, "target": complex, "maps": [matrix, ...]}"""
    try:
        src = complex_from_file_obj(obj["source"])
        tgt = complex_from_file_obj(obj["target"])
        maps = [matrix_from_json(src.spec, m) for m in obj["maps"]]
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed chain map: {exc}") from None
    return ChainMap(src, tgt, tuple(maps))


def unit_product_from_file_obj(obj) -> UnitProduct:
    spec = _group(obj)
    factors = []
    try:
        size = int(obj["size"])
        for f in obj["factors"]:
            kind = f.get("type")
            if kind == "elementary":
                factors.append(Elementary(int(f["i"]), int(f["j"]), element_from_json(spec, f["coeff"])))
            elif kind == "unit":
                factors.append(Unit(int(f["i"]), tuple(f["g"]), int(f.get("sign", 1))))
            else:
                raise InputError(f"factor type must be 'elementary' or 'unit', got {kind!r}")
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise InputError(f"malformed unit product: {exc}") from None
    return UnitProduct(spec, size, tuple(factors))


def unit_product_to_file_obj(U: UnitProduct) -> dict:
    out = []
    for f in U.factors:
        if isinstance(f, Elementary):
            out.append({"type": "elementary", "i": f.i, "j": f.j, "coeff": element_to_json(f.coeff)})
        else:
            out.append({"type": "unit", "i": f.i, "g": list(f.g), "sign": f.sign})
    return {"group": spec_to_json(U.spec), "size": U.size, "factors": out}


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_atomic(path, text: str):
    """Write via a temp file in the same directory and rename, so failures leave nothing behind."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
