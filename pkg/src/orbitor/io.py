"""JSON schemas for complexes, characteristic pairs, building sequences and
weight vectors, plus a canonical serializer."""

from __future__ import annotations

import json
from pathlib import Path

from .charpair import CharacteristicPair, validate_characteristic
from .complexes import ComplexError, FaceComplex, build_face_lattice, load_face_poset, natural_key
from .qcw import BuildingSequence
from .wgrass import WeightError, WeightVector


class SchemaError(ValueError):
    pass


def _canon(obj):
    if isinstance(obj, dict):
        return {str(k): _canon(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [_canon(v) for v in obj]
        if all(isinstance(v, str) for v in items):
            return sorted(items, key=natural_key)
        return items
    return obj


def canonical_dumps(obj, indent=None) -> str:
    """Sorted keys, naturally sorted string lists. Lists of records keep
    their order; callers put them in canonical order first."""
    return json.dumps(_canon(obj), sort_keys=True, indent=indent, ensure_ascii=False)


def read_json_arg(value: str):
    """Parse ``value`` as inline JSON, ``-`` for stdin, or a file path."""
    import sys

    text = None
    stripped = value.lstrip()
    if value == "-":
        text = sys.stdin.read()
    elif stripped.startswith(("{", "[")):
        text = value
    else:
        try:
            text = Path(value).read_text()
        except OSError as exc:
            raise SchemaError(f"cannot read {value!r}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON: {exc}") from None


# -- complexes ---------------------------------------------------------------

def complex_from_dict(data) -> FaceComplex:
    if not isinstance(data, dict):
        raise SchemaError("expected a JSON object")
    if "faces" in data:
        faces = data["faces"]
        if not isinstance(faces, list) or not all(isinstance(r, dict) for r in faces):
            raise SchemaError("'faces' must be a list of objects")
        for r in faces:
            if "id" not in r or "dim" not in r:
                raise SchemaError("each face needs 'id' and 'dim'")
        return load_face_poset(faces, user_asserted=data.get("user_asserted", True))
    try:
        n = int(data["dimension"])
        facets = [str(F) for F in data["facets"]]
        verts = {str(v["name"]): [str(F) for F in v["facets"]] for v in data["vertices"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"polytope JSON needs dimension, facets and vertices ({exc})") from None
    return build_face_lattice(n, facets, verts)


def polytope_to_dict(Q: FaceComplex) -> dict:
    if Q.mode != "polytope":
        raise ComplexError("only polytope-mode complexes have the polytope schema")
    return {
        "dimension": Q.dimension,
        "facets": list(Q.facet_labels),
        "vertices": [{"name": v, "facets": sorted(Q.face(v).facets, key=natural_key)}
                     for v in Q.vertices],
    }


def poset_to_dict(Q: FaceComplex) -> dict:
    """Poset schema; ``contains`` lists covering subfaces only."""
    recs = []
    for f in sorted(Q.faces.values(), key=lambda f: (f.dim, natural_key(f.id))):
        covers = [g.id for g in Q.codim_one_subfaces(f.id)] if f.dim else []
        recs.append({"id": f.id, "dim": f.dim,
                     "facets": sorted(f.facets, key=natural_key),
                     "contains": sorted(covers, key=natural_key)})
    return {"faces": recs}


def complex_to_dict(Q: FaceComplex) -> dict:
    return polytope_to_dict(Q) if Q.mode == "polytope" else poset_to_dict(Q)


# -- characteristic pairs ----------------------------------------------------

def pair_from_dict(data) -> CharacteristicPair:
    Q = complex_from_dict(data)
    lam = data.get("lambda")
    if not isinstance(lam, dict):
        raise SchemaError("missing 'lambda' object mapping facet labels to vectors")
    try:
        lam = {str(k): tuple(int(x) for x in v) for k, v in lam.items()}
    except (TypeError, ValueError):
        raise SchemaError("lambda vectors must be lists of integers") from None
    return validate_characteristic(CharacteristicPair(Q, lam))


def pair_to_dict(pair: CharacteristicPair) -> dict:
    out = complex_to_dict(pair.complex)
    out["lambda"] = {F: list(pair.lam[F]) for F in pair.complex.facet_labels}
    return out


def load_pair(path) -> CharacteristicPair:
    return pair_from_dict(json.loads(Path(path).read_text()))


def cube_pair() -> CharacteristicPair:
    """The worked 3-cube example shipped with the package."""
    from importlib.resources import files

    return pair_from_dict(json.loads(files("orbitor.data").joinpath("cube.json").read_text()))


# -- other inputs ------------------------------------------------------------

def building_sequence_from_dict(data) -> BuildingSequence:
    if not isinstance(data, dict) or not isinstance(data.get("cells"), list):
        raise SchemaError("building sequence JSON needs a 'cells' list")
    return BuildingSequence.from_dict(data)


def weights_from_dict(data) -> WeightVector:
    try:
        return WeightVector(int(data["d"]), int(data["n"]),
                            tuple(int(x) for x in data["w"]), int(data["r"]))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, WeightError):
            raise
        raise SchemaError(f"weight JSON needs d, n, w and r ({exc})") from None
