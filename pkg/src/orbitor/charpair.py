"""R-characteristic pairs and the local group data they induce on faces."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from .complexes import ComplexError, FaceComplex, natural_key
from .linalg import (QuotientMap, as_vector, determinant, invariant_factors,
                     primitive_vector, quotient_projection, rank,
                     saturate_lattice)


class CharacteristicError(ValueError):
    """The vectors attached to facets violate the independence condition."""

    def __init__(self, message, face=None):
        super().__init__(message)
        self.face = face


@dataclass(eq=False)
class CharacteristicPair:
    """A face complex with an integer vector on each facet.

    Vectors need not be primitive. Use :func:`validate_characteristic` to
    obtain a validated pair; the analyses below expect one.
    """

    complex: FaceComplex
    lam: Mapping[str, tuple]
    validated: bool = False
    _induced: dict = field(default_factory=dict, repr=False)
    _g: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.complex.dimension

    def vector(self, facet: str) -> tuple:
        return self.lam[facet]


@dataclass(frozen=True)
class InducedPair:
    """Characteristic data induced on a face ``E`` of codimension ``k``.

    ``lambda_E`` is keyed by the label of the facet ``F_j`` with
    ``E ∩ F_j`` a facet of ``E``; ``facets_of_E`` maps each codimension-one
    subface of ``E`` to that label (poset mode may give two subfaces the
    same label).
    """

    face: str
    quotient: QuotientMap
    lambda_E: Mapping[str, tuple]
    facets_of_E: Mapping[str, str]


def validate_characteristic(pair: CharacteristicPair) -> CharacteristicPair:
    Q = pair.complex
    n = Q.dimension
    lam = {}
    for F in Q.facet_labels:
        if F not in pair.lam:
            raise CharacteristicError(f"facet {F!r} has no vector", face=F)
        v = as_vector(pair.lam[F])
        if len(v) != n:
            raise CharacteristicError(f"vector on {F!r} has length {len(v)}, expected {n}",
                                      face=F)
        if not any(v):
            raise CharacteristicError(f"vector on {F!r} is zero", face=F)
        lam[F] = v
    extra = set(pair.lam) - set(Q.facet_labels)
    if extra:
        raise CharacteristicError(f"vectors given for unknown facets {sorted(extra)}")
    for f in sorted(Q.faces.values(), key=lambda f: (f.dim, natural_key(f.id))):
        if len(f.facets) < 2:
            continue
        rows = [lam[F] for F in sorted(f.facets, key=natural_key)]
        if rank(rows) != len(rows):
            raise CharacteristicError(
                f"vectors on {sorted(f.facets, key=natural_key)} are dependent at face {f.id!r}",
                face=f.id)
    return CharacteristicPair(Q, lam, True)


def _require_valid(pair):
    if not pair.validated:
        raise CharacteristicError("characteristic pair has not been validated")


def _top_face(Q: FaceComplex) -> str:
    for f in Q.faces.values():
        if f.dim == Q.dimension:
            return f.id
    raise ComplexError("complex has no top-dimensional face")


def induced_characteristic(pair: CharacteristicPair, E: str,
                           basis_hint=None) -> InducedPair:
    """Project the facet vectors onto ``Z^n`` modulo the saturated span of
    the vectors of the facets containing ``E``, and take primitive parts.

    For the top face the vectors are returned unchanged (identity quotient).
    Default-basis results are cached on the pair.
    """
    _require_valid(pair)
    if basis_hint is None and E in pair._induced:
        return pair._induced[E]
    Q = pair.complex
    face = Q.face(E)
    n = Q.dimension
    own = sorted(face.facets, key=natural_key)
    if own:
        sat = saturate_lattice([pair.lam[F] for F in own])
        quot = quotient_projection(sat, basis_hint)
    else:
        quot = quotient_projection((), basis_hint, ambient_rank=n)

    facets_of_E = {}
    for g in Q.codim_one_subfaces(E):
        extra = g.facets - face.facets
        if len(extra) != 1:
            raise CharacteristicError(f"subface {g.id!r} of {E!r} is not cut out by one facet")
        (F,) = extra
        facets_of_E[g.id] = F
    lam_E = {}
    for F in sorted(set(facets_of_E.values()), key=natural_key):
        image = quot(pair.lam[F])
        lam_E[F] = image if not own else primitive_vector(image)
    out = InducedPair(E, quot, lam_E, facets_of_E)
    if basis_hint is None:
        pair._induced[E] = out
    return out


def _corner_facets(pair, E, v):
    Q = pair.complex
    face, vert = Q.face(E), Q.face(v)
    if vert.dim != 0:
        raise ComplexError(f"{v!r} is not a vertex")
    if v not in face.vertices:
        raise ComplexError(f"vertex {v!r} does not lie on face {E!r}")
    extra = sorted(vert.facets - face.facets, key=natural_key)
    if len(extra) != face.dim:
        raise CharacteristicError(
            f"{v!r} is not a simple corner of {E!r}: {len(extra)} facets for dim {face.dim}")
    return extra


def local_group_matrix(pair: CharacteristicPair, E: str, v: str,
                       basis_hint=None) -> tuple:
    """Rows ``λ_E(E ∩ F_j)`` for the facets ``F_j`` of ``E`` through ``v``."""
    extra = _corner_facets(pair, E, v)
    if not extra:
        return ()
    ind = induced_characteristic(pair, E, basis_hint)
    return tuple(ind.lambda_E[F] for F in extra)


def local_group_order(pair: CharacteristicPair, E: Optional[str], v: str,
                      basis_hint=None) -> int:
    """``|det|`` of the induced vectors at the corner ``v`` of face ``E``.

    ``E=None`` means the whole complex. A vertex viewed as its own face
    has order 1.
    """
    _require_valid(pair)
    if E is None:
        E = _top_face(pair.complex)
    key = (E, v)
    if basis_hint is None and key in pair._g:
        return pair._g[key]
    rows = local_group_matrix(pair, E, v, basis_hint)
    g = abs(determinant(rows)) if rows else 1
    if basis_hint is None:
        pair._g[key] = g
    return g


def local_group_structure(pair: CharacteristicPair, E: Optional[str], v: str,
                          basis_hint=None) -> tuple:
    """Invariant factors of ``Z^d / span`` of the induced corner vectors."""
    _require_valid(pair)
    if E is None:
        E = _top_face(pair.complex)
    rows = local_group_matrix(pair, E, v, basis_hint)
    if not rows:
        return ()
    return invariant_factors(rows)


def all_local_orders(pair: CharacteristicPair) -> dict:
    """``{(E, v): g_E(v)}`` over every face and each of its vertices."""
    _require_valid(pair)
    Q = pair.complex
    out = {}
    for f in sorted(Q.faces.values(), key=lambda f: (-f.dim, natural_key(f.id))):
        for v in sorted(f.vertices, key=natural_key):
            out[(f.id, v)] = local_group_order(pair, f.id, v)
    return out
