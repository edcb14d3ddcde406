"""Face complexes of simple polytopes and nice manifolds with corners.

A :class:`FaceComplex` is a finite graded poset of faces. Each face records
its dimension, the facets it lies on and its vertex set. Two input modes
exist:

* *polytope* mode, built from vertex/facet incidences of a simple polytope,
  where every face is an intersection of facets;
* *poset* mode, built from an explicit face poset, which also admits nice
  manifolds with corners whose facet intersections may be disconnected.

Subcomplexes (the stages of a retraction) share face ids with their ambient
complex.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Optional


class ComplexError(ValueError):
    """Invalid polytope or poset data."""


def natural_key(label: str):
    """Sort key treating digit runs numerically, so ``F2 < F10``."""
    return tuple(int(tok) if tok.isdigit() else tok
                 for tok in re.split(r"(\d+)", str(label)))


@dataclass(frozen=True)
class Face:
    id: str
    dim: int
    facets: frozenset
    vertices: frozenset


class FaceComplex:
    """Immutable graded face poset.

    ``dimension`` is the ambient dimension ``n`` (the dimension of the
    complex this one was cut out of); :attr:`top_dim` is the largest face
    dimension actually present.
    """

    def __init__(self, dimension: int, facet_labels: Iterable[str],
                 faces: Mapping[str, Face], below: Mapping[str, frozenset],
                 mode: str = "polytope", user_asserted: bool = False):
        self.dimension = dimension
        self.facet_labels = tuple(sorted(facet_labels, key=natural_key))
        self.faces = dict(faces)
        self._below = {fid: frozenset(below[fid]).intersection(self.faces)
                       for fid in self.faces}
        self.mode = mode
        self.user_asserted = user_asserted
        self.vertices = tuple(sorted((f.id for f in self.faces.values() if f.dim == 0),
                                     key=natural_key))
        self._top_dim = max((f.dim for f in self.faces.values()), default=-1)

    def __repr__(self):
        return (f"FaceComplex(mode={self.mode!r}, dim={self.top_dim}, "
                f"faces={len(self.faces)}, vertices={len(self.vertices)})")

    def __contains__(self, face_id):
        return face_id in self.faces

    @property
    def top_dim(self) -> int:
        return self._top_dim

    def face(self, face_id: str) -> Face:
        try:
            return self.faces[face_id]
        except KeyError:
            raise ComplexError(f"no face {face_id!r} in complex") from None

    def below(self, face_id: str) -> frozenset:
        """Ids of all faces contained in ``face_id``, itself included."""
        return self._below[face_id]

    def is_subface(self, small: str, big: str) -> bool:
        return small in self._below[big]

    def faces_of_dim(self, d: int) -> list:
        return sorted((f for f in self.faces.values() if f.dim == d),
                      key=lambda f: natural_key(f.id))

    def f_vector(self) -> tuple:
        counts = [0] * (self.top_dim + 1)
        for f in self.faces.values():
            counts[f.dim] += 1
        return tuple(counts)

    def star(self, vertex: str) -> list:
        return [f for f in self.faces.values() if vertex in f.vertices]

    def maximal_faces(self, among: Optional[Iterable[Face]] = None) -> list:
        pool = list(self.faces.values()) if among is None else list(among)
        ids = {f.id for f in pool}
        out = []
        for f in pool:
            if not any(g != f.id and f.id in self._below[g] for g in ids):
                out.append(f)
        return sorted(out, key=lambda f: (-f.dim, natural_key(f.id)))

    def whole(self) -> Optional[Face]:
        """The unique top face when the complex is a single closed face."""
        top = self.maximal_faces()
        return top[0] if len(top) == 1 else None

    def codim_one_subfaces(self, face_id: str) -> list:
        E = self.face(face_id)
        return sorted((self.faces[g] for g in self._below[face_id]
                       if self.faces[g].dim == E.dim - 1),
                      key=lambda f: natural_key(f.id))

    def subcomplex(self, face_ids: Iterable[str]) -> "FaceComplex":
        ids = set(face_ids)
        return FaceComplex(self.dimension, self.facet_labels,
                           {i: self.faces[i] for i in ids},
                           {i: self._below[i] for i in ids},
                           self.mode, self.user_asserted)

    def face_by_facets(self, labels: Iterable[str]) -> Face:
        """Look up the face cut out by a set of facets (polytope mode)."""
        key = frozenset(labels)
        hits = [f for f in self.faces.values() if f.facets == key]
        if len(hits) != 1:
            raise ComplexError(f"facets {sorted(key)} do not determine a unique face")
        return hits[0]

    def structure(self) -> tuple:
        """Mode-independent comparison key: faces plus containment."""
        return (self.dimension, self.facet_labels,
                frozenset((f.id, f.dim, f.facets, f.vertices) for f in self.faces.values()),
                frozenset((k, v) for k, v in self._below.items()))


def _face_name(facets, order) -> str:
    if not facets:
        return "Q"
    return "^".join(sorted(facets, key=order.__getitem__))


def build_face_lattice(dimension: int, facets: Iterable[str],
                       vertices: Mapping[str, Iterable[str]]) -> FaceComplex:
    """Face lattice of a simple polytope from its vertex-facet incidences.

    ``vertices`` maps each vertex name to the ``dimension`` facets it lies
    on. Faces are the nonempty intersections of facets. Vertex names become
    the ids of 0-faces, facet names those of facets, the whole polytope is
    ``"Q"`` and other faces are named like ``"F1^F4"``.
    """
    n = dimension
    labels = list(facets)
    if len(set(labels)) != len(labels):
        raise ComplexError("duplicate facet labels")
    order = {f: i for i, f in enumerate(sorted(labels, key=natural_key))}
    vmap = {}
    for name, fs in vertices.items():
        fs = frozenset(fs)
        unknown = fs - order.keys()
        if unknown:
            raise ComplexError(f"vertex {name!r} uses unknown facets {sorted(unknown)}")
        if len(fs) != n or len(list(vertices[name])) != n:
            raise ComplexError(f"vertex {name!r} lies on {len(fs)} facets, "
                               f"a simple {n}-polytope needs exactly {n}")
        vmap[name] = fs
    if not vmap:
        raise ComplexError("empty complex")
    if len(vmap) < n + 1:
        raise ComplexError(f"a {n}-polytope needs at least {n + 1} vertices")
    seen = {}
    for name, fs in vmap.items():
        if fs in seen:
            raise ComplexError(f"vertices {seen[fs]!r} and {name!r} lie on the same facets")
        seen[fs] = name
    used = set().union(*vmap.values())
    if used != set(labels):
        raise ComplexError(f"facets without vertices: {sorted(set(labels) - used, key=natural_key)}")
    clash = set(vmap) & (set(labels) | {"Q"})
    if clash:
        raise ComplexError(f"vertex names collide with face names: {sorted(clash)}")

    by_facets = {}
    for fs in vmap.values():
        for k in range(n + 1):
            for S in combinations(sorted(fs, key=order.__getitem__), k):
                S = frozenset(S)
                if S in by_facets:
                    continue
                W = frozenset(v for v, vf in vmap.items() if S <= vf)
                closure = frozenset.intersection(*(vmap[v] for v in W))
                if closure != S:
                    raise ComplexError(
                        f"facets {sorted(S, key=order.__getitem__)} meet in a face lying on "
                        f"extra facets {sorted(closure - S, key=order.__getitem__)}; "
                        "not a simple polytope (try poset mode)")
                by_facets[S] = W

    edges = []
    for S, W in by_facets.items():
        if len(S) == n - 1:
            if len(W) != 2:
                raise ComplexError(
                    f"facets {sorted(S, key=order.__getitem__)} meet in {len(W)} vertices, "
                    "expected an edge (use poset mode for disconnected intersections)")
            edges.append(tuple(W))
    for S, W in by_facets.items():
        if len(W) > 1 and not _connected(W, edges):
            raise ComplexError(
                f"intersection of {sorted(S, key=order.__getitem__)} is disconnected; "
                "polytope mode rejects it (use poset mode)")

    faces = {}
    for S, W in by_facets.items():
        if len(S) == n:
            (fid,) = W
        else:
            fid = _face_name(S, order)
        faces[fid] = Face(fid, n - len(S), S, W)
    below = {fid: frozenset(g for g, G in faces.items() if G.vertices <= F.vertices)
             for fid, F in faces.items()}
    return FaceComplex(n, labels, faces, below, "polytope")


def _connected(W, edges) -> bool:
    adj = {v: set() for v in W}
    for a, b in edges:
        if a in adj and b in adj:
            adj[a].add(b)
            adj[b].add(a)
    start = next(iter(W))
    seen = {start}
    todo = deque([start])
    while todo:
        for w in adj[todo.popleft()]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return len(seen) == len(W)


def load_face_poset(records: Iterable[Mapping], user_asserted: bool = True) -> FaceComplex:
    """Face complex from an explicit poset.

    Each record is ``{"id", "dim", "facets", "contains"}`` where ``facets``
    lists the codimension-one faces the face lies on and ``contains`` lists
    (at least the covering) subfaces. Realisability as a manifold with
    corners is taken on trust; only combinatorial consistency is checked.
    """
    recs = {}
    for r in records:
        fid = str(r["id"])
        if fid in recs:
            raise ComplexError(f"duplicate face id {fid!r}")
        recs[fid] = r
    if not recs:
        raise ComplexError("empty complex")
    dims = {fid: int(r["dim"]) for fid, r in recs.items()}
    n = max(dims.values())
    down = {}
    for fid, r in recs.items():
        kids = set(map(str, r.get("contains", ())))
        missing = kids - recs.keys()
        if missing:
            raise ComplexError(f"face {fid!r} contains unknown faces {sorted(missing)}")
        for k in kids:
            if dims[k] >= dims[fid]:
                raise ComplexError(f"face {fid!r} (dim {dims[fid]}) cannot contain "
                                   f"{k!r} (dim {dims[k]})")
        down[fid] = kids

    below = {}

    def closure(fid):
        if fid not in below:
            acc = {fid}
            for k in down[fid]:
                acc |= closure(k)
            below[fid] = frozenset(acc)
        return below[fid]

    for fid in recs:
        closure(fid)

    for fid in recs:
        proper = below[fid] - {fid}
        if dims[fid] == 0:
            if proper:
                raise ComplexError(f"vertex {fid!r} contains other faces")
            continue
        covers = [g for g in proper
                  if not any(g in below[h] for h in proper if h != g)]
        if not covers or any(dims[g] != dims[fid] - 1 for g in covers):
            raise ComplexError(f"poset is not graded at face {fid!r}")

    facet_ids = [fid for fid, d in dims.items() if d == n - 1]
    tops = [fid for fid, d in dims.items() if d == n]
    if len(tops) != 1:
        raise ComplexError(f"expected one top face of dim {n}, found {len(tops)}")
    stray = recs.keys() - below[tops[0]]
    if stray:
        raise ComplexError(f"faces {sorted(stray, key=natural_key)} lie outside the top face")
    faces = {}
    for fid, r in recs.items():
        fs = frozenset(map(str, r.get("facets", ())))
        unknown = fs - set(facet_ids)
        if unknown:
            raise ComplexError(f"face {fid!r} lists non-facets {sorted(unknown)} as facets")
        if len(fs) != n - dims[fid]:
            raise ComplexError(f"face {fid!r} of codimension {n - dims[fid]} lies on "
                               f"{len(fs)} facets")
        for F in facet_ids:
            if (F in fs) != (fid in below[F]):
                raise ComplexError(f"facet membership of {fid!r} disagrees with "
                                   f"containment in {F!r}")
        verts = frozenset(g for g in below[fid] if dims[g] == 0)
        faces[fid] = Face(fid, dims[fid], fs, verts)
    for fid, F in faces.items():
        for g in below[fid]:
            if not F.facets <= faces[g].facets:
                raise ComplexError(f"facet memberships of {g!r} and {fid!r} are inconsistent")
    return FaceComplex(n, facet_ids, faces, below, "poset", user_asserted)


def delete_vertex_subcomplex(B: FaceComplex, b: str) -> FaceComplex:
    """Union of the faces of ``B`` that avoid vertex ``b``."""
    if b not in B.vertices:
        raise ComplexError(f"{b!r} is not a vertex of the complex")
    return B.subcomplex(fid for fid, f in B.faces.items() if b not in f.vertices)


def free_vertices(B: FaceComplex) -> list:
    """Vertices of ``B`` with a corner neighbourhood, paired with their face.

    ``v`` is free when the faces of ``B`` through ``v`` have a single
    maximal element ``E`` and ``v`` lies on exactly ``dim E`` codimension-one
    faces of ``E``.
    """
    out = []
    for v in B.vertices:
        top = B.maximal_faces(B.star(v))
        if len(top) != 1:
            continue
        E = top[0]
        through = [g for g in B.codim_one_subfaces(E.id) if v in g.vertices]
        if len(through) == E.dim:
            out.append((v, E.id))
    return out
