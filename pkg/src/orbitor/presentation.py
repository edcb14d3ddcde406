"""Cohomology ring presentation data for certified toric orbifolds.

Produces the Stanley-Reisner ideal ``I`` and linear ideal ``J`` of
``Z[x_1..x_m] / (I + J)``. The weighted Stanley-Reisner subring is defined by
an integrality condition that is not computed here; the output carries a
caveat flag whenever the orbifold is singular.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .charpair import CharacteristicPair, local_group_order
from .complexes import ComplexError, FaceComplex
from .linalg import vector_gcd


class PresentationRefused(ValueError):
    def __init__(self, reason, report=None):
        super().__init__(reason)
        self.reason = reason
        self.report = report

    def to_dict(self) -> dict:
        out = {"status": "refused", "reason": self.reason}
        if self.report is not None:
            out["report"] = self.report.to_dict()
        return out


def stanley_reisner_generators(Q: FaceComplex) -> list:
    """Minimal sets of facets with empty common intersection."""
    if Q.mode != "polytope":
        raise ComplexError("Stanley-Reisner generators need polytope mode")
    labels = Q.facet_labels
    vertex_facets = [Q.face(v).facets for v in Q.vertices]
    found = []
    for k in range(1, len(labels) + 1):
        for S in combinations(labels, k):
            s = frozenset(S)
            if any(g <= s for g in found):
                continue
            if not any(s <= vf for vf in vertex_facets):
                found.append(s)
    order = {f: i for i, f in enumerate(labels)}
    return [tuple(sorted(g, key=order.__getitem__)) for g in found]


@dataclass(frozen=True)
class LinearForm:
    coefficients: tuple

    def render(self, variables) -> str:
        terms = []
        for c, x in zip(self.coefficients, variables):
            if c == 0:
                continue
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            sign = "-" if c < 0 else "+"
            terms.append((sign, f"{mag}{x}"))
        if not terms:
            return "0"
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, t in terms[1:]:
            out += f" {sign} {t}"
        return out


def linear_relation_forms(pair: CharacteristicPair) -> list:
    """Form ``j`` has coefficient ``<λ_i, e_j>`` on ``x_i``."""
    labels = pair.complex.facet_labels
    return [LinearForm(tuple(pair.lam[F][j] for F in labels)) for j in range(pair.n)]


@dataclass
class PresentationData:
    variables: tuple
    facet_of: dict
    sr_generators: list
    linear_forms: list
    weighted_caveat: bool
    non_primitive: tuple = ()
    notes: list = field(default_factory=list)

    def _monomial(self, gen):
        index = {F: x for x, F in self.facet_of.items()}
        return "*".join(index[F] for F in gen)

    def to_dict(self) -> dict:
        return {
            "status": "ok",
            "variables": [{"name": x, "facet": self.facet_of[x], "degree": 2}
                          for x in self.variables],
            "sr_generators": [self._monomial(g) for g in self.sr_generators],
            "linear_forms": [f.render(self.variables) for f in self.linear_forms],
            "linear_coefficients": [list(f.coefficients) for f in self.linear_forms],
            "weighted_subring_caveat": self.weighted_caveat,
            "non_primitive_facets": list(self.non_primitive),
            "notes": list(self.notes),
        }

    def render(self) -> str:
        xs = ", ".join(self.variables)
        lines = [f"Z[{xs}] / (I + J),  deg x_i = 2"]
        lines += [f"  {x} <-> {self.facet_of[x]}" for x in self.variables]
        lines.append("I = (" + ", ".join(self._monomial(g) for g in self.sr_generators) + ")")
        lines.append("J = (" + ", ".join(f.render(self.variables) for f in self.linear_forms) + ")")
        if self.weighted_caveat:
            lines.append("caveat: singular orbifold; the cohomology ring is the weighted "
                         "Stanley-Reisner subring modulo J, which is not computed here")
        lines += [f"note: {n}" for n in self.notes]
        return "\n".join(lines) + "\n"


def emit_presentation(pair: CharacteristicPair, report) -> PresentationData:
    """Presentation data, refused unless ``report`` certifies every prime."""
    if not getattr(report, "certified", False):
        raise PresentationRefused(
            "torsion-freeness is not certified for every prime; the presentation "
            "theorem does not apply", report)
    Q = pair.complex
    labels = Q.facet_labels
    variables = tuple(f"x{i}" for i in range(1, len(labels) + 1))
    facet_of = dict(zip(variables, labels))
    smooth = all(local_group_order(pair, None, v) == 1 for v in Q.vertices)
    non_prim = tuple(F for F in labels if vector_gcd(pair.lam[F]) != 1)
    notes = []
    if non_prim:
        notes.append("vectors on " + ", ".join(non_prim) + " are not primitive; "
                     "linear forms use them as given")
    return PresentationData(variables, facet_of, stanley_reisner_generators(Q),
                            linear_relation_forms(pair), not smooth, non_prim, notes)
