"""Torsion criteria for q-CW complexes given by building sequences.

A building sequence is an ordered list of q-cells ``e^k / G``; only their
homological shadow is modelled: dimension, group order and (optionally) the
degree of the attaching map. All verdicts are one-directional: a criterion
either certifies or stays silent, except :func:`propagate_p_torsion`, which
certifies that torsion *is* present.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Optional, Sequence

from sympy.ntheory import primefactors

CERTIFIED = "certified"
INCONCLUSIVE = "inconclusive"
HAS_TORSION = "has-p-torsion"
INAPPLICABLE = "inapplicable"


class BuildingSequenceError(ValueError):
    pass


class OddCellError(BuildingSequenceError):
    """An odd-dimensional cell was passed to an even-cells-only criterion."""


class MissingDegreeError(BuildingSequenceError):
    pass


@dataclass(frozen=True)
class CellSpec:
    """One q-cell ``e^dim / G``.

    Cells of dimension at most 2 are discs whatever the group, so their
    order is normalised to 1; the given value survives as ``declared_order``.
    """

    dim: int
    order: int = 1
    degree: Optional[int] = None
    orientation_preserving: Optional[bool] = None
    declared_order: Optional[int] = field(default=None, compare=False)

    def __post_init__(self):
        if self.dim < 0:
            raise BuildingSequenceError(f"negative cell dimension {self.dim}")
        if self.order < 1:
            raise BuildingSequenceError(f"group order must be positive, got {self.order}")
        if self.degree is not None and self.degree < 0:
            raise BuildingSequenceError(f"degree must be nonnegative, got {self.degree}")
        if self.declared_order is None:
            object.__setattr__(self, "declared_order", self.order)
        if self.dim <= 2 and self.order != 1:
            object.__setattr__(self, "order", 1)

    def to_dict(self) -> dict:
        out = {"dim": self.dim, "order": self.order}
        if self.declared_order != self.order:
            out["declared_order"] = self.declared_order
        if self.degree is not None:
            out["degree"] = self.degree
        if self.orientation_preserving is not None:
            out["orientation_preserving"] = self.orientation_preserving
        return out


@dataclass(frozen=True)
class BuildingSequence:
    cells: tuple
    source: str = "user"

    def __post_init__(self):
        cells = tuple(self.cells)
        if not cells:
            raise BuildingSequenceError("a building sequence needs at least one cell")
        if cells[0].dim != 0:
            raise BuildingSequenceError("a building sequence starts with a 0-cell")
        object.__setattr__(self, "cells", cells)

    def __len__(self):
        return len(self.cells)

    @property
    def all_even(self) -> bool:
        return all(c.dim % 2 == 0 for c in self.cells)

    def orders(self) -> tuple:
        return tuple(c.order for c in self.cells)

    def to_dict(self) -> dict:
        return {"source": self.source, "cells": [c.to_dict() for c in self.cells]}

    @classmethod
    def from_dict(cls, data) -> "BuildingSequence":
        try:
            cells = tuple(
                CellSpec(int(c["dim"]), int(c.get("order", 1)),
                         None if c.get("degree") is None else int(c["degree"]),
                         c.get("orientation_preserving"))
                for c in data["cells"])
        except (KeyError, TypeError) as exc:
            raise BuildingSequenceError(f"malformed building sequence: {exc}") from None
        return cls(cells, data.get("source", "user"))


@dataclass(frozen=True)
class Verdict:
    status: str
    prime: Optional[int] = None
    blocking: tuple = ()
    reason: str = ""

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED

    def to_dict(self) -> dict:
        out = {"status": self.status}
        if self.prime is not None:
            out["prime"] = self.prime
        if self.blocking:
            out["blocking_cells"] = list(self.blocking)
        if self.reason:
            out["reason"] = self.reason
        return out


# -- lens spaces -------------------------------------------------------------

Z = "Z"
TRIVIAL = "0"
BOUNDED = "|G|-torsion"
Z_OR_BOUNDED = "Z or |G|-torsion"


@dataclass(frozen=True)
class LensProfile:
    """Shape of ``H_j(S^(n-1)/G; Z)`` for ``j = 0..n-1``."""

    n: int
    order: int
    degrees: tuple

    def no_p_torsion(self, p: int) -> bool:
        return gcd(p, self.order) == 1

    def zp_trivial_degrees(self, p: int) -> tuple:
        """Degrees where ``H_j(S^(n-1)/G; Z_p)`` is known to vanish."""
        if not self.no_p_torsion(p):
            return ()
        return tuple(j for j in range(1, self.n - 1))


def lens_homology_profile(n: int, order: int,
                          orientation_preserving: Optional[bool] = None) -> LensProfile:
    if n < 1 or order < 1:
        raise ValueError("need n >= 1 and order >= 1")
    middle = TRIVIAL if order == 1 else BOUNDED
    if n == 1:
        return LensProfile(n, order, (Z,))
    top = Z if (order == 1 or orientation_preserving) else Z_OR_BOUNDED
    return LensProfile(n, order, (Z,) + (middle,) * (n - 2) + (top,))


# -- criteria ----------------------------------------------------------------

def _coprime_blockers(seq, p):
    return tuple(i for i, c in enumerate(seq.cells) if gcd(p, c.order) != 1)


def analyze_even_building_sequence(seq: BuildingSequence, p: int) -> Verdict:
    """Even cells only: certified iff ``p`` divides no group order.

    A certificate means ``H_*(X; Z)`` has no ``p``-torsion and
    ``H_odd(X; Z_p) = 0``.
    """
    odd = [i for i, c in enumerate(seq.cells) if c.dim % 2]
    if odd:
        raise OddCellError(f"cells {odd} are odd-dimensional; use the general criterion")
    blockers = _coprime_blockers(seq, p)
    if blockers:
        return Verdict(INCONCLUSIVE, p, blockers, f"{p} divides the group order of cells {list(blockers)}")
    return Verdict(CERTIFIED, p)


def candidate_primes(seqs: Iterable[BuildingSequence], with_degrees: bool = False) -> tuple:
    primes = set()
    for seq in seqs:
        for c in seq.cells:
            primes.update(primefactors(c.order))
            if with_degrees and c.degree:
                primes.update(primefactors(c.degree))
    return tuple(sorted(primes))


@dataclass(frozen=True)
class GlobalVerdict:
    status: str
    per_prime: dict
    witnesses: dict

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED

    def to_dict(self) -> dict:
        return {"status": self.status,
                "candidate_primes": sorted(self.per_prime),
                "verdicts": {str(p): v.to_dict() | ({"witness_index": self.witnesses[p]}
                                                    if p in self.witnesses else {})
                             for p, v in sorted(self.per_prime.items())}}


def analyze_all_primes_even(seqs) -> GlobalVerdict:
    """Torsion-freeness from a family of building sequences of one space.

    Certified when every prime dividing some group order is avoided by at
    least one sequence of the family.
    """
    if isinstance(seqs, BuildingSequence):
        seqs = [seqs]
    seqs = list(seqs)
    if not seqs:
        raise BuildingSequenceError("empty family of building sequences")
    per_prime, witnesses = {}, {}
    for p in candidate_primes(seqs):
        verdicts = [analyze_even_building_sequence(s, p) for s in seqs]
        hit = next((i for i, v in enumerate(verdicts) if v.certified), None)
        if hit is None:
            per_prime[p] = verdicts[0]
        else:
            per_prime[p] = verdicts[hit]
            witnesses[p] = hit
    status = CERTIFIED if all(v.certified for v in per_prime.values()) else INCONCLUSIVE
    return GlobalVerdict(status, per_prime, witnesses)


def resolved_degrees(seq: BuildingSequence) -> tuple:
    """Attaching degrees with the forced ones filled in.

    A 0-cell has no attaching map; an even cell preceded only by even cells
    lands in odd homology with no free part, so its degree is 0. Cells whose
    attaching sphere is declared orientation reversing may omit the degree.
    Anything else must be supplied.
    """
    out = []
    all_even_so_far = True
    for i, c in enumerate(seq.cells):
        d = c.degree
        if d is None:
            if c.dim == 0 or (c.dim % 2 == 0 and all_even_so_far):
                d = 0
            elif c.orientation_preserving is False:
                d = None
            else:
                raise MissingDegreeError(f"cell {i} (dim {c.dim}) needs an attaching degree")
        out.append(d)
        all_even_so_far = all_even_so_far and c.dim % 2 == 0
    return tuple(out)


def analyze_general_building_sequence(seq: BuildingSequence, p: int) -> Verdict:
    """Cells of any dimension: certified (no ``p``-torsion in ``H_*(X; Z)``)
    when every order is prime to ``p`` and every attaching degree is prime
    to ``p`` or zero."""
    degrees = resolved_degrees(seq)
    blockers = _coprime_blockers(seq, p)
    if blockers:
        return Verdict(INCONCLUSIVE, p, blockers,
                       f"{p} divides the group order of cells {list(blockers)}")
    bad = tuple(i for i, d in enumerate(degrees) if d and d % p == 0)
    if bad:
        return Verdict(INCONCLUSIVE, p, bad,
                       f"attaching degrees of cells {list(bad)} are nonzero multiples of {p}")
    return Verdict(CERTIFIED, p)


def propagate_p_torsion(seq: BuildingSequence, p: int, index: int,
                        torsion_degree: Optional[int] = None) -> Verdict:
    """Carry known ``p``-torsion of ``Y_(index-1)`` up to the whole space.

    ``index`` is 1-based: the caller asserts ``H_*(Y_(index-1); Z)`` has
    ``p``-torsion, optionally in homological degree ``torsion_degree``.
    Every later cell must have order prime to ``p``. In addition a later
    ``k``-cell whose attaching sphere may carry ``Z`` in degree ``k-1`` can
    kill a torsion class of degree ``k-1`` when its degree is 0 (e.g. a
    2-cell glued along the generator of ``H_1(RP^2)``); such a cell is only
    accepted when its degree is nonzero or ``torsion_degree`` rules it out.
    """
    if not 2 <= index <= len(seq) + 1:
        raise BuildingSequenceError(f"index must lie in 2..{len(seq) + 1}")
    later = range(index - 1, len(seq))
    blockers = tuple(j for j in later if gcd(p, seq.cells[j].order) != 1)
    if blockers:
        return Verdict(INAPPLICABLE, p, blockers,
                       f"{p} divides the group order of later cells {list(blockers)}")
    risky = []
    for j in later:
        c = seq.cells[j]
        if c.dim <= 1:
            continue
        if c.degree:
            continue
        if torsion_degree is not None and torsion_degree != c.dim - 1:
            continue
        risky.append(j)
    if risky:
        return Verdict(INAPPLICABLE, p, tuple(risky),
                       f"cells {risky} may kill torsion in degree dim-1 (degree 0 or unknown)")
    return Verdict(HAS_TORSION, p)


def cell_counts(seq: BuildingSequence) -> tuple:
    top = max(c.dim for c in seq.cells)
    counts = [0] * (top + 1)
    for c in seq.cells:
        counts[c.dim] += 1
    return tuple(counts)


def betti_if_even_certified(seq: BuildingSequence,
                            alternates: Sequence[BuildingSequence] = ()) -> tuple:
    """Betti numbers ``b_0, b_1, ...`` once torsion-freeness is certified.

    ``alternates`` are further building sequences of the same space used
    for primes the main sequence does not avoid.
    """
    if not seq.all_even:
        raise OddCellError("Betti numbers from cell counts need even cells only")
    verdict = analyze_all_primes_even([seq, *alternates])
    if not verdict.certified:
        bad = [p for p, v in verdict.per_prime.items() if not v.certified]
        raise BuildingSequenceError(f"not certified torsion-free (primes {bad} unresolved)")
    return cell_counts(seq)
