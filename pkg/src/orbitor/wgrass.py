"""Schubert q-cells of weighted Grassmannians."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Optional

from sympy.ntheory import primefactors

from .qcw import BuildingSequence, CellSpec, analyze_even_building_sequence


class WeightError(ValueError):
    pass


@dataclass(frozen=True)
class WeightVector:
    d: int
    n: int
    w: tuple
    r: int

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(int(x) for x in self.w))
        if not 1 <= self.d <= self.n:
            raise WeightError(f"need 1 <= d <= n, got d={self.d}, n={self.n}")
        if len(self.w) != self.n:
            raise WeightError(f"expected {self.n} weights, got {len(self.w)}")
        if any(x < 0 for x in self.w):
            raise WeightError("weights must be nonnegative")
        if self.r < 1:
            raise WeightError("r must be positive")

    def order(self, alpha) -> int:
        return self.r + sum(self.w[i - 1] for i in alpha)


@dataclass(frozen=True)
class SchubertCell:
    alpha: tuple
    dim: int
    order: Optional[int] = None

    @property
    def partition(self) -> tuple:
        """Row lengths ``i_k - k``, weakly increasing."""
        return tuple(i - k for k, i in enumerate(self.alpha, start=1))

    def fits_inside(self, other: "SchubertCell") -> bool:
        return all(a <= b for a, b in zip(self.alpha, other.alpha))

    def label(self) -> str:
        return "e_" + ",".join(map(str, self.alpha))


def _check(d, n):
    if not 1 <= d <= n:
        raise WeightError(f"need 1 <= d <= n, got d={d}, n={n}")


def iter_schubert_cells(d: int, n: int) -> Iterator[SchubertCell]:
    """Cells of ``Gr(d, n)`` in lexicographic order of ``alpha``."""
    _check(d, n)
    for alpha in combinations(range(1, n + 1), d):
        yield SchubertCell(alpha, sum(i - k for k, i in enumerate(alpha, start=1)))


def enumerate_schubert_cells(d: int, n: int) -> list:
    """All cells, sorted by (complex dimension, alpha)."""
    return sorted(iter_schubert_cells(d, n), key=lambda c: (c.dim, c.alpha))


def young_covers(cells) -> list:
    """Hasse diagram of the containment order: pairs (smaller, larger)."""
    cells = list(cells)
    return [(a, b) for a in cells for b in cells
            if b.dim == a.dim + 1 and a.fits_inside(b)]


def cell_group_orders(weights: WeightVector) -> list:
    return [SchubertCell(c.alpha, c.dim, weights.order(c.alpha))
            for c in enumerate_schubert_cells(weights.d, weights.n)]


def building_sequence(weights: WeightVector) -> BuildingSequence:
    """q-cells in (dim, alpha) order, a linear extension of containment.

    Real dimensions are twice the number of boxes.
    """
    return BuildingSequence(tuple(CellSpec(2 * c.dim, c.order)
                                  for c in cell_group_orders(weights)),
                            source="grassmann")


@dataclass(frozen=True)
class GrassmannReport:
    weights: WeightVector
    cells: tuple
    sequence: BuildingSequence
    candidate_primes: tuple
    verdicts: dict

    @property
    def inconclusive(self) -> tuple:
        return tuple(p for p, v in self.verdicts.items() if not v.certified)

    @property
    def certified(self) -> bool:
        return not self.inconclusive

    def to_dict(self) -> dict:
        w = self.weights
        return {
            "weights": {"d": w.d, "n": w.n, "w": list(w.w), "r": w.r},
            "cells": [{"alpha": list(c.alpha), "dim": c.dim, "order": c.order,
                       "partition": list(c.partition)} for c in self.cells],
            "building_sequence": self.sequence.to_dict(),
            "candidate_primes": list(self.candidate_primes),
            "verdicts": {str(p): v.to_dict() for p, v in sorted(self.verdicts.items())},
            "inconclusive": list(self.inconclusive),
            "global": "torsion-free-even" if self.certified else "not-certified",
        }


def grassmann_torsion_report(weights: WeightVector) -> GrassmannReport:
    """Apply the even-cell criterion to the Schubert building sequence.

    Primes outside ``candidate_primes`` are certified without search.
    """
    cells = tuple(cell_group_orders(weights))
    seq = building_sequence(weights)
    primes = set()
    for c in seq.cells:
        primes.update(primefactors(c.order))
    verdicts = {p: analyze_even_building_sequence(seq, p) for p in sorted(primes)}
    return GrassmannReport(weights, cells, seq, tuple(sorted(primes)), verdicts)


def young_lattice_dot(weights_or_dn) -> str:
    """Graphviz rendering of the Young lattice, with orders when known."""
    if isinstance(weights_or_dn, WeightVector):
        cells = cell_group_orders(weights_or_dn)
        d, n = weights_or_dn.d, weights_or_dn.n
    else:
        d, n = weights_or_dn
        cells = enumerate_schubert_cells(d, n)
    lines = [f'digraph "Gr({d},{n})" {{', "  rankdir=BT;"]
    for c in cells:
        text = f"{c.label()}\\n{list(c.partition)}"
        if c.order is not None:
            text += f"\\n|G|={c.order}"
        lines.append(f'  "{c.label()}" [label="{text}"];')
    for a, b in young_covers(cells):
        lines.append(f'  "{a.label()}" -> "{b.label()}";')
    lines.append("}")
    return "\n".join(lines) + "\n"

