"""Retraction sequences and the torsion certificates they give.

A stage of a retraction is determined by the set of vertices deleted so far:
it is the union of the faces of ``Q`` avoiding all of them. Searches are
memoised on that set.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from math import gcd
from typing import Iterator, Optional, Union

from sympy.ntheory import primefactors

from .charpair import CharacteristicPair, all_local_orders, local_group_order
from .complexes import FaceComplex, free_vertices, natural_key
from .qcw import BuildingSequence, CellSpec

CERTIFIED = "certified"
INCONCLUSIVE = "inconclusive"
UNKNOWN_BUDGET = "unknown (budget)"

BUDGET_ENV = "ORBITOR_NODE_BUDGET"


class SearchBudgetExceeded(RuntimeError):
    pass


class RetractionError(ValueError):
    pass


@dataclass(frozen=True)
class RetractionTriple:
    B: FaceComplex
    E: str
    b: str


@dataclass(frozen=True)
class RetractionSequence:
    triples: tuple
    g_values: Optional[tuple] = None

    def __len__(self):
        return len(self.triples)

    @property
    def vertices(self) -> tuple:
        return tuple(t.b for t in self.triples)

    @property
    def faces(self) -> tuple:
        return tuple(t.E for t in self.triples)

    @property
    def face_dims(self) -> tuple:
        return tuple(t.B.face(t.E).dim for t in self.triples)

    def records(self) -> list:
        out = []
        for k, t in enumerate(self.triples):
            rec = {"stage": k + 1, "vertex": t.b, "face": t.E,
                   "face_dim": t.B.face(t.E).dim}
            if self.g_values is not None:
                rec["g"] = self.g_values[k]
            out.append(rec)
        return out


def _stage(Q: FaceComplex, deleted: frozenset, cache: dict) -> FaceComplex:
    B = cache.get(deleted)
    if B is None:
        B = Q.subcomplex(fid for fid, f in Q.faces.items() if not (f.vertices & deleted))
        cache[deleted] = B
    return B


def _free(B: FaceComplex) -> list:
    pairs = free_vertices(B)
    if len(B.vertices) > 1:
        pairs = [(v, E) for v, E in pairs if B.face(E).dim > 0]
    return pairs


def _split(obj):
    if isinstance(obj, CharacteristicPair):
        return obj.complex, obj
    return obj, None


def _build(Q, pair, path, cache):
    triples, gs = [], []
    deleted = frozenset()
    for v, E in path:
        triples.append(RetractionTriple(_stage(Q, deleted, cache), E, v))
        if pair is not None:
            gs.append(local_group_order(pair, E, v))
        deleted = deleted | {v}
    return RetractionSequence(tuple(triples), tuple(gs) if pair is not None else None)


def retraction_from_vertices(obj: Union[FaceComplex, CharacteristicPair],
                             order) -> RetractionSequence:
    """Replay a retraction given by its vertex order, checking each step."""
    Q, pair = _split(obj)
    cache = {}
    deleted = frozenset()
    path = []
    order = list(order)
    if sorted(order, key=natural_key) != list(Q.vertices):
        raise RetractionError("vertex order must list every vertex exactly once")
    for v in order:
        B = _stage(Q, deleted, cache)
        free = dict(_free(B))
        if v not in free:
            raise RetractionError(f"{v!r} is not free at stage {len(path) + 1}")
        path.append((v, free[v]))
        deleted = deleted | {v}
    return _build(Q, pair, path, cache)


def enumerate_retraction_sequences(obj: Union[FaceComplex, CharacteristicPair],
                                   limit: Optional[int] = None) -> Iterator[RetractionSequence]:
    """All retraction sequences, depth first, free vertices in name order.

    Passing a characteristic pair attaches ``g`` values to each sequence.
    """
    Q, pair = _split(obj)
    cache = {}
    count = 0
    path = []

    def rec(deleted):
        nonlocal count
        if limit is not None and count >= limit:
            return
        B = _stage(Q, deleted, cache)
        if len(B.vertices) == 1:
            (v,) = B.vertices
            path.append((v, v))
            count += 1
            yield _build(Q, pair, path, cache)
            path.pop()
            return
        for v, E in _free(B):
            path.append((v, E))
            yield from rec(deleted | {v})
            path.pop()
            if limit is not None and count >= limit:
                return

    yield from rec(frozenset())


@dataclass(frozen=True)
class Admissibility:
    admissible: bool
    stuck: tuple
    reachable_stages: int


def admissibility(Q: FaceComplex) -> Admissibility:
    """Explore every reachable stage; list those with no free vertex."""
    Q, _ = _split(Q)
    cache, seen, stuck = {}, set(), []
    todo = deque([frozenset()])
    seen.add(frozenset())
    while todo:
        deleted = todo.popleft()
        B = _stage(Q, deleted, cache)
        if len(B.vertices) <= 1:
            continue
        free = _free(B)
        if not free:
            stuck.append(tuple(sorted(deleted, key=natural_key)))
        for v, _E in free:
            nxt = deleted | {v}
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    stuck.sort(key=lambda s: (len(s), [natural_key(x) for x in s]))
    return Admissibility(not stuck, tuple(stuck), len(seen))


def _budget(node_budget):
    if node_budget is not None:
        return node_budget
    env = os.environ.get(BUDGET_ENV)
    return int(env) if env else None


def _search(pair, p, node_budget):
    Q = pair.complex
    cache, dead = {}, set()
    path = []
    nodes = 0

    def rec(deleted):
        nonlocal nodes
        nodes += 1
        if node_budget is not None and nodes > node_budget:
            raise SearchBudgetExceeded(f"node budget {node_budget} exhausted for p={p}")
        B = _stage(Q, deleted, cache)
        if len(B.vertices) == 1:
            (v,) = B.vertices
            path.append((v, v))
            return True
        options = []
        for v, E in _free(B):
            g = local_group_order(pair, E, v)
            if g % p:
                options.append((g, natural_key(v), v, E))
        options.sort()
        for _g, _k, v, E in options:
            nxt = deleted | {v}
            if nxt in dead:
                continue
            path.append((v, E))
            if rec(nxt):
                return True
            path.pop()
            dead.add(nxt)
        return False

    found = rec(frozenset())
    seq = _build(Q, pair, path, cache) if found else None
    return seq, nodes


def find_prime_compatible_retraction(pair: CharacteristicPair, p: int,
                                     node_budget: Optional[int] = None
                                     ) -> Optional[RetractionSequence]:
    """A retraction whose every ``g_E(v)`` is prime to ``p``, or ``None``.

    ``None`` means the backtracking search was exhausted. Raises
    :class:`SearchBudgetExceeded` when ``node_budget`` (or the
    ``ORBITOR_NODE_BUDGET`` environment variable) runs out first.
    """
    seq, _ = _search(pair, p, _budget(node_budget))
    return seq


@dataclass(frozen=True)
class PrimeVerdict:
    prime: int
    status: str
    witness: Optional[RetractionSequence] = None
    exhausted: bool = False
    nodes: int = 0

    def to_dict(self) -> dict:
        out = {"status": self.status, "nodes": self.nodes}
        if self.witness is not None:
            out["witness"] = self.witness.records()
        if self.status == INCONCLUSIVE:
            out["exhausted"] = self.exhausted
            out["note"] = "no compatible retraction; not certified by the criterion"
        return out


@dataclass(frozen=True)
class BSSResult:
    status: str
    witness: Optional[dict] = None
    stages_checked: int = 0
    quantifier: str = "universal"

    @property
    def holds(self) -> bool:
        return self.status == "holds"

    def to_dict(self) -> dict:
        out = {"status": self.status, "quantifier": self.quantifier,
               "stages_checked": self.stages_checked}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class TorsionReport:
    candidate_primes: tuple
    verdicts: dict
    bss: Optional[BSSResult] = None
    primes_filter: Optional[tuple] = None
    notes: list = field(default_factory=list)

    @property
    def global_verdict(self) -> str:
        if not all(v.status == CERTIFIED for v in self.verdicts.values()):
            return "not-certified"
        if self.primes_filter is not None and set(self.candidate_primes) - set(self.primes_filter):
            return "partial"
        return "torsion-free-even"

    @property
    def certified(self) -> bool:
        return self.global_verdict == "torsion-free-even"

    def to_dict(self) -> dict:
        out = {"candidate_primes": list(self.candidate_primes),
               "verdicts": {str(p): v.to_dict() for p, v in sorted(self.verdicts.items())},
               "global": self.global_verdict}
        if self.bss is not None:
            out["bss"] = self.bss.to_dict()
        if self.primes_filter is not None:
            out["primes_filter"] = list(self.primes_filter)
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def candidate_primes(pair: CharacteristicPair) -> tuple:
    """Primes dividing some ``g_E(v)``; every other prime is automatic."""
    primes = set()
    for g in set(all_local_orders(pair).values()):
        primes.update(primefactors(g))
    return tuple(sorted(primes))


def per_prime_verdict(pair: CharacteristicPair, primes=None,
                      node_budget: Optional[int] = None,
                      with_bss: bool = False) -> TorsionReport:
    """Run the compatible-retraction search for every candidate prime."""
    budget = _budget(node_budget)
    cands = candidate_primes(pair)
    todo = cands if primes is None else tuple(sorted(set(primes)))
    verdicts = {}
    for p in todo:
        if p not in cands:
            # every g is prime to p, so any retraction is a witness
            verdicts[p] = PrimeVerdict(p, CERTIFIED, _any_sequence(pair))
            continue
        try:
            seq, nodes = _search(pair, p, budget)
        except SearchBudgetExceeded:
            verdicts[p] = PrimeVerdict(p, UNKNOWN_BUDGET, nodes=budget or 0)
            continue
        if seq is None:
            verdicts[p] = PrimeVerdict(p, INCONCLUSIVE, exhausted=True, nodes=nodes)
        else:
            verdicts[p] = PrimeVerdict(p, CERTIFIED, seq, nodes=nodes)
    report = TorsionReport(cands, verdicts,
                           primes_filter=None if primes is None else todo)
    if with_bss:
        report.bss = check_bss_condition(pair)
    return report


def _any_sequence(pair):
    return next(enumerate_retraction_sequences(pair, limit=1), None)


def check_bss_condition(pair: CharacteristicPair) -> BSSResult:
    """Check the gcd-over-free-vertices condition on every reachable stage
    of dimension greater than one (universal reading over retractions).

    Stages are visited breadth first with deletions in vertex-name order, so
    the reported witness is the first failing stage in that order.
    """
    Q = pair.complex
    cache, seen = {}, {frozenset(): ()}
    todo = deque([frozenset()])
    checked = 0
    while todo:
        deleted = todo.popleft()
        B = _stage(Q, deleted, cache)
        if len(B.vertices) <= 1:
            continue
        free = _free(B)
        if not free:
            return BSSResult("inapplicable", {
                "reason": "stage without free vertex (polytope not admissible)",
                "deleted": list(seen[deleted])}, checked)
        if B.top_dim > 1:
            checked += 1
            gs = {v: local_group_order(pair, E, v) for v, E in free}
            g = 0
            for x in gs.values():
                g = gcd(g, x)
            if g != 1:
                return BSSResult("fails", {
                    "stage": len(deleted) + 1,
                    "deleted": list(seen[deleted]),
                    "free_vertices": [{"vertex": v, "face": E, "g": gs[v]} for v, E in free],
                    "gcd": g}, checked)
        for v, _E in free:
            nxt = deleted | {v}
            if nxt not in seen:
                seen[nxt] = seen[deleted] + (v,)
                todo.append(nxt)
    return BSSResult("holds", None, checked)


def to_building_sequence(seq: RetractionSequence) -> BuildingSequence:
    """q-cells of the toric orbifold, built up in reverse retraction order.

    The cell over stage ``k`` has real dimension ``2 dim E_k`` and group
    order ``g_{E_k}(b_k)``.
    """
    if seq.g_values is None:
        raise RetractionError("sequence carries no g values (enumerate it from a pair)")
    cells = [CellSpec(2 * d, g) for d, g in zip(seq.face_dims, seq.g_values)]
    return BuildingSequence(tuple(reversed(cells)), source="toric")
