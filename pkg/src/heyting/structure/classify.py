"""Stratum of a formula: Bottom, Reducible, J1, J2, J3 or an honest Unknown."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from ..budget import Budget, BudgetExceeded, StepCounter, default_budget
from ..formula import Formula, max_atom
from ..prover import EmptyC, is_bottom, is_join_irreducible
from ..universal import UFragment, leaves
from .kenum import KEnumeration, iter_k
from .triplets import Triplet, find_triplets

STRATUM = {"J1": 1, "J2": 2, "J3": 3}


@dataclass
class ClassLabel:
    kind: str                      # Bottom | Reducible | J1 | J2 | J3 | Unknown
    witness: object = None         # KEnumeration, Triplet or a triple of node ids
    ken: KEnumeration | None = None
    info: dict = field(default_factory=dict)

    @property
    def stratum(self) -> int | None:
        return STRATUM.get(self.kind)

    def to_json(self) -> dict:
        out = {"class": self.kind, "info": self.info}
        if isinstance(self.witness, Triplet):
            out["witness"] = list(self.witness.ids)
        elif isinstance(self.witness, tuple):
            out["witness"] = list(self.witness)
        if self.ken is not None:
            out["kenum"] = self.ken.to_json()
        return out


def incomparable_triple(frag: UFragment, ids: list[int], steps: StepCounter) -> tuple | None:
    for trio in combinations(ids, 3):
        steps.tick()
        if not any(frag.comparable(a, b) for a, b in combinations(trio, 2)):
            return trio
    return None


def classify(phi: Formula, n: int | None = None, frag: UFragment | None = None,
             budget: Budget | None = None) -> ClassLabel:
    budget = budget or default_budget()
    n = n or max(1, max_atom(phi))
    try:
        if is_bottom(phi, budget):
            return ClassLabel("Bottom")
        ji = is_join_irreducible(phi, budget=budget)
    except EmptyC:
        return ClassLabel("Bottom")
    except BudgetExceeded as e:
        return ClassLabel("Unknown", info={"stage": "prover", "budget": e.what})
    if not ji.irreducible:
        return ClassLabel("Reducible", info={"minimal_types": len(ji.minimal_types)})
    mt = ji.mintype.bits
    frag = frag if frag is not None else leaves(n)
    steps = StepCounter(budget.search_steps)
    triplet = None
    ken = None
    try:
        for ken in iter_k(phi, frag=frag, budget=budget):
            if ken.closed:
                return ClassLabel("J1", ken, ken, {"k_size": sum(ken.counts.values())})
            minimal = [a for a in ken.forcers() if ken.type_of(a) == mt]
            trio = incomparable_triple(frag, minimal, steps)
            if trio is not None:
                return ClassLabel("J3", trio, ken, {"level": max(ken.levels)})
            if triplet is None:
                found = find_triplets(ken, require_mintype=True, mintype_bits=mt)
                triplet = found[0] if found else None
            if max(ken.levels) >= budget.level_depth:
                break
    except BudgetExceeded as e:
        return ClassLabel("Unknown", triplet, ken,
                          {"stage": "kenum", "budget": e.what, "triplet_found": triplet is not None})
    if triplet is not None:
        return ClassLabel("J2", triplet, ken, {"levels_checked": max(ken.levels)})
    return ClassLabel("Unknown", None, ken, {"stage": "depth", "levels_checked": max(ken.levels)})
