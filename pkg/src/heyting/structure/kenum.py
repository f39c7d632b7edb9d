"""Level-by-level enumeration of k(phi) inside a universal-model fragment.

Persistence makes this exhaustive without touching non-forcers: every
immediate successor of a forcer is a forcer, so level m+1 forcers are
node(S, U) for antichains S of stored forcers that meet level m.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from ..budget import Budget, BudgetExceeded, StepCounter, default_budget
from ..formula import Formula, Kind, implies, max_atom
from ..prover import CompiledClosure, Entailment, compiled, entails, quick_valid
from ..semantics import force
from ..universal import UFragment, admissible_valuations, leaves


class FragmentTypes:
    """Types (over one closure) of stored fragment nodes, computed leaf-up and memoized."""

    def __init__(self, frag: UFragment, cc: CompiledClosure):
        self.frag = frag
        self.cc = cc
        self._t: dict[int, int] = {}

    def agg(self, ids) -> int:
        a = -1
        for i in ids:
            a &= self.of(i)
        return a

    def of(self, a: int) -> int:
        t = self._t.get(a)
        if t is not None:
            return t
        stack = [a]
        while stack:
            b = stack[-1]
            missing = [s for s in self.frag.nodes[b].succ if s not in self._t]
            if missing:
                stack.extend(missing)
                continue
            stack.pop()
            if b not in self._t:
                node = self.frag.nodes[b]
                self._t[b] = self.cc.root_type(self.agg(node.succ), node.valuation)
        return self._t[a]

    def forces(self, a: int, f: Formula) -> bool:
        return bool(self.of(a) >> self.cc.closure.index[f] & 1)


def fragment_types(frag: UFragment, phi: Formula) -> FragmentTypes:
    key = ("types", phi)
    ft = frag.memo.get(key)
    if ft is None:
        ft = frag.memo[key] = FragmentTypes(frag, compiled(phi))
    return ft


def fragment_forces(frag: UFragment, a: int, phi: Formula) -> bool:
    return fragment_types(frag, phi).forces(a, phi)


@dataclass
class KEnumeration:
    phi: Formula
    frag: UFragment
    types: FragmentTypes
    levels: dict[int, list[int]] = field(default_factory=dict)
    status: str = "open"          # "closed" once an empty level is reached
    open_level: int | None = None  # deepest level computed while open

    @property
    def closed(self) -> bool:
        return self.status == "closed"

    @property
    def counts(self) -> dict[int, int]:
        return {m: len(v) for m, v in sorted(self.levels.items())}

    def forcers(self) -> list[int]:
        return [a for m in sorted(self.levels) for a in self.levels[m]]

    def type_of(self, a: int) -> int:
        return self.types.of(a)

    def to_json(self) -> dict:
        return {"formula": str(self.phi), "status": self.status,
                "open_level": self.open_level,
                "counts": {str(m): c for m, c in self.counts.items()},
                "forcers": {str(m): ids for m, ids in sorted(self.levels.items())}}


def iter_k(phi: Formula, n: int | None = None, frag: UFragment | None = None,
           budget: Budget | None = None) -> Iterator[KEnumeration]:
    """Yield the enumeration after each completed level (stops when closed)."""
    budget = budget or default_budget()
    if frag is None:
        frag = leaves(n or max(1, max_atom(phi)))
    cc = compiled(phi)
    if cc.width > budget.width:
        raise BudgetExceeded("width", budget.width, cc.width)
    ft = fragment_types(frag, phi)
    bit = cc.closure.index[phi]
    ken = KEnumeration(phi, frag, ft)
    steps = StepCounter(budget.search_steps)
    level1 = [a for a in frag.by_level[1] if ft.of(a) >> bit & 1]
    ken.levels[1] = level1
    ken.open_level = 1
    if not level1:
        ken.status = "closed"
        yield ken
        return
    yield ken
    m = 1
    while True:
        top = ken.levels[m]
        lower = [a for lv in range(1, m) for a in ken.levels[lv]]
        made: list[int] = []
        for ac in frag.antichains(top, lower, steps):
            agg = ft.agg(ac)
            for u in admissible_valuations(frag, ac):
                steps.tick()
                t = cc.root_type(agg, u)
                if t >> bit & 1:
                    nid = frag.key.get((ac, u))
                    if nid is None:
                        if len(frag) >= budget.node_count:
                            raise BudgetExceeded("node_count", budget.node_count, ken)
                        nid = frag.mk_node(ac, u)
                    ft._t[nid] = t
                    made.append(nid)
        m += 1
        if not made:
            ken.status = "closed"
            ken.open_level = None
            yield ken
            return
        ken.levels[m] = sorted(made)
        ken.open_level = m
        yield ken


def enumerate_k(phi: Formula, n: int | None = None, frag: UFragment | None = None,
                level_budget: int | None = None, budget: Budget | None = None) -> KEnumeration:
    """k(phi) level by level up to ``level_budget`` levels (closed if it runs out first)."""
    budget = budget or default_budget()
    depth = level_budget or budget.level_depth
    ken = None
    for ken in iter_k(phi, n, frag, budget):
        if ken.closed or max(ken.levels) >= depth:
            break
    return ken


def areminimal_violations(counts: dict[int, int]) -> list[int]:
    """Levels m with exactly one forcer but a forcer at some level >= m + 2."""
    bad = []
    for m, c in counts.items():
        if c == 1 and any(counts.get(m2, 0) for m2 in counts if m2 >= m + 2):
            bad.append(m)
    return bad


def refute_in_fragment(frag: UFragment, phi: Formula, psi: Formula) -> int | None:
    """A stored node forcing ``phi`` but not ``psi``, if the fragment already holds one."""
    goal = implies(phi, psi)
    ft = fragment_types(frag, goal)
    i, j = ft.cc.closure.index[phi], ft.cc.closure.index[psi]
    for a in range(len(frag)):
        t = ft.of(a)
        if t >> i & 1 and not t >> j & 1:
            return a
    return None


def entails_in(frag: UFragment, phi: Formula, psi: Formula,
               budget: Budget | None = None) -> Entailment:
    """``entails`` that first looks for a refuting node among the stored ones.

    Refuting through the fragment avoids saturating a large left-hand side
    when a small countermodel is already at hand; validity still goes
    through the full decision procedure.
    """
    if phi is psi or psi.kind is Kind.TOP or phi.kind is Kind.BOT or quick_valid(phi, psi):
        return Entailment(True, method="syntactic")
    a = refute_in_fragment(frag, phi, psi)
    if a is not None:
        model, _ = frag.to_model().restrict_up(a)
        ft = force(model, implies(phi, psi))
        if not ft.forces(0, phi) or ft.forces(0, psi):
            raise AssertionError(f"fragment node {a} failed to refute {phi} |- {psi}")
        return Entailment(False, model, method="fragment")
    return entails(phi, psi, budget=budget)


def strictly_below_in(frag: UFragment, phi: Formula, psi: Formula,
                      budget: Budget | None = None) -> bool:
    return bool(entails_in(frag, phi, psi, budget)) and not entails_in(frag, psi, phi, budget)
