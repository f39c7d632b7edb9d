"""Realized-type saturation: entailment, join-irreducibility, decomposition.

A *type* is the set of subformulas (of a fixed closure) forced at a node.
The type at the root of a finite Kripke model is fixed by the root's
valuation plus, for each implication, whether every immediate successor
forces it; so a set R of successor types enters only through the bitwise
AND of its members. Saturating the leaf types under

    T = root_type(AND(R), U),   U a subset of the atoms common to R

over the AND-closure of the realized types therefore yields exactly the
types realized in finite models, with no bound on |R|.

Every node forcing ``phi`` has only ``phi``-forcing successors, so the
types containing ``phi`` close up on their own; :func:`realize` with
``containing=phi`` saturates just that part, which is all that entailment
and join-irreducibility need.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

from .budget import Budget, BudgetExceeded, default_budget
from .formula import (Formula, Kind, SubformulaClosure, big_and, big_or, bottom, conj,
                      implies, subformula_closure)
from .semantics import KripkeModel, TypeSet, force
from .universal import subsets


class EmptyC(ValueError):
    """The formula is unsatisfiable (equivalent to F), so C(phi) is empty."""


class CountermodelMismatch(AssertionError):
    """A materialized recipe did not re-verify under the forcing evaluator."""


class CompiledClosure:
    """Subformula closure lowered to flat opcode arrays for repeated evaluation."""

    def __init__(self, closure: SubformulaClosure):
        self.closure = closure
        self.code = []
        self.atom_bits = 0
        self.imp_bits = 0
        self.val_atoms = 0
        self.atom_pos: list[tuple[int, int]] = []
        for i, g in enumerate(closure.members):
            idx = closure.index
            self.code.append((g.kind, idx.get(g.left, -1), idx.get(g.right, -1), g.atom))
            if g.kind is Kind.ATOM:
                self.atom_bits |= 1 << i
                self.val_atoms |= 1 << (g.atom - 1)
                self.atom_pos.append((i, g.atom - 1))
            elif g.kind is Kind.IMP:
                self.imp_bits |= 1 << i
        self.relevant = self.atom_bits | self.imp_bits
        self.width = len(closure)

    def root_type(self, agg: int, valuation: int) -> int:
        """Type at a node with valuation ``valuation`` whose successors' types AND to ``agg``.

        ``agg = -1`` describes a node with no successors.
        """
        t = 0
        for i, (kind, l, r, at) in enumerate(self.code):
            if kind is Kind.ATOM:
                hit = valuation >> (at - 1) & 1
            elif kind is Kind.AND:
                hit = t >> l & t >> r & 1
            elif kind is Kind.OR:
                hit = (t >> l | t >> r) & 1
            elif kind is Kind.IMP:
                hit = agg >> i & 1 and (not t >> l & 1 or t >> r & 1)
            else:
                hit = kind is Kind.TOP
            if hit:
                t |= 1 << i
        return t

    def valuation_of(self, t: int) -> int:
        """Atoms (as a valuation mask) recorded in type or aggregate ``t``."""
        v = 0
        for i, a in self.atom_pos:
            if t >> i & 1:
                v |= 1 << a
        return v


@lru_cache(maxsize=4096)
def compiled(root: Formula) -> CompiledClosure:
    return CompiledClosure(subformula_closure(root))


@dataclass(frozen=True)
class Leaf:
    valuation: int


@dataclass(frozen=True)
class Root:
    members: tuple[int, ...]
    valuation: int


@dataclass
class RealizedTypeTable:
    compiled: CompiledClosure
    types: list[int]
    recipes: list[Leaf | Root]
    containing: Formula | None = None
    aggregates: int = 0
    index: dict[int, int] = field(default_factory=dict)

    @property
    def closure(self) -> SubformulaClosure:
        return self.compiled.closure

    def __len__(self):
        return len(self.types)

    def type_set(self, idx: int) -> TypeSet:
        return TypeSet(self.closure, self.types[idx])

    def with_member(self, f: Formula) -> list[int]:
        i = self.closure.index[f]
        return [k for k, t in enumerate(self.types) if t >> i & 1]

    def materialize(self, idx: int, n: int) -> KripkeModel:
        """Explicit finite model whose node 0 realizes type ``idx``."""
        need, stack = set(), [idx]
        while stack:
            k = stack.pop()
            if k in need:
                continue
            need.add(k)
            rec = self.recipes[k]
            if isinstance(rec, Root):
                stack.extend(rec.members)
        # recipes only reference earlier types, so descending order puts the root first
        order = sorted(need, reverse=True)
        pos = {k: p for p, k in enumerate(order)}
        vals, succ = [], []
        for k in order:
            rec = self.recipes[k]
            vals.append(rec.valuation)
            succ.append(tuple(pos[m] for m in rec.members) if isinstance(rec, Root) else ())
        return KripkeModel(n, vals, succ)

    def verify(self, idx: int, n: int) -> bool:
        model = self.materialize(idx, n)
        return force(model, self.closure.root).bits[0] == self.types[idx]


def realize(phi: Formula, containing: Formula | None = None,
            budget: Budget | None = None) -> RealizedTypeTable:
    """Saturate the realized types over Subform(phi).

    With ``containing`` set, only types that contain that subformula are
    generated; the result is then exactly C(containing) over this closure.
    """
    budget = budget or default_budget()
    cc = compiled(phi)
    if cc.width > budget.width:
        raise BudgetExceeded("width", budget.width, cc.width)
    cbit = None if containing is None else cc.closure.index[containing]
    types: list[int] = []
    recipes: list[Leaf | Root] = []
    index: dict[int, int] = {}
    aggs: dict[int, tuple[int, ...]] = {}
    queue: deque[int] = deque()
    relevant = cc.relevant
    cap = budget.type_count

    def add(t: int, recipe):
        if cbit is not None and not t >> cbit & 1:
            return
        if t in index:
            return
        k = len(types)
        types.append(t)
        recipes.append(recipe)
        index[t] = k
        tp = t & relevant
        fresh = []
        for a, mem in list(aggs.items()):
            na = a & tp
            if na not in aggs:
                aggs[na] = mem + (k,)
                fresh.append(na)
        if tp not in aggs:
            aggs[tp] = (k,)
            fresh.append(tp)
        queue.extend(fresh)
        if len(types) + len(aggs) > cap:
            raise BudgetExceeded("type_count", cap, len(types))

    for u in subsets(cc.val_atoms):
        add(cc.root_type(-1, u), Leaf(u))
    while queue:
        a = queue.popleft()
        members = aggs[a]
        for u in subsets(cc.valuation_of(a)):
            add(cc.root_type(a, u), Root(members, u))
    return RealizedTypeTable(cc, types, recipes, containing, len(aggs), index)


# -- a sound syntactic shortcut ----------------------------------------------

def _quick(hyps: frozenset, goal: Formula, fuel: list[int]) -> bool:
    fuel[0] -= 1
    if fuel[0] < 0:
        return False
    # saturate hypotheses under conjunction elimination and modus ponens
    hs = set(hyps)
    grew = True
    while grew:
        grew = False
        for h in list(hs):
            if h.kind is Kind.AND:
                for c in (h.left, h.right):
                    if c not in hs:
                        hs.add(c)
                        grew = True
            elif h.kind is Kind.IMP and h.left in hs and h.right not in hs:
                hs.add(h.right)
                grew = True
    if goal in hs or goal.kind is Kind.TOP or any(h.kind is Kind.BOT for h in hs):
        return True
    k = goal.kind
    if k is Kind.AND:
        return _quick(frozenset(hs), goal.left, fuel) and _quick(frozenset(hs), goal.right, fuel)
    if k is Kind.IMP:
        return _quick(frozenset(hs | {goal.left}), goal.right, fuel)
    if k is Kind.OR and (_quick(frozenset(hs), goal.left, fuel)
                         or _quick(frozenset(hs), goal.right, fuel)):
        return True
    for h in sorted(hs, key=lambda g: g.uid):
        if h.kind is Kind.OR:
            rest = hs - {h}
            return (_quick(frozenset(rest | {h.left}), goal, fuel)
                    and _quick(frozenset(rest | {h.right}), goal, fuel))
    return False


def quick_valid(phi: Formula, psi: Formula, fuel: int = 64) -> bool:
    """Sound, incomplete check that ``phi |- psi`` using invertible LJ rules only."""
    return _quick(frozenset([phi]), psi, [fuel])


# -- entailment ---------------------------------------------------------------

@dataclass
class Entailment:
    """Result of ``phi |- psi``: valid, or a verified countermodel (node 0 is the witness)."""

    valid: bool
    countermodel: KripkeModel | None = None
    method: str = "saturation"

    def __bool__(self):
        return self.valid


def _n_for(*fs: Formula) -> int:
    from .formula import max_atom
    return max(1, *(max_atom(f) for f in fs))


@lru_cache(maxsize=200_000)
def _entails_cached(phi: Formula, psi: Formula, shortcut: bool, budget: Budget) -> Entailment:
    if phi is psi or psi.kind is Kind.TOP or phi.kind is Kind.BOT:
        return Entailment(True, method="syntactic")
    if shortcut and quick_valid(phi, psi):
        return Entailment(True, method="syntactic")
    goal = implies(phi, psi)
    table = realize(goal, containing=phi, budget=budget)
    j = table.closure.index[psi]
    for k, t in enumerate(table.types):
        if not t >> j & 1:
            model = table.materialize(k, _n_for(phi, psi))
            ft = force(model, goal)
            if not ft.forces(0, phi) or ft.forces(0, psi):
                raise CountermodelMismatch(f"recipe for {phi} |/- {psi} failed re-verification")
            return Entailment(False, model)
    return Entailment(True)


def entails(phi: Formula, psi: Formula, n: int | None = None,
            budget: Budget | None = None, shortcut: bool = True) -> Entailment:
    """Decide ``phi |- psi`` intuitionistically."""
    if n is not None and _n_for(phi, psi) > n:
        raise ValueError(f"formulas mention atoms beyond n={n}")
    return _entails_cached(phi, psi, shortcut, budget or default_budget())


def equivalent(phi: Formula, psi: Formula, n: int | None = None,
               budget: Budget | None = None) -> bool:
    return bool(entails(phi, psi, n, budget)) and bool(entails(psi, phi, n, budget))


def strictly_below(phi: Formula, psi: Formula, budget: Budget | None = None) -> bool:
    return bool(entails(phi, psi, budget=budget)) and not entails(psi, phi, budget=budget)


# -- join-irreducibility -------------------------------------------------------

def minimal_masks(masks: list[int]) -> list[int]:
    out = []
    for m in sorted(set(masks), key=lambda x: (bin(x).count("1"), x)):
        if not any(o & ~m == 0 for o in out):
            out.append(m)
    return out


@dataclass
class JoinIrreducibility:
    irreducible: bool
    mintype: TypeSet | None
    minimal_types: list[TypeSet]
    c_size: int


def c_of(phi: Formula, budget: Budget | None = None) -> RealizedTypeTable:
    """C(phi): the realized types over Subform(phi) that contain phi."""
    return realize(phi, containing=phi, budget=budget)


def is_join_irreducible(phi: Formula, n: int | None = None,
                        budget: Budget | None = None) -> JoinIrreducibility:
    table = c_of(phi, budget)
    if not table.types:
        raise EmptyC(f"{phi} is unsatisfiable")
    mins = minimal_masks(table.types)
    sets = [TypeSet(table.closure, m) for m in mins]
    if len(mins) == 1:
        return JoinIrreducibility(True, sets[0], sets, len(table))
    return JoinIrreducibility(False, None, sets, len(table))


def mintype(phi: Formula, budget: Budget | None = None) -> TypeSet:
    ji = is_join_irreducible(phi, budget=budget)
    if not ji.irreducible:
        raise ValueError(f"{phi} is not join-irreducible")
    return ji.mintype


class DecompositionError(AssertionError):
    pass


def decompose(phi: Formula, n: int | None = None, budget: Budget | None = None,
              verify: bool = True) -> list[Formula]:
    """Join-irreducible components: one conjunction per minimal type of C(phi)."""
    table = c_of(phi, budget)
    if not table.types:
        return []
    mins = minimal_masks(table.types)
    comps = [big_and(TypeSet(table.closure, m).members()) for m in mins]
    if verify:
        check_decomposition(phi, comps, budget)
    return comps


def check_decomposition(phi: Formula, comps: list[Formula], budget: Budget | None = None):
    joined = big_or(comps)
    if not equivalent(joined, phi, budget=budget):
        raise DecompositionError(f"join of components is not equivalent to {phi}")
    for c in comps:
        if not is_join_irreducible(c, budget=budget).irreducible:
            raise DecompositionError(f"component {c} is not join-irreducible")
        if len(comps) >= 2 and not strictly_below(c, phi, budget):
            raise DecompositionError(f"component {c} is not strictly below {phi}")


def dedupe_equivalent(fs: list[Formula], budget: Budget | None = None) -> list[Formula]:
    out: list[Formula] = []
    for f in fs:
        if not any(equivalent(f, g, budget=budget) for g in out):
            out.append(f)
    return out


def maximal_lower_bounds(phi: Formula, psi: Formula, n: int | None = None,
                         budget: Budget | None = None) -> list[Formula]:
    """Maximal join-irreducibles below both: the entailment-maximal components of phi & psi."""
    comps = dedupe_equivalent(decompose(conj(phi, psi), budget=budget, verify=False), budget)
    return [c for c in comps
            if not any(d is not c and strictly_below(c, d, budget) for d in comps)]


def is_bottom(phi: Formula, budget: Budget | None = None) -> bool:
    return bool(entails(phi, bottom(), budget=budget))
