"""Formulas pinning down the up-set and the down-set complement of a node.

For a node a with immediate successors b_1..b_k and missing atoms M:

    pos(a) = AND w(a)  &  ((OR M | OR_i neg(b_i)) -> OR_i pos(b_i))
    neg(a) = pos(a) -> OR_i pos(b_i)

with leaves handled by the literal description of their valuation. Each
pair is certified semantically by :func:`verify_node_formulas`.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .budget import Budget
from .formula import Formula, atom, big_and, big_or, implies, neg
from .prover import entails, is_join_irreducible
from .semantics import force
from .universal import UFragment


class VerificationFailed(AssertionError):
    def __init__(self, message: str, node: int | None = None, level: int | None = None):
        super().__init__(message)
        self.node = node
        self.level = level


@dataclass(frozen=True)
class NodeFormulaPair:
    node: int
    pos: Formula
    neg: Formula


def node_formulas(frag: UFragment, a: int) -> NodeFormulaPair:
    cache = frag.memo.setdefault("dejongh", {})
    if a in cache:
        return cache[a]
    # children first, without recursion
    stack = [a]
    while stack:
        b = stack[-1]
        missing = [s for s in frag.nodes[b].succ if s not in cache]
        if missing:
            stack.extend(missing)
            continue
        stack.pop()
        if b in cache:
            continue
        node = frag.nodes[b]
        u = node.valuation
        have = [atom(i + 1) for i in range(frag.n) if u >> i & 1]
        lack = [atom(i + 1) for i in range(frag.n) if not u >> i & 1]
        if not node.succ:
            pos = big_and(have + [neg(x) for x in lack])
            cache[b] = NodeFormulaPair(b, pos, neg(pos))
            continue
        kids = [cache[s] for s in node.succ]
        ups = big_or([k.pos for k in kids])
        pos = big_and(have + [implies(big_or(lack + [k.neg for k in kids]), ups)])
        cache[b] = NodeFormulaPair(b, pos, implies(pos, ups))
    return cache[a]


def forcing_on(frag: UFragment, phi: Formula) -> list[bool]:
    """Forcing of ``phi`` at every stored node, via the explicit-model evaluator."""
    table = force(frag.to_model(), phi)
    return [table.forces(i) for i in range(len(frag))]


@dataclass
class VerificationReport:
    node: int
    checks: dict[str, bool] = field(default_factory=dict)
    k_counts: dict[int, int] = field(default_factory=dict)
    probes: int = 0

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {"node": self.node, "passed": self.passed, "checks": self.checks,
                "k_counts": {str(m): c for m, c in self.k_counts.items()},
                "probes": self.probes}


def verify_node_formulas(frag: UFragment, pair: NodeFormulaPair, samples: int = 4,
                         budget: Budget | None = None) -> VerificationReport:
    from .structure.kenum import enumerate_k

    a = pair.node
    rep = VerificationReport(a)
    depth = frag.nodes[a].level + 3
    ken = enumerate_k(pair.pos, frag=frag, level_budget=depth, budget=budget)
    rep.k_counts = ken.counts
    rep.checks["k_pos_is_upset"] = ken.closed and set(ken.forcers()) == frag.upset(a)
    if not rep.checks["k_pos_is_upset"]:
        raise VerificationFailed(f"k(pos) differs from the up-set of node {a}", a)
    rep.checks["pos_join_irreducible"] = is_join_irreducible(pair.pos, budget=budget).irreducible
    if not rep.checks["pos_join_irreducible"]:
        raise VerificationFailed(f"pos of node {a} is not join-irreducible", a)
    negs = forcing_on(frag, pair.neg)
    for m in sorted(frag.complete):
        for b in frag.by_level.get(m, []):
            if negs[b] == frag.leq(b, a):
                rep.checks["neg_on_complete_levels"] = False
                raise VerificationFailed(f"neg of node {a} misjudges node {b}", b, m)
    rep.checks["neg_on_complete_levels"] = True
    rep.checks["pos_not_below_neg"] = not entails(pair.pos, pair.neg, budget=budget)
    if not rep.checks["pos_not_below_neg"]:
        raise VerificationFailed(f"pos |- neg for node {a}", a)
    others = [b for m in sorted(frag.complete) for b in frag.by_level.get(m, [])
              if not frag.leq(b, a)]
    step = max(1, len(others) // samples) if samples else len(others) + 1
    for b in others[::step][:samples]:
        rep.probes += 1
        if not entails(node_formulas(frag, b).pos, pair.neg, budget=budget):
            rep.checks["upsets_below_neg"] = False
            raise VerificationFailed(f"pos({b}) does not entail neg({a})", b,
                                     frag.nodes[b].level)
    rep.checks["upsets_below_neg"] = True
    return rep
