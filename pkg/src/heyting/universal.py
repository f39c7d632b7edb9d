"""Lazily built fragments of Bellissima's universal model K_n.

A node is determined by its set of immediate successors (an antichain of
previously built nodes) and its valuation. Leaves carry every valuation
over x1..xn and have ids equal to their valuation mask, so in K_2 the
leaves are ``0 = {}``, ``1 = {x1}``, ``2 = {x2}``, ``3 = {x1, x2}``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .budget import Budget, BudgetExceeded, StepCounter, default_budget
from .semantics import KripkeModel, atoms_of_mask, mask_of_atoms


class InvalidValuation(ValueError):
    pass


class EmptySuccessorSet(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class UNode:
    id: int
    valuation: int
    succ: tuple[int, ...]
    level: int


def subsets(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` in increasing numeric order."""
    bits = [1 << i for i in range(mask.bit_length()) if mask >> i & 1]
    for k in range(1 << len(bits)):
        s = 0
        for i, b in enumerate(bits):
            if k >> i & 1:
                s |= b
        yield s


def admissible_valuations(frag: UFragment, antichain: Sequence[int]) -> list[int]:
    """Valuations U allowed for a node whose immediate successors are ``antichain``."""
    common = -1
    for a in antichain:
        common &= frag.nodes[a].valuation
    if len(antichain) == 1:
        return [u for u in subsets(common) if u != common]
    return sorted(subsets(common))


class UFragment:
    def __init__(self, n: int):
        if not 1 <= n <= 16:
            raise ValueError("n must lie in 1..16")
        self.n = n
        self.nodes: list[UNode] = []
        self.key: dict[tuple[tuple[int, ...], int], int] = {}
        self.by_level: dict[int, list[int]] = {}
        self.complete: set[int] = set()
        self.up: list[int] = []
        self.memo: dict = {}

    def __len__(self):
        return len(self.nodes)

    def __repr__(self):
        counts = {m: len(v) for m, v in sorted(self.by_level.items())}
        return f"UFragment(n={self.n}, level_counts={counts}, complete={sorted(self.complete)})"

    # -- construction ---------------------------------------------------

    def _store(self, succ: tuple[int, ...], valuation: int, level: int) -> int:
        nid = len(self.nodes)
        self.nodes.append(UNode(nid, valuation, succ, level))
        self.key[(succ, valuation)] = nid
        self.by_level.setdefault(level, []).append(nid)
        m = 1 << nid
        for s in succ:
            m |= self.up[s]
        self.up.append(m)
        return nid

    def minimal(self, ids: Iterable[int]) -> tuple[int, ...]:
        ids = sorted(set(ids))
        return tuple(a for a in ids
                     if not any(b != a and self.up[b] >> a & 1 for b in ids))

    def mk_node(self, S: Iterable[int], U: int | None = None) -> int:
        """node(S, U); with ``U=None`` the node(S) convention (common valuation)."""
        S = list(S)
        if not S:
            raise EmptySuccessorSet("node(S, U) needs a nonempty S")
        for a in S:
            if not 0 <= a < len(self.nodes):
                raise KeyError(f"node {a} is not stored")
        mins = self.minimal(S)
        common = -1
        for a in mins:
            common &= self.nodes[a].valuation
        if U is None:
            if len(mins) == 1:
                return mins[0]
            U = common
        if U & ~common:
            raise InvalidValuation("U must be contained in every successor valuation")
        if len(mins) == 1 and U == common:
            raise InvalidValuation("a single successor requires a proper subset valuation")
        existing = self.key.get((mins, U))
        if existing is not None:
            return existing
        level = 1 + max(self.nodes[a].level for a in mins)
        if level in self.complete:
            raise ValueError(f"node missing from complete level {level}")
        return self._store(mins, U, level)

    def leaf(self, atoms: Iterable[int] = ()) -> int:
        return self.key[((), mask_of_atoms(atoms))]

    # -- order queries --------------------------------------------------

    def leq(self, a: int, b: int) -> bool:
        """a <= b in K_n, i.e. b lies in the up-set of a."""
        return bool(self.up[a] >> b & 1)

    def comparable(self, a: int, b: int) -> bool:
        return bool(self.up[a] >> b & 1 or self.up[b] >> a & 1)

    def upset(self, a: int) -> set[int]:
        return {i for i in range(self.up[a].bit_length()) if self.up[a] >> i & 1}

    def downset_within(self, a: int) -> set[int]:
        """Stored nodes below ``a``; relative to this fragment only."""
        return {b for b in range(len(self.nodes)) if self.up[b] >> a & 1}

    def level_of(self, a: int) -> int:
        return self.nodes[a].level

    def w(self, a: int) -> int:
        return self.nodes[a].valuation

    # -- antichains and levels -------------------------------------------

    def antichains(self, required: Sequence[int], optional: Sequence[int] = (),
                   steps: StepCounter | None = None) -> Iterator[tuple[int, ...]]:
        """Antichains of ``required + optional`` containing at least one required node.

        Each antichain is produced once, as a sorted tuple.
        """
        req = set(required)
        order = list(required) + [x for x in optional if x not in req]

        def extend(chosen: list[int], cands: list[int]):
            yield tuple(sorted(chosen))
            for k, x in enumerate(cands):
                if steps is not None:
                    steps.tick()
                rest = [y for y in cands[k + 1:] if not self.comparable(x, y)]
                chosen.append(x)
                yield from extend(chosen, rest)
                chosen.pop()

        for i in range(len(required)):
            first = order[i]
            cands = [y for y in order[i + 1:] if not self.comparable(first, y)]
            yield from extend([first], cands)

    def level_candidates(self, m: int, steps: StepCounter | None = None
                         ) -> Iterator[tuple[tuple[int, ...], int]]:
        """(antichain, valuation) keys for every node of K_n at level ``m >= 2``."""
        for lv in range(1, m):
            if lv not in self.complete:
                raise ValueError(f"level {lv} must be complete before enumerating level {m}")
        top = self.by_level.get(m - 1, [])
        lower = [a for lv in range(1, m - 1) for a in self.by_level.get(lv, [])]
        for ac in self.antichains(top, lower, steps):
            for u in admissible_valuations(self, ac):
                yield ac, u

    def enumerate_level(self, m: int, budget: Budget | None = None) -> list[int]:
        """Store every node of level ``m`` and mark the level complete."""
        budget = budget or default_budget()
        if m in self.complete:
            return list(self.by_level.get(m, []))
        if m == 1:
            raise ValueError("level 1 is created by leaves()")
        steps = StepCounter(budget.search_steps)
        made = []
        for ac, u in self.level_candidates(m, steps):
            nid = self.key.get((ac, u))
            if nid is None:
                if len(self.nodes) >= budget.node_count:
                    raise BudgetExceeded("node_count", budget.node_count, len(made))
                nid = self._store(ac, u, m)
            made.append(nid)
        self.complete.add(m)
        self.by_level[m] = sorted(made)
        return self.by_level[m]

    def count_level(self, m: int, budget: Budget | None = None) -> int:
        """|L^m_n| by streaming over candidates without storing them."""
        budget = budget or default_budget()
        steps = StepCounter(budget.search_steps)
        total = 0
        try:
            for _ in self.level_candidates(m, steps):
                total += 1
                if total > budget.node_count:
                    raise BudgetExceeded("node_count", budget.node_count, total)
        except BudgetExceeded as e:
            raise BudgetExceeded(e.what, e.limit, total) from None
        return total

    def embed(self, model: KripkeModel) -> list[int]:
        """Image of every node of a finite model under the canonical map into K_n.

        The image of x is node(images of its successors, w(x)), collapsing to
        the single successor image when nothing new is added; the map is a
        bounded morphism, so forcing is preserved node by node.
        """
        if model.n > self.n:
            raise ValueError("model uses more atoms than the fragment")
        image = [-1] * len(model.valuations)
        for x in model.topo_order():
            u = model.valuations[x]
            kids = self.minimal(image[s] for s in model.succ[x])
            if not kids:
                image[x] = self.leaf(atoms_of_mask(u))
            elif len(kids) == 1 and self.nodes[kids[0]].valuation == u:
                image[x] = kids[0]
            else:
                image[x] = self.mk_node(kids, u)
        return image

    # -- export ---------------------------------------------------------

    def to_model(self) -> KripkeModel:
        return KripkeModel(self.n, [u.valuation for u in self.nodes],
                           [u.succ for u in self.nodes])

    def to_json(self) -> dict:
        data = self.to_model().to_json(levels=[u.level for u in self.nodes])
        data["complete_levels"] = sorted(self.complete)
        return data

    @classmethod
    def from_json(cls, data: dict | str) -> UFragment:
        if isinstance(data, str):
            data = json.loads(data)
        frag = cls(int(data["n"]))
        recs = sorted(data["nodes"], key=lambda r: r["id"])
        for k, rec in enumerate(recs):
            if rec["id"] != k:
                raise ValueError("fragment node ids must be 0..N-1 in creation order")
            succ = tuple(sorted(rec.get("succ", [])))
            u = mask_of_atoms(rec.get("atoms", []))
            if succ:
                if frag.minimal(succ) != succ:
                    raise ValueError(f"node {k}: successors do not form an antichain")
                level = 1 + max(frag.nodes[s].level for s in succ)
            else:
                level = 1
            if rec.get("level", level) != level:
                raise ValueError(f"node {k}: stored level disagrees with the level law")
            frag._store(succ, u, level)
        frag.complete = set(data.get("complete_levels", []))
        return frag

    def to_dot(self, ids: Iterable[int] | None = None) -> str:
        keep = set(range(len(self.nodes))) if ids is None else set(ids)
        lines = ["digraph K {", "  rankdir=BT;"]
        for a in sorted(keep):
            u = self.nodes[a]
            atoms = ",".join(f"x{x}" for x in atoms_of_mask(u.valuation))
            lines.append(f'  n{a} [label="{a}:{u.level}:{{{atoms}}}"];')
        for a in sorted(keep):
            for s in self.nodes[a].succ:
                if s in keep:
                    lines.append(f"  n{a} -> n{s};")
        lines.append("}")
        return "\n".join(lines)


def leaves(n: int) -> UFragment:
    frag = UFragment(n)
    for u in range(1 << n):
        frag._store((), u, 1)
    frag.complete.add(1)
    return frag


def complete_fragment(n: int, levels: int, budget: Budget | None = None) -> UFragment:
    frag = leaves(n)
    for m in range(2, levels + 1):
        frag.enumerate_level(m, budget)
    return frag
