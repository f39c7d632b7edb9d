"""Finite Kripke models: forcing, types, and a brute-force countermodel oracle."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

from .budget import BudgetExceeded
from .formula import Formula, Kind, SubformulaClosure, iter_dag, max_atom, subformula_closure


class InvalidModel(ValueError):
    pass


def atoms_of_mask(mask: int) -> list[int]:
    return [i + 1 for i in range(mask.bit_length()) if mask >> i & 1]


def mask_of_atoms(atoms: Iterable[int]) -> int:
    m = 0
    for a in atoms:
        m |= 1 << (a - 1)
    return m


@dataclass
class KripkeModel:
    """Nodes ``0..len-1``; ``succ[i]`` lists immediate successors (nodes above i).

    Valuations are atom bitmasks (bit ``k-1`` is ``x_k``).
    """

    n: int
    valuations: list[int]
    succ: list[tuple[int, ...]]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __len__(self):
        return len(self.valuations)

    def add_node(self, valuation: int, successors: Sequence[int] = ()) -> int:
        self.valuations.append(valuation)
        self.succ.append(tuple(successors))
        self._cache.clear()
        return len(self.valuations) - 1

    def topo_order(self) -> list[int]:
        """Maximal nodes first; every node after all of its successors."""
        if "topo" in self._cache:
            return self._cache["topo"]
        indeg = [0] * len(self)
        preds: list[list[int]] = [[] for _ in range(len(self))]
        for i, ss in enumerate(self.succ):
            for j in ss:
                if not 0 <= j < len(self):
                    raise InvalidModel(f"node {i} has unknown successor {j}")
                preds[j].append(i)
            indeg[i] = len(ss)
        ready = [i for i in range(len(self)) if indeg[i] == 0]
        order = []
        while ready:
            j = ready.pop()
            order.append(j)
            for i in preds[j]:
                indeg[i] -= 1
                if indeg[i] == 0:
                    ready.append(i)
        if len(order) != len(self):
            raise InvalidModel("successor relation has a cycle")
        self._cache["topo"] = order
        return order

    def upsets(self) -> list[int]:
        """Reflexive up-set of every node as a bitmask over node ids."""
        if "up" in self._cache:
            return self._cache["up"]
        up = [0] * len(self)
        for i in self.topo_order():
            m = 1 << i
            for j in self.succ[i]:
                m |= up[j]
            up[i] = m
        self._cache["up"] = up
        return up

    def leq(self, a: int, b: int) -> bool:
        return bool(self.upsets()[a] >> b & 1)

    def levels(self) -> list[int]:
        """Level law: maximal nodes are 1, otherwise 1 + max over successors."""
        lev = [0] * len(self)
        for i in self.topo_order():
            lev[i] = 1 + max((lev[j] for j in self.succ[i]), default=0)
        return lev

    def validate(self):
        self.topo_order()
        for i, ss in enumerate(self.succ):
            for j in ss:
                if self.valuations[i] & ~self.valuations[j]:
                    raise InvalidModel(f"valuation not persistent along {i} < {j}")
                if j == i:
                    raise InvalidModel(f"node {i} is its own successor")
        if self.n < 1:
            raise InvalidModel("n must be positive")
        for v in self.valuations:
            if v >> self.n:
                raise InvalidModel("valuation mentions an atom beyond n")

    def restrict_up(self, root: int) -> tuple[KripkeModel, dict[int, int]]:
        """The rooted submodel generated by ``root`` (root becomes node 0)."""
        members = atoms_of_mask(self.upsets()[root])
        members = [m - 1 for m in members]
        members.remove(root)
        members.insert(0, root)
        remap = {old: new for new, old in enumerate(members)}
        sub = KripkeModel(self.n, [self.valuations[i] for i in members],
                          [tuple(remap[j] for j in self.succ[i]) for i in members])
        return sub, remap

    def to_json(self, levels: Sequence[int] | None = None) -> dict:
        nodes = []
        for i in range(len(self)):
            rec = {"id": i, "atoms": atoms_of_mask(self.valuations[i]),
                   "succ": sorted(self.succ[i])}
            if levels is not None:
                rec["level"] = levels[i]
            nodes.append(rec)
        return {"n": self.n, "nodes": nodes}

    @classmethod
    def from_json(cls, data: dict | str) -> KripkeModel:
        if isinstance(data, str):
            data = json.loads(data)
        ids = [rec["id"] for rec in data["nodes"]]
        if len(set(ids)) != len(ids):
            raise InvalidModel("duplicate node id")
        pos = {nid: k for k, nid in enumerate(ids)}
        try:
            succ = [tuple(pos[s] for s in rec.get("succ", [])) for rec in data["nodes"]]
        except KeyError as e:
            raise InvalidModel(f"unknown successor id {e.args[0]}") from None
        model = cls(int(data["n"]), [mask_of_atoms(rec.get("atoms", [])) for rec in data["nodes"]], succ)
        model.validate()
        return model

    def to_dot(self, name: str = "K") -> str:
        lev = self.levels()
        lines = [f"digraph {name} {{", "  rankdir=BT;"]
        for i in range(len(self)):
            atoms = ",".join(f"x{a}" for a in atoms_of_mask(self.valuations[i]))
            lines.append(f'  n{i} [label="{i}:{lev[i]}:{{{atoms}}}"];')
        for i, ss in enumerate(self.succ):
            for j in sorted(ss):
                lines.append(f"  n{i} -> n{j};")
        lines.append("}")
        return "\n".join(lines)


@dataclass(frozen=True)
class TypeSet:
    """A subset of a subformula closure, stored as a bitmask over its members."""

    closure: SubformulaClosure
    bits: int

    def __contains__(self, f: Formula) -> bool:
        i = self.closure.index.get(f)
        return i is not None and bool(self.bits >> i & 1)

    def __le__(self, other: TypeSet) -> bool:
        return self.bits & ~other.bits == 0

    def __lt__(self, other: TypeSet) -> bool:
        return self <= other and self.bits != other.bits

    def __len__(self):
        return bin(self.bits).count("1")

    def members(self) -> list[Formula]:
        return [g for i, g in enumerate(self.closure.members) if self.bits >> i & 1]

    def __repr__(self):
        return "TypeSet({" + ", ".join(map(str, self.members())) + "})"


@dataclass
class ForcingTable:
    model: KripkeModel
    root: Formula
    closure: SubformulaClosure
    bits: list[int]

    def forces(self, node: int, f: Formula | None = None) -> bool:
        i = self.closure.index[self.root if f is None else f]
        return bool(self.bits[node] >> i & 1)

    def k(self, f: Formula | None = None) -> list[int]:
        return [a for a in range(len(self.model)) if self.forces(a, f)]


def force(model: KripkeModel, phi: Formula) -> ForcingTable:
    """Evaluate every subformula of ``phi`` at every node of ``model``.

    Nodes are processed maximal-first so an implication only needs the
    local check plus the implication bit at each immediate successor.
    """
    model.validate()
    if max_atom(phi) > model.n:
        raise InvalidModel(f"formula mentions atoms beyond n={model.n}")
    closure = subformula_closure(phi)
    code = [(g.kind, closure.index.get(g.left), closure.index.get(g.right), g.atom)
            for g in closure.members]
    bits = [0] * len(model)
    for a in model.topo_order():
        val = model.valuations[a]
        succ_and = -1
        for b in model.succ[a]:
            succ_and &= bits[b]
        t = 0
        for i, (kind, l, r, at) in enumerate(code):
            if kind is Kind.ATOM:
                hit = val >> (at - 1) & 1
            elif kind is Kind.TOP:
                hit = 1
            elif kind is Kind.BOT:
                hit = 0
            elif kind is Kind.AND:
                hit = t >> l & t >> r & 1
            elif kind is Kind.OR:
                hit = (t >> l | t >> r) & 1
            else:
                hit = succ_and >> i & 1 and (not t >> l & 1 or t >> r & 1)
            if hit:
                t |= 1 << i
        bits[a] = t
    return ForcingTable(model, phi, closure, bits)


def type_of(table: ForcingTable, node: int) -> TypeSet:
    return TypeSet(table.closure, table.bits[node])


def forces(model: KripkeModel, node: int, phi: Formula) -> bool:
    return force(model, phi).forces(node)


# -- brute-force oracle -----------------------------------------------------

def _rooted_orders(k: int) -> list[list[tuple[int, int]]]:
    """Strict orders on 0..k-1 with 0 below everything and i<j for every pair (i, j)."""
    if k == 1:
        return [[]]
    inner = [(i, j) for i in range(1, k) for j in range(i + 1, k)]
    out = []
    for r in range(len(inner) + 1):
        for chosen in itertools.combinations(inner, r):
            rel = set(chosen)
            if all((i, l) in rel for (i, j) in rel for (j2, l) in rel if j2 == j):
                out.append(sorted(rel | {(0, j) for j in range(1, k)}))
    return out


def _hasse(k: int, rel: list[tuple[int, int]]) -> list[tuple[int, ...]]:
    rs = set(rel)
    succ = []
    for i in range(k):
        above = [j for j in range(k) if (i, j) in rs]
        succ.append(tuple(j for j in above
                          if not any((i, m) in rs and (m, j) in rs for m in above)))
    return succ


def _upsets_of(k: int, rel: list[tuple[int, int]]) -> list[int]:
    rs = set(rel)
    out = []
    for m in range(1 << k):
        if all(not (m >> i & 1) or m >> j & 1 for (i, j) in rs):
            out.append(m)
    return out


class ModelUniverse:
    """Every rooted finite Kripke model with at most ``max_nodes`` nodes over n atoms.

    Models are generated up to the cheap natural-labelling normalisation
    only, so isomorphic copies recur; any node of any finite model is
    equivalent to the root of its (rooted) up-set, so roots are the only
    witnesses that need checking. Forcing uses the textbook clause
    quantifying over the whole up-set, evaluated for all nodes at once.
    """

    def __init__(self, n: int, max_nodes: int, step_budget: int = 2_000_000):
        self.n = n
        self.max_nodes = max_nodes
        self.models: list[KripkeModel] = []
        starts: list[int] = []
        vals: list[int] = []
        rows, cols = [], []
        steps = 0
        offset = 0
        for k in range(1, max_nodes + 1):
            for rel in _rooted_orders(k):
                succ = _hasse(k, rel)
                ups = _upsets_of(k, rel)
                leq = [(i, i) for i in range(k)] + list(rel)
                for combo in itertools.product(ups, repeat=n):
                    steps += 1
                    if steps > step_budget:
                        raise BudgetExceeded("search_steps", step_budget, len(self.models))
                    node_vals = [sum(1 << a for a in range(n) if combo[a] >> i & 1) for i in range(k)]
                    self.models.append(KripkeModel(n, node_vals, list(succ)))
                    starts.append(offset)
                    vals.extend(node_vals)
                    rows.extend(offset + i for i, _ in leq)
                    cols.extend(offset + j for _, j in leq)
                    offset += k
        self.size = offset
        self.roots = np.array(starts, dtype=np.int64)
        self.valuations = np.array(vals, dtype=np.int64)
        self.upset = sparse.csr_matrix(
            (np.ones(len(rows), dtype=np.int32), (rows, cols)), shape=(offset, offset))
        self._masks: dict[int, np.ndarray] = {}

    cache_limit = 50_000

    def mask(self, phi: Formula) -> np.ndarray:
        """Boolean forcing vector of ``phi`` over every node of every model."""
        if len(self._masks) > self.cache_limit:
            self._masks.clear()
        for g in iter_dag(phi):
            if g.uid in self._masks:
                continue
            k = g.kind
            if k is Kind.BOT:
                m = np.zeros(self.size, dtype=bool)
            elif k is Kind.TOP:
                m = np.ones(self.size, dtype=bool)
            elif k is Kind.ATOM:
                if g.atom > self.n:
                    raise InvalidModel(f"atom x{g.atom} beyond n={self.n}")
                m = (self.valuations >> (g.atom - 1) & 1).astype(bool)
            elif k is Kind.AND:
                m = self._masks[g.left.uid] & self._masks[g.right.uid]
            elif k is Kind.OR:
                m = self._masks[g.left.uid] | self._masks[g.right.uid]
            else:
                bad = self._masks[g.left.uid] & ~self._masks[g.right.uid]
                m = (self.upset @ bad.astype(np.int32)) == 0
            self._masks[g.uid] = m
        return self._masks[phi.uid]

    def countermodel_index(self, phi: Formula, psi: Formula) -> int | None:
        witness = self.mask(phi)[self.roots] & ~self.mask(psi)[self.roots]
        hits = np.flatnonzero(witness)
        return int(hits[0]) if len(hits) else None


@lru_cache(maxsize=8)
def model_universe(n: int, max_nodes: int) -> ModelUniverse:
    return ModelUniverse(n, max_nodes)


def brute_countermodel(phi: Formula, psi: Formula, max_nodes: int,
                       n: int | None = None) -> KripkeModel | None:
    """Smallest rooted model whose root forces ``phi`` but not ``psi``.

    Returns ``None`` (not found) when no model with at most ``max_nodes``
    nodes separates them. The witness node is always node 0.
    """
    if max_nodes > 5:
        raise ValueError("brute_countermodel is limited to max_nodes <= 5")
    if n is None:
        n = max(1, max_atom(phi), max_atom(psi))
    universe = model_universe(n, max_nodes)
    idx = universe.countermodel_index(phi, psi)
    if idx is None:
        return None
    m = universe.models[idx]
    return KripkeModel(m.n, list(m.valuations), list(m.succ))
