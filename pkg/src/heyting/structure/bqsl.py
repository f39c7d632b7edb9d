"""Finite bounded quasisemilattices, embeddings, and one-point extension chains."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np


class NotABqsl(ValueError):
    pass


class NotAnEmbedding(ValueError):
    pass


@dataclass
class Bqsl:
    elements: list[Hashable]
    order: np.ndarray               # order[i, j] is elements[i] <= elements[j]
    bottom: Hashable

    def __post_init__(self):
        self.order = np.asarray(self.order, dtype=bool)
        self.pos = {e: i for i, e in enumerate(self.elements)}

    @classmethod
    def from_relations(cls, elements: Sequence[Hashable], less: Sequence[tuple],
                       bottom: Hashable | None = None) -> Bqsl:
        """Reflexive-transitive closure of the strict pairs ``less``; bottom inferred if omitted."""
        els = list(elements)
        pos = {e: i for i, e in enumerate(els)}
        m = np.eye(len(els), dtype=bool)
        for a, b in less:
            m[pos[a], pos[b]] = True
        for k in range(len(els)):
            m |= m[:, [k]] & m[[k], :]
        if bottom is None:
            mins = [e for e in els if m[pos[e]].all()]
            if len(mins) != 1:
                raise NotABqsl("no unique minimum")
            bottom = mins[0]
        return cls(els, m, bottom)

    def leq(self, a, b) -> bool:
        return bool(self.order[self.pos[a], self.pos[b]])

    def lt(self, a, b) -> bool:
        return a != b and self.leq(a, b)

    def lower_bounds(self, a, b) -> list:
        col = self.order[:, self.pos[a]] & self.order[:, self.pos[b]]
        return [self.elements[i] for i in np.flatnonzero(col)]

    def mlb(self, a, b) -> list:
        lbs = self.lower_bounds(a, b)
        return [x for x in lbs if not any(self.lt(x, y) for y in lbs)]

    def restrict(self, keep: Sequence[Hashable]) -> Bqsl:
        idx = [self.pos[e] for e in keep]
        return Bqsl(list(keep), self.order[np.ix_(idx, idx)], self.bottom)

    def to_json(self) -> dict:
        return {"elements": [str(e) for e in self.elements], "bottom": str(self.bottom),
                "less": [[str(a), str(b)] for a in self.elements for b in self.elements
                         if self.lt(a, b)]}


def check_bqsl(q: Bqsl) -> dict:
    m = q.order
    n = len(q.elements)
    report = {
        "reflexive": bool(np.diag(m).all()),
        "antisymmetric": bool(not (m & m.T & ~np.eye(n, dtype=bool)).any()),
        "transitive": bool(not ((m.astype(int) @ m.astype(int) > 0) & ~m).any()),
        "bottom_is_minimum": q.bottom in q.pos and bool(m[q.pos[q.bottom]].all()),
    }
    covered = True
    for a in q.elements:
        for b in q.elements:
            tops = q.mlb(a, b)
            if not tops or any(not any(q.leq(x, t) for t in tops) for x in q.lower_bounds(a, b)):
                covered = False
    report["mlb_cover"] = covered
    report["ok"] = all(report.values())
    if not report["ok"]:
        raise NotABqsl(f"bqsl check failed: {report}")
    return report


def is_embedding(small: Bqsl, big: Bqsl) -> bool:
    """Inclusion of ``small`` in ``big`` preserves order and every pair's maximal lower bounds."""
    for a in small.elements:
        for b in small.elements:
            if small.leq(a, b) != big.leq(a, b):
                return False
            if set(small.mlb(a, b)) != set(big.mlb(a, b)):
                return False
    return small.bottom == big.bottom


def one_point_chain(q_small: Sequence[Hashable] | Bqsl, q_big: Bqsl) -> list[Bqsl]:
    """Q* = Q_0 < Q_1 < ... < Q** adding, each time, a minimal remaining element."""
    check_bqsl(q_big)
    start = list(q_small.elements if isinstance(q_small, Bqsl) else q_small)
    missing = [e for e in start if e not in q_big.pos]
    if missing:
        raise NotAnEmbedding(f"elements {missing} are not in the target")
    current = q_big.restrict(start)
    check_bqsl(current)
    if not is_embedding(current, q_big):
        raise NotAnEmbedding("the starting set is not a sub-bqsl of the target")
    chain = [current]
    rest = [e for e in q_big.elements if e not in set(start)]
    while rest:
        q = next(e for e in rest if not any(q_big.lt(o, e) for o in rest))
        rest.remove(q)
        nxt = q_big.restrict(current.elements + [q])
        check_bqsl(nxt)
        if not is_embedding(current, nxt):
            raise NotAnEmbedding(f"adding {q!r} changes maximal lower bounds")
        chain.append(nxt)
        current = nxt
    return chain
