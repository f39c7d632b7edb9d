"""Well-positioned triplets and the two-per-level sets they generate."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from ..universal import UFragment, admissible_valuations
from .kenum import KEnumeration


@dataclass(frozen=True)
class Triplet:
    alpha: int
    beta: int
    gamma: int

    @property
    def ids(self) -> tuple[int, int, int]:
        return (self.alpha, self.beta, self.gamma)


def well_positioned_failures(frag: UFragment, t: Triplet) -> list[str]:
    a, b, g = t.ids
    bad = []
    if len({a, b, g}) < 3:
        bad.append("distinct")
    la, lb, lg = (frag.level_of(x) for x in t.ids)
    if not (la == lb and lg == la + 1):
        bad.append("levels")
    if not (g != b and frag.leq(g, b)):
        bad.append("gamma_below_beta")
    if g != a and frag.leq(g, a):
        bad.append("gamma_not_below_alpha")
    if not frag.w(a) == frag.w(b) == frag.w(g):
        bad.append("valuations")
    return bad


def is_well_positioned(frag: UFragment, t: Triplet) -> bool:
    return not well_positioned_failures(frag, t)


def find_triplets(source: UFragment | KEnumeration, require_mintype: bool = False,
                  mintype_bits: int | None = None) -> list[Triplet]:
    """Every well-positioned triplet among stored nodes (or stored forcers).

    With ``require_mintype`` the three types over Subform(phi) must all equal
    mintype(phi). Output is sorted by (level, alpha, beta, gamma).
    """
    if isinstance(source, KEnumeration):
        frag = source.frag
        by_level = source.levels
        if require_mintype and mintype_bits is None:
            from ..prover import mintype
            mintype_bits = mintype(source.phi).bits
        ok = (lambda x: source.type_of(x) == mintype_bits) if require_mintype else (lambda x: True)
    else:
        if require_mintype:
            raise ValueError("mintype filtering needs a k-enumeration")
        frag = source
        by_level = frag.by_level
        ok = lambda x: True  # noqa: E731
    out = []
    for m in sorted(by_level):
        upper = by_level.get(m + 1, [])
        here = [x for x in by_level[m] if ok(x)]
        for g in upper:
            if not ok(g):
                continue
            for b in frag.nodes[g].succ:
                if frag.level_of(b) != m or not ok(b) or frag.w(b) != frag.w(g):
                    continue
                for a in here:
                    if a != b and frag.w(a) == frag.w(g) and not frag.leq(g, a):
                        out.append(Triplet(a, b, g))
    out.sort(key=lambda t: (frag.level_of(t.alpha), t.ids))
    return out


def triplet_from(frag: UFragment, alpha: int, beta: int, delta: int) -> Triplet:
    """(alpha, beta, node({beta, delta})) for three distinct same-level nodes."""
    return Triplet(alpha, beta, frag.mk_node([beta, delta]))


def smallest_triplet(frag: UFragment, level: int = 2) -> Triplet:
    """Lexicographically first (alpha, beta, delta) at ``level`` giving a well-positioned
    (alpha, beta, node({beta, delta})), restricted to the empty valuation."""
    row = [x for x in sorted(frag.by_level[level]) if frag.w(x) == 0]
    for a in row:
        for b in row:
            for d in row:
                if len({a, b, d}) == 3:
                    t = triplet_from(frag, a, b, d)
                    if is_well_positioned(frag, t):
                        return t
    raise LookupError(f"no triplet with empty valuation at level {level}")


def reference_triplet(frag: UFragment) -> Triplet:
    """For n >= 2: (node({v1,v2}), node({v1,v12}), node({beta,v2})), all empty-valued.

    For n = 1 the first triplet found among stored nodes.
    """
    if frag.n < 2:
        found = find_triplets(frag)
        if not found:
            raise LookupError("no triplet among stored nodes")
        return found[0]
    v1, v2, v12 = frag.leaf([1]), frag.leaf([2]), frag.leaf([1, 2])
    a = frag.mk_node([v1, v2], 0)
    b = frag.mk_node([v1, v12], 0)
    return Triplet(a, b, frag.mk_node([b, v2], 0))


def disjoint_triplets(frag: UFragment, count: int, level: int = 2) -> list[Triplet]:
    """``count`` triplets built from pairwise disjoint same-level triples."""
    row = [x for x in sorted(frag.by_level[level]) if frag.w(x) == 0]
    if len(row) < 3 * count:
        raise LookupError(f"level {level} has only {len(row)} empty-valued nodes")
    return [triplet_from(frag, *row[3 * j:3 * j + 3]) for j in range(count)]


@dataclass
class ASet:
    """A_{alpha,beta,gamma} through ``depth``: the chi chain plus the up-sets of alpha, gamma."""

    frag: UFragment
    triplet: Triplet
    depth: int
    chi: dict[tuple[int, int], int] = field(default_factory=dict)  # (i, m) -> node

    @property
    def base(self) -> int:
        return self.frag.level_of(self.triplet.alpha)

    def seed_up(self) -> set[int]:
        return self.frag.upset(self.triplet.alpha) | self.frag.upset(self.triplet.gamma)

    def members(self) -> set[int]:
        return self.seed_up() | set(self.chi.values())

    def __contains__(self, a: int) -> bool:
        if a in self.chi.values():
            return True
        t = self.triplet
        return self.frag.leq(t.alpha, a) or self.frag.leq(t.gamma, a)

    def by_level(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for a in self.members():
            out.setdefault(self.frag.level_of(a), []).append(a)
        return {m: sorted(v) for m, v in sorted(out.items())}

    def counts(self) -> dict[int, int]:
        return {m: len(v) for m, v in self.by_level().items()}

    def check(self):
        L = self.base
        for (i, m), x in self.chi.items():
            if self.frag.level_of(x) != m:
                raise AssertionError(f"chi_{i}^{m} sits at level {self.frag.level_of(x)}")
        counts = self.counts()
        for m in range(L + 2, self.depth + 1):
            if counts.get(m, 0) != 2:
                raise AssertionError(f"A has {counts.get(m, 0)} nodes at level {m}")


def build_aset(frag: UFragment, t: Triplet, depth: int) -> ASet:
    if not is_well_positioned(frag, t):
        raise ValueError(f"triplet {t.ids} is not well-positioned")
    L = frag.level_of(t.alpha)
    if depth < L + 1:
        raise ValueError("depth must reach the level of gamma")
    A = ASet(frag, t, depth)
    c = A.chi
    c[0, L], c[1, L], c[1, L + 1] = t.alpha, t.beta, t.gamma
    for m in range(L, depth):
        c[0, m + 1] = frag.mk_node([c[0, m], c[1, m]])
        if m + 2 <= depth:
            c[1, m + 2] = frag.mk_node([c[0, m], c[1, m + 1]])
    A.check()
    return A


def maximal_outside(frag: UFragment, inside, top_level: int) -> list[int]:
    """Maximal nodes of {rho : Lev(rho) <= top_level, rho not in D} for up-closed D.

    A maximal such rho has every strict successor in D, so it is either a leaf
    outside D or node(S', U') for a nonempty antichain S' of D-nodes at levels
    below ``top_level``. Only that small space is searched; nothing outside D
    beyond those candidates is ever built.
    """
    out = [a for a in frag.by_level[1] if a not in inside]
    base = sorted(a for a in _stored_members(frag, inside) if frag.level_of(a) < top_level)
    for ac in frag.antichains(base):
        for u in admissible_valuations(frag, ac):
            key = frag.key.get((ac, u))
            nid = key if key is not None else frag.mk_node(ac, u)
            if nid not in inside:
                out.append(nid)
    return sorted(set(out))


def _stored_members(frag: UFragment, inside) -> list[int]:
    if hasattr(inside, "members"):
        return list(inside.members())
    return list(inside)
