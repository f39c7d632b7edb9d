"""One-point extension of an embedded finite bqsl inside J3 (plus a bottom).

Both constructions here build their witness nodes inside a universal-model
fragment and then check every promised property with the decision
procedure; nothing is taken on faith from the construction.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Sequence

from ..budget import Budget, default_budget
from ..dejongh import node_formulas
from ..formula import Formula, Kind, atom, big_and, big_or, conj, implies, max_atom, neg, top
from ..prover import (c_of, entails, is_join_irreducible, maximal_lower_bounds,
                      strictly_below)
from ..universal import UFragment, complete_fragment, leaves
from .bqsl import Bqsl
from .classify import classify
from .kenum import entails_in, enumerate_k, fragment_types, strictly_below_in
from .triplets import maximal_outside


class WitnessSearchFailed(RuntimeError):
    pass


class PreconditionViolated(ValueError):
    pass


class PostconditionFailed(AssertionError):
    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


def default_fragment(n: int) -> UFragment:
    return complete_fragment(n, 2) if n <= 2 else leaves(n)


class MintypeSource:
    """Nodes of a fragment whose type over Subform(u) is mintype(u)."""

    def __init__(self, frag: UFragment, u: Formula, budget: Budget):
        self.frag = frag
        self.u = u
        self.budget = budget
        ji = is_join_irreducible(u, budget=budget)
        if not ji.irreducible:
            raise PreconditionViolated(f"{u} is not join-irreducible")
        self.mt = ji.mintype
        self.types = fragment_types(frag, u)
        table = c_of(u, budget)
        k = table.types.index(self.mt.bits)
        self.types.of(frag.embed(table.materialize(k, frag.n))[0])

    def atoms(self) -> list[Formula]:
        return [g for g in self.mt.members() if g.kind is Kind.ATOM]

    def is_min(self, a: int) -> bool:
        return self.types.of(a) == self.mt.bits

    def at_level(self, count: int, min_level: int) -> list[int]:
        """``count`` distinct mintype nodes sharing one level >= ``min_level``."""
        frag = self.frag
        by_level: dict[int, list[int]] = {}
        for a in range(len(frag)):
            if self.is_min(a):
                by_level.setdefault(frag.level_of(a), []).append(a)
        wide = [m for m, v in sorted(by_level.items()) if len(v) >= 2]
        if not wide:
            ken = enumerate_k(self.u, frag=frag, budget=self.budget)
            for a in ken.forcers():
                if self.is_min(a) and a not in by_level.get(frag.level_of(a), []):
                    by_level.setdefault(frag.level_of(a), []).append(a)
            wide = [m for m, v in sorted(by_level.items()) if len(v) >= 2]
            if not wide:
                raise WitnessSearchFailed(f"no level holds two mintype nodes of {self.u}")
        m = max(wide)
        row = sorted(by_level[m])
        while m < min_level or len(row) < count:
            nxt = []
            for r in range(2, len(row) + 1):
                for sub in combinations(row, r):
                    x = frag.mk_node(sub)
                    if self.is_min(x) and frag.level_of(x) == m + 1:
                        nxt.append(x)
                    if len(nxt) >= max(count, 3):
                        break
                if len(nxt) >= max(count, 3):
                    break
            if len(nxt) < 2:
                raise WitnessSearchFailed(f"mintype nodes of {self.u} died out at level {m + 1}")
            row, m = sorted(set(nxt)), m + 1
        return row[:count]

    def avoiding(self, psi: Formula) -> int:
        """A node forcing u but not psi, from a countermodel re-embedded in the fragment."""
        e = entails_in(self.frag, self.u, psi, self.budget)
        if e.valid:
            raise PreconditionViolated(f"{self.u} entails {psi}")
        a = self.frag.embed(e.countermodel)[0]
        ok = fragment_types(self.frag, self.u).forces(a, self.u) and \
            not fragment_types(self.frag, psi).forces(a, psi)
        if not ok:
            raise WitnessSearchFailed(f"re-embedded countermodel for {psi} misbehaves")
        return a


def _finite_k(phi: Formula, frag: UFragment, budget: Budget) -> bool:
    try:
        return enumerate_k(phi, frag=frag, budget=budget).closed
    except Exception:  # budget or width: not certified finite
        return False


@dataclass
class IncompWitness:
    formula: Formula
    alphas: list[int]
    gammas: list[int]
    deltas: list[int]
    outside: list[int]
    checks: dict[str, bool] = field(default_factory=dict)


def incomp_witness_details(u_star: Formula, S: Sequence[Formula], n: int | None = None,
                           frag: UFragment | None = None,
                           budget: Budget | None = None) -> IncompWitness:
    budget = budget or default_budget()
    n = n or max(1, max_atom(u_star), *(max_atom(p) for p in S))
    frag = frag if frag is not None else default_fragment(n)
    src = MintypeSource(frag, u_star, budget)
    alphas = [src.avoiding(p) for p in S]
    low = 1 + max((frag.level_of(a) for a in alphas), default=0)
    gammas = src.at_level(4, low)
    deltas = [frag.mk_node(alphas + [g]) for g in gammas[:3]]
    if len(set(deltas)) < 3 or not all(src.is_min(d) for d in deltas):
        raise WitnessSearchFailed("delta nodes are not three distinct mintype nodes")
    inside = set()
    for d in deltas:
        inside |= frag.upset(d)
    top_level = max(frag.level_of(d) for d in deltas)
    outside = maximal_outside(frag, inside, top_level)
    pos = big_or([node_formulas(frag, d).pos for d in deltas])
    rho = big_and([neg(neg(pos))] + [node_formulas(frag, b).neg for b in outside] + src.atoms())
    w = IncompWitness(rho, alphas, gammas, deltas, outside)
    w.checks["below_u"] = bool(entails_in(frag, rho, u_star, budget=budget))
    w.checks["strict"] = not entails_in(frag, u_star, rho, budget=budget)
    w.checks["finite_meets"] = all(_finite_k(conj(rho, p), frag, budget) for p in S)
    if not all(w.checks.values()):
        raise PostconditionFailed("incomparability witness failed its checks", w)
    return w


def incomp_witness(u_star: Formula, S: Sequence[Formula], n: int | None = None,
                   frag: UFragment | None = None, budget: Budget | None = None) -> Formula:
    # J3 (or Unknown within budget) is required of u_star.
    label = classify(u_star, n, budget=budget)
    if label.kind not in ("J3", "Unknown"):
        raise PreconditionViolated(f"{u_star} classifies as {label.kind}, not J3")
    return incomp_witness_details(u_star, S, n, frag, budget).formula


@dataclass
class ExtensionResult:
    formula: Formula
    case: str                       # "direct" | "augmented" | "bottom"
    u_star: Formula
    K: list[Formula]
    L: list[Formula]
    L_used: list[Formula]
    beta: int | None = None
    beta_prime: int | None = None
    chi: IncompWitness | None = None
    checks: dict[str, bool] = field(default_factory=dict)
    audit: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"formula": str(self.formula), "case": self.case, "u_star": str(self.u_star),
                "K": [str(f) for f in self.K], "L": [str(f) for f in self.L],
                "L_used": [str(f) for f in self.L_used], "beta": self.beta,
                "beta_prime": self.beta_prime, "checks": self.checks, "audit": self.audit}


def _meets_inside(phi, psi, L, frag, budget) -> bool:
    """Every join-irreducible in J3 below phi and psi lies below a member of L."""
    for c in maximal_lower_bounds(phi, psi, budget=budget):
        if any(entails_in(frag, c, r, budget=budget) for r in L):
            continue
        if _finite_k(c, frag, budget):
            continue
        if classify(c, budget=budget).kind in ("J1", "J2", "Bottom"):
            continue
        return False
    return True


def fraisse_extend_details(embedded: Sequence[tuple[Hashable, Formula]], Q2: Bqsl,
                           q: Hashable, n: int | None = None, frag: UFragment | None = None,
                           budget: Budget | None = None) -> ExtensionResult:
    budget = budget or default_budget()
    img = dict(embedded)
    if set(Q2.elements) != set(img) | {q} or q in img:
        raise PreconditionViolated("Q2 must add exactly the new element to the embedded set")
    n = n or max(1, *(max_atom(f) for f in img.values()))
    frag = frag if frag is not None else default_fragment(n)
    for a in img:
        for b in img:
            if Q2.leq(a, b) != bool(entails_in(frag, img[a], img[b], budget=budget)):
                raise PreconditionViolated(f"embedding is not order-faithful at ({a}, {b})")
    for a, f in img.items():
        kind = classify(f, n, budget=budget).kind
        if kind not in ("J3", "Bottom") or (kind == "Bottom") != (a == Q2.bottom):
            raise PreconditionViolated(f"image of {a} classifies as {kind}")
    up = [p for p in img if Q2.lt(q, p)]
    side = [p for p in img if not Q2.leq(q, p) and not Q2.leq(p, q)]
    below = [p for p in img if Q2.lt(p, q) and p != Q2.bottom]
    if up:
        u_el = [p for p in up if all(Q2.leq(p, o) for o in up)]
        u_star = img[u_el[0]]
    else:
        u_star = top()
    K = [img[p] for p in side]
    L = [img[p] for p in below]
    max_below = [p for p in below if not any(Q2.lt(p, o) for o in below)]
    src = MintypeSource(frag, u_star, budget)

    if not max_below:
        chi = incomp_witness_details(u_star, K, n, frag, budget)
        res = ExtensionResult(chi.formula, "bottom", u_star, K, L, [], chi=chi)
    else:
        chi = None
        L_used = list(L)
        if len(max_below) == 1:
            chi = incomp_witness_details(u_star, K + L, n, frag, budget)
            L_used.append(chi.formula)
        alphas = [src.avoiding(p) for p in K + L_used]
        low = 1 + max(frag.level_of(a) for a in alphas)
        b1, b2 = src.at_level(2, low)
        beta = frag.mk_node(alphas + [b1])
        beta2 = frag.mk_node(alphas + [b2])
        if not (src.is_min(beta) and src.is_min(beta2)) or frag.comparable(beta, beta2):
            raise WitnessSearchFailed("beta nodes are not incomparable mintype nodes")
        nf = node_formulas(frag, beta)
        phi = big_and(src.atoms() + [implies(nf.neg, big_or(L_used + [nf.pos]))])
        res = ExtensionResult(phi, "augmented" if chi else "direct", u_star, K, L, L_used,
                              beta, beta2, chi)
        res.audit = _decomposition_audit(frag, res, src)
    phi = res.formula
    c = res.checks
    c["strictly_below_u_star"] = strictly_below_in(frag, phi, u_star, budget)
    c["above_L"] = not entails_in(frag, phi, big_or([]), budget).valid and \
        all(strictly_below_in(frag, r, phi, budget) for r in L)
    c["incomparable_with_K"] = all(not entails_in(frag, phi, p, budget=budget) and
                                   not entails_in(frag, p, phi, budget=budget) for p in K)
    c["mlb_through_L"] = all(_meets_inside(phi, p, L, frag, budget) for p in K)
    full = dict(img)
    full[q] = phi
    c["order_matches_Q2"] = all(Q2.leq(a, b) == bool(entails_in(frag, full[a], full[b], budget=budget))
                                for a in full for b in full)
    if res.audit:
        c["decomposition_audit"] = res.audit["equal"]
    if not all(c.values()):
        raise PostconditionFailed(f"extension failed checks: {c}", res)
    return res


def _decomposition_audit(frag: UFragment, res: ExtensionResult, src: MintypeSource) -> dict:
    """Compare k(phi) on stored nodes with R-closure + k(phi_beta) + k(OR L)."""
    nf = node_formulas(frag, res.beta)
    disj = big_or(res.L_used)
    tp, tb, tl = (fragment_types(frag, f) for f in (res.formula, nf.pos, disj))
    need = 0
    for g in src.atoms():
        need |= 1 << (g.atom - 1)
    stored = range(len(frag))
    side = {a for a in stored if tb.forces(a, nf.pos) or tl.forces(a, disj)}
    R = {res.beta}
    grew = True
    while grew:
        grew = False
        for a in stored:
            if a in R or not frag.leq(a, res.beta) or frag.w(a) & need != need:
                continue
            succ = frag.nodes[a].succ
            if any(s in R for s in succ) and all(s in R or s in side for s in succ):
                R.add(a)
                grew = True
    k = {a for a in stored if tp.forces(a, res.formula)}
    return {"equal": k == (R | side), "stored": len(frag), "k_size": len(k), "R_size": len(R)}


def fraisse_extend(embedded: Sequence[tuple[Hashable, Formula]], Q2: Bqsl, q: Hashable,
                   n: int | None = None, frag: UFragment | None = None,
                   budget: Budget | None = None) -> Formula:
    return fraisse_extend_details(embedded, Q2, q, n, frag, budget).formula
