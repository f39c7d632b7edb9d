"""The formula phi^{alpha,beta,gamma} whose k-set is A_{alpha,beta,gamma}."""
from __future__ import annotations

from ..formula import Formula, atom, big_and, big_or, implies, neg
from ..dejongh import node_formulas
from ..universal import UFragment
from .triplets import ASet, Triplet, build_aset, maximal_outside


def j2_parts(frag: UFragment, t: Triplet) -> dict:
    """The four conjuncts plus the A-set and the max(S) nodes used for psi0.

    psi0 is taken over the maximal elements of S = {rho : Lev(rho) <= L+2,
    rho not in A} instead of all of S. The forcers of AND neg(rho) are the
    nodes below no rho in the conjunction, and every rho in S is below some
    maximal element of S, so both conjunctions have the same k-set.
    """
    A = build_aset(frag, t, frag.level_of(t.alpha) + 2)
    L = A.base
    top = maximal_outside(frag, A, L + 2)
    chis = big_or([node_formulas(frag, A.chi[i, L + 2]).pos for i in (0, 1)])
    u = frag.w(t.alpha)
    psi0 = big_and([node_formulas(frag, r).neg for r in top])
    psi1 = neg(neg(chis))
    psi2 = big_and([atom(i + 1) for i in range(frag.n) if u >> i & 1])
    psi3 = big_and([implies(atom(i + 1), chis) for i in range(frag.n) if not u >> i & 1])
    return {"aset": A, "max_outside": top, "psi": (psi0, psi1, psi2, psi3)}


def build_j2_formula(frag: UFragment, t: Triplet) -> Formula:
    return big_and(list(j2_parts(frag, t)["psi"]))
