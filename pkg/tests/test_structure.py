import numpy as np
import pytest

from heyting.formula import atom, conj, implies, neg, parse, top
from heyting.prover import entails, equivalent, is_join_irreducible
from heyting.structure import (Bqsl, NotABqsl, PreconditionViolated, areminimal_violations,
                               build_aset, build_j2_formula, check_bqsl, classify,
                               disjoint_triplets, enumerate_k, find_triplets, fraisse_extend_details,
                               incomp_witness, incomp_witness_details, is_embedding,
                               is_well_positioned, j2_parts, one_point_chain, reference_triplet)
from heyting.structure.triplets import Triplet
from heyting.universal import complete_fragment, leaves

x1, x2 = atom(1), atom(2)


# -- k-enumeration ---------------------------------------------------------

def test_kenum_closes_for_a_leaf():
    ken = enumerate_k(conj(x1, x2), 2)
    assert ken.closed and ken.forcers() == [3]


def test_kenum_of_single_atom_stays_open():
    assert enumerate_k(x1, 1).closed
    ken = enumerate_k(x1, 2, level_budget=6)
    assert not ken.closed
    assert ken.counts == {m: 2 for m in range(1, 7)}
    assert areminimal_violations(ken.counts) == []
    assert areminimal_violations({1: 2, 2: 1, 3: 1, 4: 2}) == [2]


# -- triplets and A-sets ---------------------------------------------------

def test_reference_triplet_is_well_positioned():
    frag = complete_fragment(2, 2)
    t = reference_triplet(frag)
    assert is_well_positioned(frag, t)
    assert frag.level_of(t.alpha) == frag.level_of(t.beta) == 2
    assert frag.level_of(t.gamma) == 3


def test_k1_has_well_positioned_triplets(k1):
    found = find_triplets(k1)
    assert found and found[0].ids == (2, 3, 5)
    assert all(is_well_positioned(k1, t) for t in found)


def test_valuation_mismatch_is_not_well_positioned():
    frag = complete_fragment(2, 2)
    t = reference_triplet(frag)
    lifted = frag.mk_node([t.alpha, frag.leaf([1, 2])], 0)
    assert is_well_positioned(frag, t)
    assert not is_well_positioned(frag, Triplet(t.alpha, t.beta, frag.mk_node([t.beta], 0)
                                                if frag.w(t.beta) else lifted))


def test_aset_shape():
    frag = complete_fragment(2, 2)
    t = reference_triplet(frag)
    A = build_aset(frag, t, 8)
    counts = A.counts()
    assert all(counts[m] == 2 for m in range(4, 9))
    assert t.alpha in A and t.gamma in A


def test_j2_formula_matches_aset():
    frag = complete_fragment(2, 2)
    t = reference_triplet(frag)
    phi = build_j2_formula(frag, t)
    assert is_join_irreducible(phi).irreducible
    ken = enumerate_k(phi, frag=frag, level_budget=8)
    assert set(ken.forcers()) == build_aset(frag, t, 8).members()
    assert j2_parts(frag, t)["aset"].depth == frag.level_of(t.alpha) + 2
    assert classify(phi, 2).kind == "J2"


def test_disjoint_triplets_give_incomparable_formulas():
    frag = complete_fragment(2, 2)
    a, b = disjoint_triplets(frag, 2)
    fa, fb = build_j2_formula(frag, a), build_j2_formula(frag, b)
    assert not entails(fa, fb).valid and not entails(fb, fa).valid


# -- classification --------------------------------------------------------

@pytest.mark.parametrize("text,kind", [
    ("F", "Bottom"), ("x1 & ~x1", "Bottom"), ("x1 | x2", "Reducible"),
    ("x1 & ~x2", "J1"), ("x1", "J2"), ("~x1", "J2"), ("T", "J3"),
    ("x1 -> x2", "J3"), ("~~x1", "J3"),
])
def test_classify_examples(text, kind):
    assert classify(parse(text, 2), 2).kind == kind


def test_stratum_is_monotone_along_entailment():
    chain = [parse(s, 2) for s in ("x1 & ~x2", "x1", "T")]
    labels = [classify(f, 2) for f in chain]
    assert [l.stratum for l in labels] == [1, 2, 3]
    assert all(entails(a, b).valid for a, b in zip(chain, chain[1:]))


# -- bqsl --------------------------------------------------------------------

def test_bqsl_chain_and_diamond():
    chain = Bqsl.from_relations("abc", [("a", "b"), ("b", "c")])
    assert chain.bottom == "a" and chain.leq("a", "c")
    check_bqsl(chain)
    diamond = Bqsl.from_relations("0lrt", [("0", "l"), ("0", "r"), ("l", "t"), ("r", "t")])
    assert diamond.mlb("l", "r") == ["0"]
    check_bqsl(diamond)
    with pytest.raises(NotABqsl):
        Bqsl.from_relations("ab", [])


def test_bqsl_rejects_cycles():
    m = np.ones((2, 2), dtype=bool)
    with pytest.raises(NotABqsl):
        check_bqsl(Bqsl(["a", "b"], m, "a"))


def test_one_point_chain_adds_minimal_first():
    big = Bqsl.from_relations("0abt", [("0", "a"), ("0", "b"), ("a", "t"), ("b", "t")])
    chain = one_point_chain(["0", "t"], big)
    assert [len(q.elements) for q in chain] == [2, 3, 4]
    assert chain[1].elements[-1] in ("a", "b")
    for small, nxt in zip(chain, chain[1:]):
        assert is_embedding(small, nxt)


# -- incomparability and extension ------------------------------------------

def test_incomp_witness_checks():
    w = incomp_witness_details(top(), [implies(x1, x2)], 2)
    assert all(w.checks.values())
    assert not entails(w.formula, implies(x1, x2)).valid
    assert not entails(implies(x1, x2), w.formula).valid


def test_incomp_rejects_non_j3():
    with pytest.raises(PreconditionViolated):
        incomp_witness(x1, [], 1)


def test_incomp_rejects_entailed_side():
    with pytest.raises(PreconditionViolated):
        incomp_witness_details(x1, [top()], 1)


def _scenario(els, less, images, q):
    Q2 = Bqsl.from_relations(els, less)
    return fraisse_extend_details([(e, parse(images[e], 2)) for e in els if e != q], Q2, q, 2)


def test_extension_bottom_case():
    res = _scenario(["bot", "q", "a"], [("bot", "q"), ("q", "a")], {"bot": "F", "a": "T"}, "q")
    assert res.case == "bottom" and all(res.checks.values())


def test_extension_augmented_case():
    res = _scenario(["bot", "l", "q", "u"], [("bot", "l"), ("l", "q"), ("q", "u")],
                    {"bot": "F", "l": "x1 -> x2", "u": "T"}, "q")
    assert res.case == "augmented" and all(res.checks.values())
    assert res.audit["equal"]


def test_extension_rejects_unfaithful_embedding():
    Q2 = Bqsl.from_relations(["bot", "a", "q"], [("bot", "a"), ("bot", "q")])
    with pytest.raises(PreconditionViolated):
        fraisse_extend_details([("bot", parse("T", 2)), ("a", parse("T", 2))], Q2, "q", 2)
