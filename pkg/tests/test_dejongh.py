import pytest

from heyting.dejongh import (NodeFormulaPair, VerificationFailed, forcing_on, node_formulas,
                             verify_node_formulas)
from heyting.formula import atom, conj, dag_size, disj, neg
from heyting.prover import entails, equivalent
from heyting.structure import enumerate_k
from heyting.universal import complete_fragment

x1, x2 = atom(1), atom(2)


def test_leaf_formulas(k2):
    top_leaf = node_formulas(k2, k2.leaf([1, 2]))
    assert equivalent(top_leaf.pos, conj(x1, x2))
    assert enumerate_k(top_leaf.pos, frag=k2).forcers() == [k2.leaf([1, 2])]
    assert equivalent(node_formulas(k2, k2.leaf([1])).pos, conj(x1, neg(x2)))


def test_internal_node_upset(k2):
    a = k2.mk_node([k2.leaf([1]), k2.leaf([2])])
    pair = node_formulas(k2, a)
    assert len(k2.upset(a)) == 3
    rep = verify_node_formulas(k2, pair)
    assert rep.passed and rep.k_counts == {1: 2, 2: 1}
    assert rep.to_json()["passed"] is True


def test_corrupted_formula_is_caught(k2):
    a = k2.mk_node([k2.leaf([1]), k2.leaf([2])])
    good = node_formulas(k2, a)
    with pytest.raises(VerificationFailed):
        verify_node_formulas(k2, NodeFormulaPair(a, disj(good.pos, x1), good.neg))
    with pytest.raises(VerificationFailed):
        verify_node_formulas(k2, NodeFormulaPair(a, good.pos, neg(good.pos)))


def test_all_of_k2_verifies(k2):
    for a in range(len(k2)):
        assert verify_node_formulas(k2, node_formulas(k2, a), samples=2).passed


def test_order_reversal(k2, k1):
    for frag, top in ((k2, 2), (k1, 6)):
        ids = [a for m in range(1, top + 1) for a in frag.by_level[m]]
        pos = {a: node_formulas(frag, a).pos for a in ids}
        forced = {a: forcing_on(frag, pos[a]) for a in ids}
        for a in ids:
            assert [b for b in range(len(frag)) if forced[a][b]] == sorted(frag.upset(a))
        for a in ids[::3]:
            for b in ids[::3]:
                assert entails(pos[a], pos[b]).valid == frag.leq(b, a)


def test_dag_growth_is_linear(k1):
    sizes = [dag_size(node_formulas(k1, k1.by_level[m][0]).pos) for m in range(1, 9)]
    steps = [b - a for a, b in zip(sizes, sizes[1:])]
    assert max(steps[1:]) <= 2 * min(steps[1:]) + 4
