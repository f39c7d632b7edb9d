import pytest
from hypothesis import given, strategies as st

from heyting.budget import Budget, BudgetExceeded
from heyting.formula import atom, big_or, bottom, conj, disj, implies, neg, parse, rn_ladder, top
from heyting.prover import (EmptyC, c_of, decompose, entails, equivalent, is_join_irreducible,
                            maximal_lower_bounds, mintype, quick_valid, realize, strictly_below)
from heyting.semantics import brute_countermodel, force
from strategies import formulas

x1, x2 = atom(1), atom(2)
RN = dict(rn_ladder(8))


def names(ts):
    return sorted(sorted(str(g) for g in t.members()) for t in ts)


def test_realized_types_small():
    table = realize(x1)
    assert sorted(table.types) == [0, 1]
    assert [table.type_set(k).bits for k in range(len(table))] == table.types
    assert len(realize(top())) == 1
    em = realize(parse("x1 | ~x1"))
    i, j = em.closure.index[x1], em.closure.index[neg(x1)]
    gaps = [k for k, t in enumerate(em.types) if not t >> i & 1 and not t >> j & 1]
    assert gaps and all(em.verify(k, 1) for k in range(len(em)))


def test_entailment_examples():
    assert entails(conj(x1, x2), x1).valid
    peirce = entails(top(), parse("((x1 -> x2) -> x1) -> x1"))
    assert not peirce.valid and len(peirce.countermodel) == 2
    assert entails(RN["phi1"], RN["phi3"]).valid
    assert not entails(RN["phi3"], RN["phi1"]).valid
    assert not entails(top(), parse("x1 | ~x1"))
    assert entails(top(), parse("~~(x1 | ~x1)"))
    with pytest.raises(ValueError):
        entails(x2, x1, n=1)


def test_join_irreducibility_examples():
    ji = is_join_irreducible(x1)
    assert ji.irreducible and names([ji.mintype]) == [["x1"]]
    red = is_join_irreducible(disj(x1, x2))
    assert not red.irreducible
    assert names(red.minimal_types) == [["x1", "x1 | x2"], ["x1 | x2", "x2"]]
    assert names([mintype(top())]) == [["T"]]
    with pytest.raises(EmptyC):
        is_join_irreducible(conj(x1, neg(x1)))


def test_decompose_examples():
    comps = decompose(disj(x1, x2))
    assert len(comps) == 2
    assert equivalent(comps[0], x1) and equivalent(comps[1], x2)
    assert decompose(x1) == [x1] or equivalent(decompose(x1)[0], x1)
    psi2 = decompose(RN["psi2"])
    assert len(psi2) == 2
    assert sorted(equivalent(c, neg(x1)) for c in psi2) == [False, True]
    assert decompose(bottom()) == []


def test_maximal_lower_bounds_examples():
    (same,) = maximal_lower_bounds(x1, x1)
    assert equivalent(same, x1)
    (m,) = maximal_lower_bounds(x1, x2)
    assert equivalent(m, conj(x1, x2))
    assert maximal_lower_bounds(RN["phi1"], RN["psi1"]) == []


def test_width_budget():
    f = x1
    for i in range(40):
        f = implies(f, disj(f, x2))
    with pytest.raises(BudgetExceeded):
        entails(top(), f, budget=Budget(width=16), shortcut=False)


@given(formulas(max_leaves=7), formulas(max_leaves=7))
def test_agrees_with_brute_force(a, b):
    e = entails(a, b, n=2)
    cm = brute_countermodel(a, b, 4, 2)
    if e.valid:
        assert cm is None
    else:
        table = force(e.countermodel, implies(a, b))
        assert table.forces(0, a) and not table.forces(0, b)
    if cm is not None:
        assert not e.valid


@given(formulas(max_leaves=7), formulas(max_leaves=7))
def test_shortcut_is_sound(a, b):
    if quick_valid(a, b):
        assert entails(a, b, shortcut=False).valid


@given(formulas(max_leaves=8))
def test_decomposition_contract(f):
    comps = decompose(f, verify=True)
    if not comps:
        assert entails(f, bottom()).valid
        return
    assert equivalent(big_or(comps), f)
    table = c_of(f)
    if len(comps) == 1:
        ji = is_join_irreducible(f)
        assert ji.irreducible and all(ji.mintype.bits & ~t == 0 for t in table.types)
    else:
        assert all(strictly_below(c, f) for c in comps)


@given(formulas(max_leaves=6), st.lists(formulas(max_leaves=5), min_size=1, max_size=3))
def test_general_join(psi, phis):
    try:
        ji = is_join_irreducible(psi)
    except EmptyC:
        return
    if ji.irreducible and entails(psi, big_or(phis)).valid:
        assert any(entails(psi, p).valid for p in phis)
