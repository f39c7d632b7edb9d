import json

import pytest
from hypothesis import given, strategies as st

from heyting.formula import atom, parse, top
from heyting.semantics import (InvalidModel, KripkeModel, brute_countermodel, force, forces,
                               type_of)
from oracles import textbook
from strategies import formulas, models

x1, x2 = atom(1), atom(2)
CHAIN = KripkeModel(1, [0, 1], [(1,), ()])


def test_single_node_disjunction():
    assert forces(KripkeModel(2, [1], [()]), 0, parse("x1 | x2"))


def test_excluded_middle_chain():
    em = parse("x1 | ~x1")
    table = force(CHAIN, em)
    assert not table.forces(0)
    assert table.forces(1)
    assert forces(CHAIN, 0, parse("~~(x1 | ~x1)"))
    assert type_of(table, 0).bits == 0


def test_types():
    t = type_of(force(KripkeModel(2, [3], [()]), parse("x1 & x2")), 0)
    assert {str(g) for g in t.members()} == {"x1", "x2", "x1 & x2"}
    t = type_of(force(CHAIN, top()), 0)
    assert [str(g) for g in t.members()] == ["T"]


@pytest.mark.parametrize("model", [
    KripkeModel(1, [1, 0], [(1,), ()]),      # valuation shrinks upward
    KripkeModel(1, [0, 0], [(1,), (0,)]),    # cycle
    KripkeModel(1, [0], [(3,)]),             # dangling successor
    KripkeModel(1, [2], [()]),               # atom beyond n
])
def test_invalid_models_rejected(model):
    with pytest.raises(InvalidModel):
        model.validate()


def test_formula_beyond_model_atoms():
    with pytest.raises(InvalidModel):
        force(CHAIN, x2)


def test_json_round_trip_and_levels():
    m = KripkeModel(2, [0, 1, 3], [(1, 2), (2,), ()])
    back = KripkeModel.from_json(json.dumps(m.to_json(levels=m.levels())))
    assert back.valuations == m.valuations and back.succ == m.succ
    assert m.levels() == [3, 2, 1]
    assert "digraph" in m.to_dot()


@given(models(), formulas(max_leaves=9))
def test_matches_textbook_clauses_and_persists(model, f):
    table = force(model, f)
    for a in range(len(model)):
        assert table.forces(a) == textbook.forces(model, a, f)
        for b in textbook.upset(model, a):
            assert table.bits[a] & ~table.bits[b] == 0


@given(models(max_nodes=5), formulas(max_leaves=8), st.integers(0, 3))
def test_adding_a_node_below_keeps_old_forcing(model, f, val):
    before = force(model, f).bits
    top_nodes = [0]
    common = 3
    for b in top_nodes:
        common &= model.valuations[b]
    m2 = KripkeModel(model.n, list(model.valuations), list(model.succ))
    m2.add_node(val & common, top_nodes)
    assert force(m2, f).bits[:len(model)] == before


def test_brute_oracle_examples():
    assert brute_countermodel(parse("x1 & x2"), parse("x1"), 4) is None
    peirce = brute_countermodel(top(), parse("((x1 -> x2) -> x1) -> x1"), 4)
    assert peirce is not None and len(peirce) == 2
    assert not forces(peirce, 0, parse("((x1 -> x2) -> x1) -> x1"))
    one = brute_countermodel(x1, x2, 4)
    assert len(one) == 1 and one.valuations == [1]
    with pytest.raises(ValueError):
        brute_countermodel(x1, x2, 6)


def test_restrict_up():
    m = KripkeModel(2, [0, 1, 2, 3], [(1, 2), (3,), (3,), ()])
    sub, remap = m.restrict_up(1)
    assert len(sub) == 2 and remap[1] == 0 and sub.valuations == [1, 3]
