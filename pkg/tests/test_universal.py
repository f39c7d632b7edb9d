import json

import pytest
from hypothesis import given

from heyting.budget import Budget, BudgetExceeded
from heyting.formula import rn_ladder
from heyting.prover import entails
from heyting.semantics import force
from heyting.universal import (EmptySuccessorSet, InvalidValuation, UFragment, complete_fragment,
                               leaves)
from oracles.level_count import level_two_count
from strategies import formulas, models


def test_leaves():
    assert [u.valuation for u in leaves(1).nodes] == [0, 1]
    k2 = leaves(2)
    assert len(k2) == 4 and k2.leaf([1, 2]) == 3 and len(k2.by_level[1]) >= 3


def test_mk_node_rules():
    f = leaves(2)
    a = f.mk_node([1, 2], 0)
    assert f.level_of(a) == 2 and f.mk_node([2, 1], 0) == a
    assert f.upset(a) == {a, 1, 2} and f.upset(1) == {1}
    with pytest.raises(InvalidValuation):
        f.mk_node([3], 3)
    with pytest.raises(InvalidValuation):
        f.mk_node([1, 2], 1)
    with pytest.raises(EmptySuccessorSet):
        f.mk_node([])
    assert f.mk_node([a, 1]) == a  # node(S) of a chain collapses to its minimum


@pytest.mark.parametrize("n,expected", [(1, 2), (2, 18), (3, 302)])
def test_level_two_counts_match_independent_script(n, expected):
    assert level_two_count(n) == expected
    assert len(complete_fragment(n, 2).by_level[2]) == expected


def test_level_growth_and_count_mode(k2):
    assert len(k2.by_level[2]) > len(k2.by_level[1])
    assert k2.count_level(2) == 18
    with pytest.raises(BudgetExceeded):
        k2.count_level(3, Budget(node_count=1000))


def test_k1_width_two_and_level_law(k1):
    for m in range(1, 9):
        assert len(k1.by_level[m]) == 2
    for u in k1.nodes:
        assert u.level == 1 + max((k1.level_of(s) for s in u.succ), default=0)
        for b in k1.upset(u.id) - {u.id}:
            assert k1.level_of(b) < u.level


def test_key_uniqueness_and_antichains(k2):
    keys = {(u.succ, u.valuation) for u in k2.nodes}
    assert len(keys) == len(k2)
    for u in k2.nodes:
        assert k2.minimal(u.succ) == u.succ
        if len(u.succ) == 1:
            assert u.valuation != k2.w(u.succ[0])


def test_json_round_trip(k2):
    back = UFragment.from_json(json.dumps(k2.to_json()))
    assert [(u.succ, u.valuation, u.level) for u in back.nodes] == \
           [(u.succ, u.valuation, u.level) for u in k2.nodes]
    assert back.complete == k2.complete
    assert k2.to_dot([4]).count("->") == 0


def test_order_matches_rn_ladder(k1):
    """Node alpha goes to the ladder formula with k-set upset(alpha); order reverses exactly."""
    model = k1.to_model()
    ladder = [f for name, f in rn_ladder(16) if name.startswith("phi") or name == "psi1"]
    image = {}
    for f in ladder:
        k = set(force(model, f).k())
        hits = [a for a in range(len(k1)) if k1.upset(a) == k]
        if hits:
            image[hits[0]] = f
    assert sorted(image) == list(range(len(k1)))
    for a in image:
        for b in image:
            assert k1.leq(a, b) == bool(entails(image[b], image[a]))


@given(models(max_nodes=6), formulas(max_leaves=8))
def test_embedding_preserves_forcing(model, f):
    frag = leaves(2)
    image = frag.embed(model)
    src = force(model, f)
    dst = force(frag.to_model(), f)
    for a, b in enumerate(image):
        assert src.forces(a) == dst.forces(b)
