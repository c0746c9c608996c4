import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from treespace.errors import MalformedInputError, PreconditionError
from treespace.models import ROOT, Branch, FreshMode, Relation, TreeKind, TreeShape, format_node
from treespace.ops import (
    ancestors, compare, fresh_node, hull, is_antichain, is_chain, is_maximal_antichain, parse_node,
    shape_children, shape_contains, shape_level, shape_subtree,
)

from .strategies import binary_nodes, branches


def test_compare_examples():
    assert compare(ROOT, (0,)) is Relation.LESS
    assert compare((0,), (1,)) is Relation.INCOMPARABLE
    assert compare((0, 1), (0, 1, 0)) is Relation.LESS
    assert compare((0, 1, 0), (0, 1)) is Relation.GREATER


@given(binary_nodes, binary_nodes, binary_nodes)
def test_compare_is_a_partial_order(a, b, c):
    if compare(a, b) is Relation.LESS:
        assert compare(b, a) is Relation.GREATER
        assert a in ancestors(b)
    if compare(a, b) is Relation.LESS and compare(b, c) is Relation.LESS:
        assert compare(a, c) is Relation.LESS


@given(branches, st.integers(0, 8), st.integers(1, 4))
def test_branch_nodes_increase(beta, n, gap):
    assert compare(beta.node_at(n), beta.node_at(n + gap)) is Relation.LESS


def test_branch_is_canonical():
    assert Branch((0, 1), (0, 1)) == Branch((), (0, 1))
    assert Branch((0, 0), (0,)) == Branch((), (0,))
    assert Branch((), (1, 1)).period == (1,)
    assert Branch((1,), (0,)).divergence(Branch((1,), (0, 1))) == 2


def test_parse_node():
    assert parse_node("eps") == ROOT
    assert parse_node("0110") == (0, 1, 1, 0)
    assert parse_node("3.1.4", TreeKind.COUNTABLE) == (3, 1, 4)
    assert format_node((3, 1, 4), TreeKind.COUNTABLE) == "3.1.4"
    with pytest.raises(MalformedInputError):
        parse_node("012")
    with pytest.raises(MalformedInputError):
        parse_node("3..1", TreeKind.COUNTABLE)


def test_maximal_antichain_examples():
    assert is_maximal_antichain([(0,), (1,)])
    assert not is_maximal_antichain([(0,)])
    assert is_maximal_antichain([ROOT])
    assert is_maximal_antichain([ROOT], TreeKind.COUNTABLE)
    assert not is_maximal_antichain([(0,), (1,)], TreeKind.COUNTABLE)
    assert is_maximal_antichain([(0, 0), (0, 1), (1,)])


def test_maximal_antichain_rejects_chains():
    with pytest.raises(MalformedInputError):
        is_maximal_antichain([(0,), (0, 1)])


def test_fresh_node_examples():
    assert fresh_node((0,), {(0, 0)}) == (0, 1)
    assert fresh_node() == (0,)
    assert fresh_node(ROOT, {(0,), (1, 0)}, mode=FreshMode.INCOMPARABLE) == (1, 1)


def test_fresh_node_impossible():
    with pytest.raises(PreconditionError):
        fresh_node(ROOT, {ROOT}, mode=FreshMode.INCOMPARABLE)


@settings(max_examples=50, deadline=None)
@given(binary_nodes, st.sets(binary_nodes, max_size=6), st.sampled_from(list(FreshMode)))
def test_fresh_node_meets_its_constraints(start, avoiding, mode):
    try:
        s = fresh_node(start, avoiding, mode=mode)
    except PreconditionError:
        return
    assert compare(start, s) is Relation.LESS
    assert s not in avoiding
    if mode is FreshMode.NO_ANCESTOR:
        assert not any(compare(a, s) in (Relation.LESS, Relation.EQUAL) for a in avoiding)
    if mode is FreshMode.INCOMPARABLE:
        assert all(compare(a, s) is Relation.INCOMPARABLE for a in avoiding)


def test_fresh_node_on_the_countable_tree():
    assert fresh_node((2,), {(2, 0), (2, 1)}, TreeKind.COUNTABLE) == (2, 2)


def test_hull_chain_antichain():
    assert hull([(0, 1)]) == {ROOT, (0,), (0, 1)}
    assert is_chain([ROOT, (0,), (0, 1, 1)])
    assert not is_chain([(0,), (1,)])
    assert is_antichain([(0, 0), (0, 1), (1,)])
    assert not is_antichain([(0,), (0, 1)])


def test_binary_shape():
    shape = TreeShape.binary()
    assert shape_children(shape, (1,)) == ((1, 0), (1, 1))
    assert len(shape_level(shape, 3)) == 8
    assert shape_contains(shape, (0, 1, 1))


def test_countable_shape():
    beta = Branch((1,), (1,))
    shape = TreeShape(TreeKind.COUNTABLE, ((ROOT, ((0,), (1,))),), (beta,), padding=5)
    assert shape_children(shape, ROOT) == ((0,), (1,))
    assert shape_children(shape, (1,)) == ((1, 1),)
    assert shape_children(shape, (0,)) == ((0, 5),)
    assert shape_level(shape, 2) == [(0, 5), (1, 1)]
    assert shape_contains(shape, (1, 1, 1))
    assert not shape_contains(shape, (2,))
    assert shape_children(shape_subtree(shape, (1,)), ROOT) == ((1,),)
