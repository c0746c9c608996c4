from fractions import Fraction

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from treespace.errors import PreconditionError
from treespace.models import Branch, FinVector, Functional, SetId, TreeKind, TreeShape, WeakNbhdSpec
from treespace.ops import evaluate, is_point_of_continuity, shift
from treespace.ops.continuity import pc_approximant, pc_construction, pc_near, stabilization_depth
from treespace.settings import settings as config

from .strategies import ZERO_BRANCH, e, f_, functionals

HALF = Fraction(1, 2)
CHECKERBOARD = e("00", "11") - e("01", "10")


def test_root_functional():
    built = pc_construction([f_("")], HALF)
    assert (built.n1, built.n2) == (1, 2)
    assert built.vector == CHECKERBOARD
    assert built.theta == (1, -1, -1, 1)


def test_branch_functional_telescopes():
    f = Functional.along_branch(ZERO_BRANCH, 1)
    built = pc_construction([f], HALF)
    assert built.branches == (ZERO_BRANCH,)
    assert built.halved == ((0, 1),)
    assert built.full == ((1, 0), (1, 1))
    x = built.vector
    assert x == e("00", "01", coeff=HALF) - e("0", coeff=HALF) - e("10") + e("11")
    assert evaluate(f, x) == 0
    assert is_point_of_continuity(x)[0]


def test_no_functionals():
    assert pc_approximant([], Fraction(1)) == e("")
    assert pc_approximant([], Fraction(1), TreeShape(TreeKind.COUNTABLE)) == FinVector.unit((), TreeKind.COUNTABLE)


def test_eps_must_be_positive():
    with pytest.raises(PreconditionError):
        pc_approximant([f_("")], Fraction(0))


def test_sign_level_is_capped(monkeypatch):
    monkeypatch.setattr(config, "pc_max_level", 2)
    assert pc_construction([f_("")], HALF).n2 == 2
    with pytest.raises(PreconditionError):
        pc_construction([f_("0")], HALF)


def test_stabilization_depth():
    f = Functional.along_branch(ZERO_BRANCH, 1)
    assert stabilization_depth([f], [ZERO_BRANCH]) == 0
    g = Functional.along_branch(ZERO_BRANCH, 1, overrides=[(3, 2)])
    assert stabilization_depth([g], [ZERO_BRANCH]) == 3
    assert stabilization_depth([], [ZERO_BRANCH, Branch((0,), (1,))]) == 1


@settings(max_examples=25, deadline=None)
@given(st.lists(functionals(max_parts=1), min_size=1, max_size=3),
       st.fractions(min_value=Fraction(1, 8), max_value=1, max_denominator=8))
def test_approximants_are_certified(fs, eps):
    x = pc_approximant(fs, eps)
    assert is_point_of_continuity(x)[0]
    assert all(abs(evaluate(f, x)) < eps for f in fs)


def test_pc_near_keeps_points_of_continuity():
    w = WeakNbhdSpec(SetId.BX, e(""), ((f_("0"), HALF),))
    assert pc_near(e(""), w) == e("")


def test_pc_near_from_the_origin():
    w = WeakNbhdSpec(SetId.BX, FinVector.zero(), ((f_(""), HALF),))
    assert pc_near(FinVector.zero(), w) == CHECKERBOARD


def test_pc_near_fills_the_open_branches():
    y = e("", coeff=HALF)
    w = WeakNbhdSpec(SetId.BX, y, ((f_("0"), Fraction(1, 4)),))
    out = pc_near(y, w)
    assert out == y + shift(CHECKERBOARD, (0,)) * HALF + shift(CHECKERBOARD, (1,)) * HALF
    assert is_point_of_continuity(out)[0]


def test_pc_near_preconditions():
    with pytest.raises(PreconditionError):
        pc_near(e(""), WeakNbhdSpec(SetId.SIGMA, e("")))
    with pytest.raises(PreconditionError):
        pc_near(e(""), WeakNbhdSpec(SetId.BX, e("0")))
    with pytest.raises(PreconditionError):
        pc_near(e("", "0"), WeakNbhdSpec(SetId.BX, e("", "0")))
