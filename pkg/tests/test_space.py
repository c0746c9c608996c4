from fractions import Fraction

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from treespace.errors import MalformedInputError, PreconditionError
from treespace.models import ROOT, Branch, FinVector, Functional, SpaceId, TreeKind
from treespace.ops import (
    brute_force_norm, classify, d_gauge, exposing_functional, gauge_norm, in_sigma,
    is_point_of_continuity, lattice_parts, norm, norm_value, project, shift, unshift,
)

from .strategies import binary_nodes, e, small_vectors, vectors

XT = SpaceId.xt()
HALF = Fraction(1, 2)


def test_norm_examples():
    value, cert = norm(XT, e("0", "1"))
    assert value == 1
    assert cert.optimal_set == ((0,),)
    assert norm_value(XT, e("", "0", coeff=HALF)) == 1
    value, cert = norm(XT, e("", "0", "1", coeff=HALF))
    assert value == 1
    assert cert.optimal_set == (ROOT, (0,))


def test_norm_of_the_modified_space():
    xm = SpaceId.xm()
    assert norm_value(xm, e("0", "1")) == 2
    assert norm_value(xm, e("0", "00", "01")) == 3
    with pytest.raises(PreconditionError):
        norm(xm, e(""))


def test_norm_rejects_the_wrong_tree():
    with pytest.raises(MalformedInputError):
        norm(XT, FinVector({(3,): 1}, TreeKind.COUNTABLE))


@settings(max_examples=60, deadline=None)
@given(small_vectors)
def test_norm_matches_enumeration(x):
    assert norm_value(XT, x) == brute_force_norm(XT, x)[0]


@given(vectors, st.lists(st.sampled_from((-1, 1)), min_size=10, max_size=10))
def test_norm_is_unconditional(x, flips):
    flipped = FinVector({t: v * s for (t, v), s in zip(x.items(), flips)})
    assert norm_value(XT, flipped) == norm_value(XT, x)


@given(vectors, vectors)
def test_incomparable_supports_take_the_max(x, y):
    joined = shift(x, (0,)) + shift(y, (1,))
    assert norm_value(XT, joined) == max(norm_value(XT, x), norm_value(XT, y))


@given(binary_nodes, st.lists(st.fractions(-3, 3, max_denominator=4), min_size=1, max_size=7))
def test_chains_are_l1(end, coeffs):
    x = FinVector({end[:i]: c for i, c in zip(range(len(end) + 1), coeffs)})
    assert norm_value(XT, x) == sum((abs(v) for _, v in x.items()), Fraction(0))


def test_antichains_are_c0():
    x = FinVector({(0, 0): Fraction(3, 4), (0, 1): Fraction(-5, 4), (1,): Fraction(1, 3)})
    assert norm_value(XT, x) == Fraction(5, 4)


def test_project_examples():
    assert project(e("0", "1"), {(0,)}) == e("0")
    x = e("", "0", coeff=HALF)
    assert project(x, lambda t: True) == x
    assert project(x, Branch((), (0,))) == x


@given(vectors, binary_nodes)
def test_project_does_not_increase_norm(x, t):
    assert norm_value(XT, project(x, lambda s: s[:len(t)] == t)) <= norm_value(XT, x)


@given(vectors, binary_nodes)
def test_shift_is_an_isometry(x, t):
    moved = shift(x, t)
    assert norm_value(XT, moved) == norm_value(XT, x)
    assert unshift(moved, t) == x


def test_shift_examples():
    assert shift(e(""), (1,)) == e("1")
    with pytest.raises(PreconditionError):
        unshift(e("0"), (1,))


def test_lattice_parts():
    assert lattice_parts(e("0") - e("1")) == (e("0"), e("1"))
    assert lattice_parts(e("0")) == (e("0"), FinVector.zero())
    assert lattice_parts(FinVector.zero()) == (FinVector.zero(), FinVector.zero())


def test_gauge_examples():
    assert gauge_norm(e("0") - e("1")) == 2
    assert gauge_norm(e("")) == 1
    assert gauge_norm(e("0", coeff=HALF) - e("1", coeff=HALF)) == 1


@given(vectors)
def test_gauge_is_between_norm_and_twice_norm(x):
    value = norm_value(XT, x)
    assert value <= gauge_norm(x) <= 2 * value


def test_d_gauge():
    assert d_gauge(e("0")) == 1
    assert d_gauge(e("00", "01")) == 1
    assert d_gauge(e("0", "1")) == 2
    assert d_gauge(e("0") - e("1")) == 2
    assert d_gauge(FinVector.zero()) == 0
    assert d_gauge(e("")) is None


@given(vectors)
def test_d_gauge_dominates_the_c_gauge(x):
    g = d_gauge(x)
    assert g is None or g >= gauge_norm(x)


def test_classify_root():
    report = classify(XT, e(""))
    assert report.extreme and report.strongly_exposed
    assert report.witness_antichain == (ROOT,)
    assert report.point_of_continuity


def test_classify_single_node():
    report = classify(XT, e("0"))
    assert not report.extreme
    assert not report.point_of_continuity
    assert report.in_sigma_plus and report.in_omega_plus
    assert report.unit_nodes == ((0,),)


def test_classify_point_of_continuity_off_the_sphere_of_units():
    report = classify(XT, e("", "0", "1", coeff=HALF))
    assert not report.extreme
    assert report.point_of_continuity
    assert report.on_sphere and not report.in_sigma


def test_classify_other_spaces_unsupported():
    with pytest.raises(PreconditionError):
        classify(SpaceId.xm(), e("0"))


def test_exposing_functional_examples():
    assert exposing_functional(e("0") - e("1")) == Functional({(0,): HALF, (1,): -HALF})
    assert exposing_functional(e("")) == Functional({ROOT: 1})
    third = Fraction(1, 3)
    assert exposing_functional(e("00", "01") - e("1")) == Functional(
        {(0, 0): third, (0, 1): third, (1,): -third})
    with pytest.raises(PreconditionError):
        exposing_functional(e("0"))


def test_sigma_membership():
    assert in_sigma(e("0") - e("1"))
    assert not in_sigma(e("0", "00"))
    assert not in_sigma(e("0", coeff=HALF))
    assert in_sigma(e("0") - e("1"), positive=False)
    assert not in_sigma(e("0") - e("1"), positive=True)


def test_point_of_continuity_reasons():
    assert is_point_of_continuity(e("0", coeff=HALF)) == (False, "norm < 1")
    ok, reason = is_point_of_continuity(e("0"))
    assert not ok and reason == "branch through eps carries mass 0/1"
