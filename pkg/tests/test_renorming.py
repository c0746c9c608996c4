from fractions import Fraction

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from treespace.errors import PreconditionError
from treespace.models import FinVector, SetId, SliceSpec
from treespace.ops import (
    C_GAP, c_non_scd_witness, distance_bound, evaluate, level_nodes, scd_zero_constant,
    scd_zero_demo,
)

from .strategies import e, f_, finite_functionals

HALF = Fraction(1, 2)


def c_slice(f, delta=HALF):
    return SliceSpec(SetId.C, f, delta)


def test_positive_side_goes_through_the_defiance():
    t = c_non_scd_witness(e("0"), [c_slice(f_("1"))])
    assert t.elements == (e("1"),)
    assert t.signs == (1,)
    assert t.gap == C_GAP
    assert evaluate(t.separator, e("0")) == 0
    assert evaluate(t.auxiliary, e("0")) == 1
    assert distance_bound(t, [Fraction(1)]) == 1


def test_negative_side_uses_the_auxiliary_functional():
    t = c_non_scd_witness(e("0"), [c_slice(-f_("1"))])
    assert t.elements == (-e("1"),)
    assert t.signs == (-1,)
    assert distance_bound(t, [Fraction(1)]) == 1


def test_mixed_selection():
    t = c_non_scd_witness(e("0"), [c_slice(f_("1")), c_slice(-f_("1"))])
    assert t.signs == (1, -1)
    assert distance_bound(t, [HALF, HALF]) >= C_GAP


def test_empty_selection():
    t = c_non_scd_witness(e("0"), [])
    assert t.elements == ()
    assert t.signs == ()


def test_c_witness_preconditions():
    with pytest.raises(PreconditionError):
        c_non_scd_witness(e("0", "1"), [c_slice(f_("1"))])
    with pytest.raises(PreconditionError):
        c_non_scd_witness(e(""), [c_slice(f_("1"))])
    with pytest.raises(PreconditionError):
        c_non_scd_witness(e("0"), [SliceSpec(SetId.BPLUS, f_("1"), HALF)])
    t = c_non_scd_witness(e("0"), [c_slice(f_("1"))])
    with pytest.raises(PreconditionError):
        distance_bound(t, [HALF])


@settings(max_examples=30, deadline=None)
@given(st.lists(finite_functionals, min_size=1, max_size=3), st.data())
def test_every_convex_combination_stays_away(fs, data):
    t = c_non_scd_witness(e("00", "1"), [c_slice(f) for f in fs])
    raw = [data.draw(st.integers(1, 5)) for _ in fs]
    weights = [Fraction(r, sum(raw)) for r in raw]
    assert distance_bound(t, weights) >= C_GAP


def test_level_nodes():
    assert level_nodes(1) == [(0,), (1,)]
    assert level_nodes(2) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_scd_zero_constant():
    assert scd_zero_constant(1) == 2
    assert scd_zero_constant(2) == 4


def test_argmax_selections_cancel():
    report = scd_zero_demo(1, 8)
    assert report.r == 0
    assert report.constant == 2
    assert report.bound == Fraction(3, 4)
    assert report.asserted and report.holds


def test_bound_of_at_least_one_is_not_asserted():
    report = scd_zero_demo(1, 4)
    assert report.bound == 1
    assert not report.asserted
    assert not scd_zero_demo(5, 10).asserted
    assert scd_zero_demo(3, 100).asserted


def test_shifted_selections_stay_small():
    report = scd_zero_demo(1, 4, selector="shifted")
    assert report.r == Fraction(1, 4)
    assert report.holds


@pytest.mark.parametrize("n,k", [(2, 3), (3, 2), (3, 8)])
def test_average_is_within_the_bound(n, k):
    for selector in ("argmax", "shifted"):
        report = scd_zero_demo(n, k, selector=selector)
        assert report.r <= report.bound


def test_single_slice_width_is_reported_only():
    report = scd_zero_demo(2, 1)
    assert not report.asserted


@pytest.mark.parametrize("selector", ["argmax", "shifted"])
@pytest.mark.parametrize("k", [10, 100, 1000])
def test_averages_shrink_with_the_level(selector, k):
    rs = [scd_zero_demo(n, k, selector=selector).r for n in range(1, 6)]
    assert all(later <= earlier for earlier, later in zip(rs, rs[1:]))
    assert all(r <= Fraction(4, 2 ** n) for n, r in zip(range(1, 6), rs))


def test_shifted_average_is_one_level_deeper():
    assert [scd_zero_demo(n, 100, selector="shifted").r for n in (1, 2, 3)] == [
        Fraction(1, 4), Fraction(1, 8), Fraction(1, 16)]


def missed_node_selector(n, p):
    """Positive selections trade weight p from one level node to its left child."""
    level = level_nodes(n)

    def choose(s, theta, slice_):
        rest = FinVector({t: 1 for t in level if t != s})
        if theta < 0:
            return -rest
        t = level[1] if s == level[0] else level[0]
        return rest + FinVector({t: -p, t + (0,): p})

    return choose


def test_missed_node_selections_stay_within_the_asserted_bound():
    report = scd_zero_demo(3, 16, selector=missed_node_selector(3, Fraction(3, 16)))
    assert report.r == Fraction(21, 128)
    assert report.bound == Fraction(5, 8)
    assert report.asserted and report.holds


def test_slack_constant_must_grow_with_the_level():
    low = scd_zero_demo(4, 16, selector=missed_node_selector(4, Fraction(7, 16)))
    high = scd_zero_demo(5, 32, selector=missed_node_selector(5, Fraction(7, 16)))
    assert low.r == Fraction(105, 256)
    assert high.r == Fraction(217, 512)
    assert low.r > low.envelope and high.r > high.envelope
    needed_low = low.k * (low.r - low.envelope)
    needed_high = high.k * (high.r - high.envelope)
    assert needed_low == Fraction(41, 16)
    assert needed_high == Fraction(153, 16)
    assert needed_high > 2 * needed_low
    assert low.holds and high.holds


def test_scd_zero_preconditions():
    with pytest.raises(PreconditionError):
        scd_zero_demo(0, 3)
    with pytest.raises(PreconditionError):
        scd_zero_demo(1, 3, selector="nearest")

    def lazy(s, theta, slice_):
        return FinVector.zero()

    with pytest.raises(PreconditionError):
        scd_zero_demo(1, 3, selector=lazy)
