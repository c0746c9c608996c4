from fractions import Fraction

import numpy as np
import pytest

from treespace.errors import PreconditionError
from treespace.models import Branch, BranchPart, FinVector, Functional, SetId, TreeKind, TreeShape, WeakNbhdSpec
from treespace.ops import nbhd_membership, restrict_functional, shape_contains
from treespace.ops.infinite import finitely_branching_reduction, padding_letter, union_shapes
from treespace.ops.pibase import pibase_basic_witness, sample_nbhd_members, sigma_pibase_defiance

from .strategies import e, f_

C = TreeKind.COUNTABLE
HALF = Fraction(1, 2)
ONES = Branch((), (1,))


def cvec(entries):
    return FinVector(entries, C)


def test_padding_letter():
    f = Functional({(3,): 1}, [BranchPart(ONES, 1)], C)
    assert padding_letter([f]) == 4
    assert padding_letter([], [cvec({(0, 7): 1})]) == 8
    assert padding_letter() == 0


def test_reduction_keeps_the_heavy_parts():
    f = Functional({(3,): 1}, [BranchPart(ONES, Fraction(1, 3))], C)
    r = finitely_branching_reduction(f, HALF)
    assert r.pruned == ()
    assert r.pruned_mass == 0
    assert r.levels[1] == ((1,), (3,))
    assert r.shape.branches == (ONES,)
    assert shape_contains(r.shape, (3,))
    assert shape_contains(r.shape, (1, 1, 1, 1))
    assert not shape_contains(r.shape, (0,))


def test_reduction_of_zero_is_one_padded_branch():
    r = finitely_branching_reduction(Functional(kind=C), HALF)
    assert r.shape.explicit == (((), ((0,),)),)
    assert shape_contains(r.shape, (0, 0, 0))
    assert not shape_contains(r.shape, (1,))


def test_reduction_prunes_light_subtrees():
    f = Functional({(0,): 1, (1,): Fraction(1, 100)}, kind=C)
    r = finitely_branching_reduction(f, HALF)
    assert r.pruned == (((1,), Fraction(1, 100)),)
    assert r.pruned_mass == Fraction(1, 100)
    assert not shape_contains(r.shape, (1,))


def test_reduction_preconditions():
    with pytest.raises(PreconditionError):
        finitely_branching_reduction(f_("0"), HALF)
    with pytest.raises(PreconditionError):
        finitely_branching_reduction(Functional(kind=C), 0)


def test_union_shapes_adds_extra_nodes():
    f = Functional({(3,): 1}, [BranchPart(ONES, Fraction(1, 3))], C)
    shape = union_shapes([finitely_branching_reduction(f, HALF).shape], [(5,)], 6)
    assert shape.padding == 6
    for node in [(1,), (3,), (5,), (3, 6), (1, 1, 1)]:
        assert shape_contains(shape, node)
    assert not shape_contains(shape, (3, 4))


ROOT_SPLIT = TreeShape(C, explicit=(((), ((0,), (1,))),), padding=5)


def test_restrict_folds_a_leaving_branch_into_finite_entries():
    f = Functional({(1,): 2, (2,): 7}, [BranchPart(Branch((), (2,)), HALF)], C)
    g = restrict_functional(f, ROOT_SPLIT)
    assert g.branches == ()
    assert g.finite == {(): HALF, (1,): 2}


def test_restrict_keeps_a_branch_riding_the_padding():
    f = Functional(branches=[BranchPart(Branch((0,), (5,)), HALF)], kind=C)
    g = restrict_functional(f, ROOT_SPLIT)
    assert g == f
    assert g.coefficient((0, 5, 5, 5)) == HALF


def test_sigma_defiance_walks_down_a_chain():
    w = WeakNbhdSpec(SetId.SIGMA, FinVector.zero(), ((f_(""), HALF),))
    t = sigma_pibase_defiance([w, w])
    assert t.elements == (e("0"), e("00"))
    assert t.signs == (1, 1)
    assert t.chain == ((0,), (0, 0))


def test_sigma_defiance_aligns_signs_on_the_center():
    t = sigma_pibase_defiance([WeakNbhdSpec(SetId.SIGMA, e("0")), WeakNbhdSpec(SetId.SIGMA, -e("0"))])
    assert t.signs == (1, -1)
    assert t.chain == ((0,),)


def test_sigma_defiance_preconditions():
    with pytest.raises(PreconditionError):
        sigma_pibase_defiance([WeakNbhdSpec(SetId.BX, FinVector.zero())])
    with pytest.raises(PreconditionError):
        sigma_pibase_defiance([WeakNbhdSpec(SetId.SIGMA, e("0", coeff=HALF))])
    branchy = Functional.along_branch(ONES, 1)
    with pytest.raises(PreconditionError):
        sigma_pibase_defiance([WeakNbhdSpec(SetId.SIGMA, FinVector.zero(), ((branchy, HALF),))])


def test_pibase_from_the_origin():
    w = WeakNbhdSpec(SetId.BX, FinVector.zero(C), ((Functional({(): 1}, kind=C), Fraction(1)),))
    p = pibase_basic_witness(w, np.random.default_rng(3), samples=20)
    assert p.x0 == cvec({(0, 0): 1})
    assert p.delta0 == Fraction(1, 8)
    assert p.spot_checks == 20
    assert p.terms[0].residual == 0
    assert p.terms[0].total < 1


def test_pibase_keeps_a_point_of_continuity_center():
    center = cvec({(0,): 1})
    w = WeakNbhdSpec(SetId.BX, center, ((Functional({(0,): 1}, kind=C), HALF),))
    p = pibase_basic_witness(w)
    assert p.x0 == center
    assert p.delta0 == Fraction(1, 16)


def test_pibase_preconditions():
    with pytest.raises(PreconditionError):
        pibase_basic_witness(WeakNbhdSpec(SetId.SIGMA, FinVector.zero(C)))
    with pytest.raises(PreconditionError):
        pibase_basic_witness(WeakNbhdSpec(SetId.BX, FinVector.zero()))
    with pytest.raises(PreconditionError):
        pibase_basic_witness(WeakNbhdSpec(SetId.BX, cvec({(0,): 1, (0, 2): 1})))


def test_sampled_members_stay_in_the_neighborhood():
    w = WeakNbhdSpec(SetId.BX, FinVector.zero(C), ((Functional({(): 1}, kind=C), Fraction(1)),))
    x0 = cvec({(0, 0): 1})
    members = sample_nbhd_members(x0, Fraction(1, 8), np.random.default_rng(0), 30)
    assert len(members) == 30
    assert all(nbhd_membership(y, w) for y in members)
