from fractions import Fraction

import pytest
from hypothesis import given, settings

from treespace.errors import CertificateError, MalformedInputError, PreconditionError
from treespace.families import FAMILIES, get_family, schreier_index
from treespace.models import ROOT, SpaceId
from treespace.ops import brute_force_norm, norm
from treespace.ops.adequate import family_of, super_adp_bound, validate_family

from .strategies import e, small_vectors

HALF = Fraction(1, 2)
SAMPLE = e("0", "00") + e("1", coeff=HALF)
DEPTH_TWO = [(0,), (1,), (0, 0), (0, 1), (1, 0), (1, 1)]


@pytest.mark.parametrize("name,value,certificate", [
    ("chains", 2, ((0,), (0, 0))),
    ("antichains", Fraction(3, 2), ((0,), (1,))),
    ("singletons", 1, ((0,),)),
    ("all", Fraction(5, 2), ((0,), (1,), (0, 0))),
    ("schreier", 2, ((0,), (0, 0))),
    ("lambda", 2, ((0,), (0, 0))),
])
def test_family_norms(name, value, certificate):
    got, cert = norm(SpaceId.adequate(name), SAMPLE)
    assert got == value
    assert cert.optimal_set == certificate
    assert cert.family == name


@settings(max_examples=40, deadline=None)
@given(small_vectors)
def test_family_norms_match_enumeration(x):
    for name in ("antichains", "singletons", "all", "schreier"):
        space = SpaceId.adequate(name)
        assert norm(space, x)[0] == brute_force_norm(space, x)[0]
    rootless = x.restrict(lambda t: t != ROOT)
    assert norm(SpaceId.xm(), rootless)[0] == brute_force_norm(SpaceId.xm(), rootless)[0]


def test_unknown_family():
    with pytest.raises(MalformedInputError):
        get_family("trees")
    with pytest.raises(MalformedInputError):
        norm(SpaceId.adequate("trees"), e("0"))


def test_schreier_index():
    assert schreier_index(()) == 1
    assert schreier_index((0,)) == 2
    assert schreier_index((1, 1)) == 7


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_registered_families_are_adequate(name):
    validate_family(FAMILIES[name], DEPTH_TWO)


def test_validate_family_rejects_bad_families():
    class Pairs:
        name = "pairs"

        def contains(self, nodes):
            return len(nodes) == 2

    class NoPairs:
        name = "no-pairs"

        def contains(self, nodes):
            return len(nodes) != 2

    with pytest.raises(CertificateError):
        validate_family(Pairs(), DEPTH_TWO)
    with pytest.raises(CertificateError):
        validate_family(NoPairs(), DEPTH_TWO)


def test_family_of():
    assert family_of(SpaceId.xt()).name == "chains"
    assert family_of(SpaceId.xm()).name == "lambda"
    assert family_of(SpaceId.adequate("schreier")).name == "schreier"


def test_super_adp_single_unit_coordinate():
    y = e("", coeff=HALF) - e("0", coeff=HALF)
    report = super_adp_bound(SpaceId.xt(), ROOT, (0,), y, Fraction(1, 100))
    assert report.value == 1
    assert report.per_theta == ((1, Fraction(1)), (-1, Fraction(1)))
    assert report.bound == Fraction(3, 2) + Fraction(1, 50)
    assert report.verdict == "< 2"


def test_super_adp_large_eps_is_inconclusive():
    y = e("", coeff=HALF) - e("0", coeff=HALF)
    report = super_adp_bound(SpaceId.xt(), ROOT, (0,), y, Fraction(1, 4))
    assert report.bound == 2
    assert report.verdict == "inconclusive"


def test_super_adp_preconditions():
    y = e("", coeff=HALF) - e("0", coeff=HALF)
    with pytest.raises(PreconditionError):
        super_adp_bound(SpaceId.xt(), ROOT, (0,), y, 0)
    with pytest.raises(PreconditionError):
        super_adp_bound(SpaceId.adequate("singletons"), ROOT, (0,), y, Fraction(1, 100))
    with pytest.raises(PreconditionError):
        super_adp_bound(SpaceId.xt(), ROOT, (0,), e("", coeff=HALF), Fraction(1, 100))
    with pytest.raises(PreconditionError):
        super_adp_bound(SpaceId.xt(), ROOT, (0,), y + e("00"), Fraction(1, 100))
