import pytest
from hypothesis import given, strategies as st

from expokit.doctrines import Doctrine, opens_of
from expokit.enumeration import objects_over
from expokit.glueing import (ObjectOverB, decompose, fiber_product, find_iso_over, gamma1, glue,
                             glued_opens, identity_over, lax_iso, loc_over_to_top,
                             pseudo_iff_pushout, pushout_test, restrict_over, subset_over,
                             top_over_to_loc)
from expokit.laxcat import lax_functors, terminal_lax
from expokit.order import FinPoset, FinSpace

B2, B3 = FinPoset.chain(2), FinPoset.chain(3)
V = FinPoset.from_pairs("abc", [("a", "c"), ("b", "c")])


def _opens_as_sets(F):
    return {frozenset((b, x) for b, U in fam.items() for x in U) for fam in glued_opens(F)}


@pytest.mark.parametrize("B,k", [(B2, 2), (B3, 1), (V, 1)])
def test_glued_order_matches_definitional_opens(B, k):
    for F in lax_functors("top", B, k):
        assert set(glue(F).total.opens()) == _opens_as_sets(F)


def test_subset_02_vertical_table():
    F = decompose(subset_over(B3, [0, 2]))
    m02 = F.verticals[(0, 2)]
    assert m02.table == {frozenset(): frozenset(), frozenset({0}): frozenset({2})}
    m01 = F.verticals[(0, 1)]
    assert m01(frozenset({0})) == frozenset()
    assert F.composite(0, 1, 2)(frozenset({0})) == frozenset({2})


def test_sierpinski_identity_is_terminal():
    F = decompose(identity_over("top", B2))
    assert lax_iso(F, terminal_lax("top", B2)) is not None


@pytest.mark.parametrize("d", ["top", "pos", "rel", "loc"])
def test_terminal_glues_to_gamma1(d):
    q = glue(terminal_lax(d, B3))
    assert find_iso_over(q, identity_over(d, B3)) is not None


def test_gamma1():
    assert gamma1("top", B3) == FinSpace(B3)
    assert len(gamma1("rel", B3).elements) == 1


@st.composite
def objects_over_3(draw, d="top"):
    pairs = list(objects_over(B3, 3))
    P, q = draw(st.sampled_from(pairs))
    total = FinSpace(P) if d == "top" else P
    return ObjectOverB(d, total, B3, q)


@given(objects_over_3())
def test_round_trip_up_to_iso(q):
    F = decompose(q)
    assert find_iso_over(glue(F), q) is not None
    assert lax_iso(decompose(glue(F)), F) is not None


def test_untagged_round_trip_is_exact():
    for F in lax_functors("pos", B3, 1):
        # relabel fibres to plain labels, then glue and strip tags again
        assert decompose(glue(F), untag=True) == F


def test_untag_requires_tags():
    with pytest.raises(ValueError):
        decompose(subset_over(B3, [0, 2]), untag=True)


def test_pushout_examples():
    q = subset_over(B3, [0, 2])
    assert not pushout_test(q, 0, 1, 2)
    assert pushout_test(subset_over(B3, [1]), 0, 1, 2)
    assert pushout_test(identity_over("top", B3), 0, 1, 2)


@given(objects_over_3())
def test_pseudo_iff_pushout(q):
    assert pseudo_iff_pushout(q)


@given(objects_over_3("pos"))
def test_pseudo_iff_pushout_pos(q):
    assert pseudo_iff_pushout(q)


def test_restriction_to_a_point_is_the_fibre():
    q = identity_over("top", B3)
    r = restrict_over(q, [1])
    assert r.points == (1,)


def test_fiber_product_with_terminal():
    for P, proj in objects_over(B2, 3):
        q = ObjectOverB("pos", P, B2, proj)
        prod = fiber_product(q, identity_over("pos", B2))
        assert len(prod.points) == len(P.elements)
        assert find_iso_over(ObjectOverB("pos", prod.total, B2, prod.projection), q) is not None


def test_loc_top_round_trip():
    for P, proj in objects_over(B2, 3):
        q = ObjectOverB("top", FinSpace(P), B2, proj)
        loc = top_over_to_loc(q)
        assert loc.validate() == []
        assert find_iso_over(loc_over_to_top(loc), q) is not None
        assert lax_iso(decompose(loc), decompose(top_over_to_loc(glue(decompose(q))))) is not None


def test_validate_catches_non_monotone_projection():
    q = ObjectOverB("pos", FinPoset.chain(2), B2, {0: 1, 1: 0})
    assert q.validate() != []
