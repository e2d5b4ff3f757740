import itertools

import pytest

from expokit.catprof import benabou_decompose, categories_over
from expokit.doctrines import Doctrine, special_cell_exists, verticals
from expokit.glueing import decompose, identity_over, subset_over
from expokit.laxcat import (LaxFunctor, lax_functors, preserves_pseudo, product_lax, strict_pairs,
                            strict_triples, terminal_lax, theta, transformations)
from expokit.order import FinPoset, FinSpace

B2, B3 = FinPoset.chain(2), FinPoset.chain(3)
PT = FinPoset(["*"], [])


def _brute_pos_lax_count_fibre_le1(B):
    """Lax functors into Pos with fibres of size <= 1, counted from scratch:
    each vertical between non-empty fibres is empty or full, and a full
    composite forces a full long vertical."""
    elems = list(B.elements)
    pairs = strict_pairs(B)
    count = 0
    for sizes in itertools.product((0, 1), repeat=len(elems)):
        s = dict(zip(elems, sizes))
        live = [p for p in pairs if s[p[0]] and s[p[1]]]
        for full in itertools.product((False, True), repeat=len(live)):
            f = dict(zip(live, full))
            ok = all(f.get((b, e), False) or not (f.get((b, c), False) and f.get((c, e), False))
                     for (b, c, e) in strict_triples(B))
            count += ok
    return count


@pytest.mark.parametrize("B", [B2, B3, FinPoset.from_pairs("abc", [("a", "b"), ("a", "c")])])
def test_lax_functor_count(B):
    assert len(list(lax_functors("pos", B, 1))) == _brute_pos_lax_count_fibre_le1(B)


@pytest.mark.parametrize("d", ["top", "pos", "rel"])
def test_enumerated_lax_functors_validate(d):
    for F in lax_functors(d, B3, 1):
        assert F.validate() == []


def test_pseudo_means_composites_agree():
    for F in lax_functors("pos", B3, 2):
        brute = F.composite(0, 1, 2).pairs == F.verticals[(0, 2)].pairs
        assert bool(F.is_pseudo()) == brute


def test_non_lax_is_reported():
    full = next(v for v in verticals("pos", PT, PT) if v.pairs)
    empty = next(v for v in verticals("pos", PT, PT) if not v.pairs)
    F = LaxFunctor("pos", B3, {0: PT, 1: PT, 2: PT}, {(0, 1): full, (1, 2): full, (0, 2): empty})
    kinds = {v.kind for v in F.validate()}
    assert "comparison" in kinds


def test_missing_verticals_reported():
    F = LaxFunctor("pos", B3, {0: PT, 1: PT, 2: PT}, {})
    assert {v.kind for v in F.validate()} == {"missing-vertical"}


def test_subset_02_is_not_pseudo():
    F = decompose(subset_over(B3, [0, 2]))
    res = F.is_pseudo()
    assert not res and res.witness == (0, 1, 2)


@pytest.mark.parametrize("d", ["top", "pos", "rel", "loc", "cat"])
def test_terminal_is_pseudo(d):
    T = terminal_lax(d, B3)
    assert T.validate() == []
    assert T.is_pseudo()


def test_terminal_receives_one_transformation():
    T = terminal_lax("pos", B2)
    for F in lax_functors("pos", B2, 2):
        assert len(list(transformations(F, T))) == 1


def test_restrict_after_extend_zero():
    for F in lax_functors("pos", B2, 2):
        big = F.extend_zero(B3)
        assert big.validate() == []
        assert big.restrict([0, 1]) == F


def _hom_count(X, W):
    return len(list(transformations(X, W)))


def test_extend_zero_is_left_adjoint_to_restriction():
    # |Hom(L_A X, W)| = |Hom(X, W_A)| on small Pos instances
    A = B3.subposet([0, 1])
    Xs = list(lax_functors("pos", A, 1))
    Ws = list(lax_functors("pos", B3, 1))
    for X in Xs:
        for W in Ws:
            assert _hom_count(X.extend_zero(B3), W) == _hom_count(X, W.restrict([0, 1]))


def test_product_with_terminal():
    for F in lax_functors("pos", B3, 1):
        P = product_lax(F, terminal_lax("pos", B3))
        assert P.validate() == []
        assert bool(P.is_pseudo()) == bool(F.is_pseudo())


def test_product_of_pseudo_is_pseudo_when_theta_invertible():
    pseudo = list(lax_functors("pos", B3, 1, pseudo_only=True))
    for X in pseudo:
        for Y in pseudo:
            P = product_lax(X, Y)
            assert P.validate() == []
            if theta(X, Y, 0, 1, 2).invertible:
                assert P.is_pseudo()


def test_theta_examples():
    Y = decompose(subset_over(B3, [0, 2], "pos"))
    T = terminal_lax("pos", B3)
    th = theta(T, Y, 0, 1, 2)
    assert th.exists and not th.invertible
    I = decompose(identity_over("pos", B3))
    assert theta(I, I, 0, 1, 2).invertible


def test_theta_cat():
    Y = benabou_decompose(subset_over(B3, [0, 2], "cat"))
    th = theta(terminal_lax("cat", B3), Y, 0, 1, 2)
    assert th.exists and not th.invertible
    I = benabou_decompose(identity_over("cat", B3))
    assert theta(I, I, 0, 1, 2).invertible


@pytest.mark.parametrize("d", ["pos", "top"])
def test_preserves_pseudo(d):
    Y = decompose(subset_over(B3, [0, 2], d))
    res = preserves_pseudo(Y, 0, 1, 2, 1)
    assert not res
    assert preserves_pseudo(Y, 0, 1, 2, 0)  # vacuous at bound 0
    assert preserves_pseudo(decompose(identity_over(d, B3)), 0, 1, 2, 2)


def test_cat_decompositions_are_coherent():
    B4 = FinPoset.chain(4)
    n = 0
    for q in categories_over(B4, 4):
        F = benabou_decompose(q)
        assert F.validate() == []
        n += 1
    assert n > 0


def test_lax_direction_top():
    # in top a cell m => n exists when n(V) is inside m(V); laxness puts
    # the long vertical inside the composite
    F = decompose(subset_over(B3, [0, 2]))
    comp = F.composite(0, 1, 2)
    assert special_cell_exists(Doctrine.TOP, comp, F.verticals[(0, 2)])
    assert all(F.verticals[(0, 2)](V) <= comp(V) for V in comp.source)
