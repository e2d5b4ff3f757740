import pytest
from hypothesis import given, strategies as st

from conftest import posets
from expokit.cat import (CategoryError, FinCat, FinFunctor, Profunctor, compose_prof,
                         empty_profunctor, find_profunctor_iso, functors, hom_profunctor,
                         is_natural_map, product_profunctor)
from expokit.catprof import small_categories
from expokit.enumeration import monotone_maps
from expokit.order import FinPoset
from expokit.unionfind import UnionFind


def thin_prof(P, Q, pairs):
    """A profunctor between poset categories with at most one element per component."""
    X0, X1 = FinCat.from_poset(P), FinCat.from_poset(Q)
    pairs = set(pairs)
    left = {((a, c), (a2, a)): (a2, c) for (a, c) in pairs for a2 in P.elements if P.leq(a2, a)}
    right = {((c, c2), (a, c)): (a, c2) for (a, c) in pairs for c2 in Q.elements if Q.leq(c, c2)}
    return Profunctor(X0, X1, {p: p for p in pairs}, left, right)


@st.composite
def ideals(draw, P, Q):
    downs = P.product(Q.dual()).down_sets()
    return draw(st.sampled_from(downs))


def _components(Q, nodes):
    uf = UnionFind(nodes)
    for b in nodes:
        for b2 in nodes:
            if Q.leq(b, b2):
                uf.union(b, b2)
    return len(uf.classes())


def test_small_family_satisfies_axioms():
    cats = small_categories(6)
    assert len(cats) == 40
    for C in cats:
        assert C.violations() == []
        assert len(C.morphisms) <= 6


def test_free_category_counts_paths():
    C = FinCat.free("abc", [("f", "a", "b"), ("g", "b", "c"), ("h", "a", "c")])
    assert len(C.morphisms) == 3 + 3 + 1  # identities, edges, the path g.f
    assert len(C.hom("a", "c")) == 2


def test_bad_composition_is_rejected():
    with pytest.raises(CategoryError):
        FinCat(["*"], {"1": ("*", "*"), "e": ("*", "*")}, {"*": "1"},
               {("1", "1"): "1", ("1", "e"): "e", ("e", "1"): "1", ("e", "e"): "e"})


@given(posets(3), posets(3))
def test_functors_between_posets_are_monotone_maps(P, Q):
    n = len(list(functors(FinCat.from_poset(P), FinCat.from_poset(Q))))
    assert n == len(list(monotone_maps(P, Q)))


def test_functors_are_functors():
    for C in small_categories(4):
        for D in small_categories(4):
            for F in functors(C, D):
                assert F.violations() == []


def test_hom_profunctor_is_valid():
    for C in small_categories(6):
        assert hom_profunctor(C).violations() == []


@given(posets(3, 1), posets(3, 1), posets(3, 1), st.data())
def test_thin_composite_counts_components(P, Q, R, data):
    m = thin_prof(P, Q, data.draw(ideals(P, Q)))
    n = thin_prof(Q, R, data.draw(ideals(Q, R)))
    comp = compose_prof(m, n)
    assert comp.violations() == []
    for a in P.elements:
        for c in R.elements:
            middle = [b for b in Q.elements if (a, b) in m.elements and (b, c) in n.elements]
            assert len(comp.component(a, c)) == _components(Q, middle)


@pytest.mark.parametrize("C", small_categories(5))
def test_hom_is_a_unit(C):
    for m in (hom_profunctor(C),):
        assert find_profunctor_iso(compose_prof(hom_profunctor(C), m), m) is not None
        assert find_profunctor_iso(compose_prof(m, hom_profunctor(C)), m) is not None


@given(posets(2, 1), posets(2, 1), posets(2, 1), posets(2, 1), st.data())
def test_composition_is_associative_up_to_iso(P, Q, R, S, data):
    m = thin_prof(P, Q, data.draw(ideals(P, Q)))
    n = thin_prof(Q, R, data.draw(ideals(Q, R)))
    k = thin_prof(R, S, data.draw(ideals(R, S)))
    left = compose_prof(compose_prof(m, n), k)
    right = compose_prof(m, compose_prof(n, k))
    assert find_profunctor_iso(left, right) is not None


def test_empty_profunctor_absorbs():
    C = FinCat.from_poset(FinPoset.chain(2))
    e = empty_profunctor(C, C)
    assert compose_prof(e, hom_profunctor(C)).elements == {}


def test_product_profunctor():
    C = FinCat.from_poset(FinPoset.chain(2))
    h = hom_profunctor(C)
    p = product_profunctor(h, h)
    assert p.violations() == []
    assert len(p.elements) == len(h.elements) ** 2


def test_natural_map_identity():
    C = FinCat.from_poset(FinPoset.chain(3))
    h = hom_profunctor(C)
    assert is_natural_map(h, h, {x: x for x in h.elements}) == []
    swapped = dict((x, x) for x in h.elements)
    a, b = [x for x in h.elements if h.elements[x] == (0, 0)][0], [x for x in h.elements if h.elements[x] == (0, 1)][0]
    swapped[a] = b
    assert is_natural_map(h, h, swapped) != []


def test_functor_composition():
    P = FinPoset.chain(3)
    C = FinCat.from_poset(P)
    F = next(f for f in functors(C, C) if f.obj_map == {0: 0, 1: 0, 2: 2})
    G = next(f for f in functors(C, C) if f.obj_map == {0: 1, 1: 1, 2: 2})
    H = F.then(G)
    assert H.obj_map == {0: 1, 1: 1, 2: 2}
    assert H.violations() == []
