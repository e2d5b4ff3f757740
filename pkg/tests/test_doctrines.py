import itertools

import pytest
from hypothesis import given, strategies as st

from conftest import posets
from expokit.doctrines import (Doctrine, DoctrineError, MeetMap, OrderIdeal, Relation,
                               as_doctrine, cell_exists, frame_space, from_zero,
                               join_irreducibles, loc_to_top_vertical, opens_of, product,
                               special_cell_exists, to_zero, top_to_loc_vertical, v_compose,
                               v_identity, verticals, zero_object, zero_vertical)
from expokit.enumeration import functions, lattices_up_to_iso, meet_maps, subsets
from expokit.order import FinPoset, FinSpace


def test_doctrine_names():
    assert {d.value for d in Doctrine} == {"cat", "pos", "top", "loc", "rel"}
    assert as_doctrine("top") is Doctrine.TOP
    assert Doctrine.TOP.flat and not Doctrine.CAT.flat
    with pytest.raises(ValueError):
        as_doctrine("sheaves")


def _brute_meet_maps(L0, L1):
    out = []
    for f in functions(list(L0), list(L1)):
        if f[L0.top] == L1.top and all(f[L0.meet(x, y)] == L1.meet(f[x], f[y]) for x in L0 for y in L0):
            out.append(f)
    return out


@pytest.mark.parametrize("L0,L1", [(a, b) for a in lattices_up_to_iso(3) + lattices_up_to_iso(4)
                                   for b in lattices_up_to_iso(2) + lattices_up_to_iso(4)])
def test_meet_maps_enumeration(L0, L1):
    assert sorted(map(sorted, (f.items() for f in meet_maps(L0, L1)))) == \
        sorted(map(sorted, (f.items() for f in _brute_meet_maps(L0, L1))))


def test_meet_map_rejects_non_meet_preserving():
    L = lattices_up_to_iso(3)[0]  # 0 < 1 < 2
    with pytest.raises(DoctrineError):
        MeetMap(L, L, {0: 2, 1: 0, 2: 2})
    with pytest.raises(DoctrineError):
        MeetMap(L, L, {0: 0, 1: 1, 2: 1})  # top not preserved


def _brute_ideals(P, Q, closed=True):
    cells = list(itertools.product(P.elements, Q.elements))
    out = set()
    for S in subsets(cells):
        S = set(S)
        if not closed or all((a2, c2) in S for (a, c) in S for a2 in P.elements for c2 in Q.elements
                             if P.leq(a2, a) and Q.leq(c, c2)):
            out.add(frozenset(S))
    return out


@given(posets(2), posets(2))
def test_pos_verticals_are_order_ideals(P, Q):
    got = {v.pairs for v in verticals("pos", P, Q)}
    assert got == _brute_ideals(P, Q)


def test_rel_verticals_are_all_relations():
    P = FinPoset.discrete("ab")
    Q = FinPoset.discrete("xyz")
    assert len(list(verticals("rel", P, Q))) == 2 ** 6


def test_order_ideal_closure_check():
    P = FinPoset.chain(2)
    with pytest.raises(DoctrineError):
        OrderIdeal(P, P, [(1, 0)])
    OrderIdeal(P, P, [(0, 0), (0, 1), (1, 1)])
    Relation(P, P, [(1, 0)])  # relations are not closed up


@given(posets(2), posets(2), posets(2), st.data())
def test_pos_composition_is_relational(P, Q, R, data):
    m = data.draw(st.sampled_from(list(verticals("pos", P, Q))))
    n = data.draw(st.sampled_from(list(verticals("pos", Q, R))))
    nm = v_compose("pos", m, n)
    brute = {(a, c) for (a, b) in m.pairs for (b2, c) in n.pairs if b == b2}
    assert nm.pairs == brute


@pytest.mark.parametrize("d", ["top", "pos", "rel"])
def test_identity_is_a_unit(d):
    X = FinSpace(FinPoset.chain(2)) if d == "top" else (FinPoset.chain(2) if d == "pos" else FinPoset.discrete("ab"))
    Y = FinSpace(FinPoset.discrete("xy")) if d == "top" else FinPoset.discrete("xy")
    for m in verticals(d, X, Y):
        assert v_compose(d, v_identity(d, X), m) == m
        assert v_compose(d, m, v_identity(d, Y)) == m


def test_top_composition_is_associative():
    S = FinSpace.sierpinski()
    vs = list(verticals("top", S, S))
    for a in vs:
        for b in vs:
            for c in vs:
                assert v_compose("top", v_compose("top", a, b), c) == v_compose("top", a, v_compose("top", b, c))


def test_special_cells_in_pos_are_inclusions():
    P = FinPoset.chain(2)
    vs = list(verticals("pos", P, P))
    for m in vs:
        for n in vs:
            assert special_cell_exists("pos", m, n) == (m.pairs <= n.pairs)


def test_special_cells_in_top_reverse_inclusion():
    # a cell m => n in top says n(V) is contained in m(V) for every open V
    S = FinSpace.sierpinski()
    vs = list(verticals("top", S, S))
    for m in vs:
        for n in vs:
            expected = all(n(V) <= m(V) for V in m.source)
            assert special_cell_exists("top", m, n) == expected


@pytest.mark.parametrize("d", ["top", "pos", "rel", "loc", "cat"])
def test_zero_object(d):
    from expokit.cat import FinCat
    Z = zero_object(d)
    X = {"top": FinSpace.sierpinski(), "pos": FinPoset.chain(2), "rel": FinPoset.discrete("ab"),
         "loc": opens_of(FinSpace.sierpinski()), "cat": FinCat.from_poset(FinPoset.chain(2))}[d]
    assert to_zero(d, X) is not None and from_zero(d, X) is not None
    zv = zero_vertical(d, X, X)
    if d in ("pos", "rel"):
        assert zv.pairs == frozenset()
    if d == "top":
        assert all(zv(V) == frozenset(X.points) for V in opens_of(X))


@pytest.mark.parametrize("d", ["top", "pos"])
def test_products_have_projections(d):
    P, Q = FinPoset.chain(2), FinPoset.discrete("ab")
    X, Y = (FinSpace(P), FinSpace(Q)) if d == "top" else (P, Q)
    prod = product(d, X, Y)
    pts = prod.obj.points if d == "top" else prod.obj.elements
    assert len(pts) == 4
    assert all(prod.p1[p] == p[0] and prod.p2[p] == p[1] for p in pts)


def test_frame_duality():
    for n in range(1, 6):
        for L in lattices_up_to_iso(n):
            if not L.is_distributive():
                continue
            S = frame_space(L)
            assert len(S.points) == len(join_irreducibles(L))
            assert len(opens_of(S)) == len(L)


def test_loc_top_vertical_transport():
    S = FinSpace.sierpinski()
    L = opens_of(S)
    for m in verticals("loc", L, L):
        back = top_to_loc_vertical(loc_to_top_vertical(m), L, L)
        assert back == m


def test_cell_exists_with_horizontal_maps():
    P = FinPoset.chain(2)
    ident = {0: 0, 1: 1}
    for m in verticals("pos", P, P):
        assert cell_exists("pos", ident, m, m, ident)
