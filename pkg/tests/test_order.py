import pytest
from hypothesis import given, strategies as st

from conftest import posets, spaces
from expokit.enumeration import (lattices_up_to_iso, posets_up_to_iso, preorders_up_to_iso,
                                 subsets)
from expokit.order import (DEFINITIONAL_CAP, CapExceeded, FinLattice, FinPoset, FinPreorder,
                           FinSpace, OrderError, is_continuous_lattice, is_scott_open, scott_opens,
                           way_below)


# counts of unlabelled posets, preorders and lattices (OEIS A000112, A001930, A006966)
@pytest.mark.parametrize("n,count", [(0, 1), (1, 1), (2, 2), (3, 5), (4, 16), (5, 63)])
def test_poset_counts(n, count):
    assert len(posets_up_to_iso(n)) == count


@pytest.mark.parametrize("n,count", [(0, 1), (1, 1), (2, 3), (3, 9), (4, 33)])
def test_preorder_counts(n, count):
    assert len(preorders_up_to_iso(n)) == count


@pytest.mark.parametrize("n,count", [(1, 1), (2, 1), (3, 1), (4, 2), (5, 5), (6, 15), (7, 53)])
def test_lattice_counts(n, count):
    assert len(lattices_up_to_iso(n)) == count


def test_cycle_is_rejected_with_the_pair():
    with pytest.raises(OrderError, match="cycle"):
        FinPoset.from_pairs("ab", [("a", "b"), ("b", "a")])


def test_unknown_element():
    with pytest.raises(OrderError, match="unknown"):
        FinPoset.from_pairs("ab", [("a", "z")])


def test_preorder_allows_cycles():
    P = FinPreorder.from_pairs("ab", [("a", "b"), ("b", "a")])
    assert P.leq("a", "b") and P.leq("b", "a")
    assert not P.is_antisymmetric()


def test_sierpinski():
    S = FinSpace.sierpinski()
    assert set(S.opens()) == {frozenset(), frozenset({0}), frozenset({0, 1})}
    assert S.closure({1}) == frozenset({1})
    assert S.closure({0}) == frozenset({0, 1})


@given(posets())
def test_covers_generate_the_order(P):
    assert FinPoset.from_pairs(P.elements, P.covers()) == P


@given(posets())
def test_linear_extension_respects_order(P):
    pos = {x: i for i, x in enumerate(P.linear_extension())}
    assert sorted(pos) == sorted(P.elements)
    assert all(pos[x] <= pos[y] for x, y in P.relation)


@given(posets())
def test_dual_is_involutive(P):
    assert P.dual().dual() == P
    assert all(P.dual().leq(y, x) for x, y in P.relation)


@given(posets())
def test_down_sets_brute_force(P):
    brute = {frozenset(S) for S in subsets(P.elements)
             if all(x in S for y in S for x in P.elements if P.leq(x, y))}
    assert set(P.down_sets()) == brute
    assert {frozenset(P.elements) - D for D in brute} == set(P.up_sets())


@given(spaces())
def test_opens_form_a_topology(Y):
    opens = set(Y.opens())
    assert frozenset() in opens and frozenset(Y.points) in opens
    for U in opens:
        for V in opens:
            assert U | V in opens and U & V in opens


@given(spaces(), st.data())
def test_interior_and_closure(Y, data):
    S = frozenset(data.draw(st.sets(st.sampled_from(Y.points))) if Y.points else set())
    best = frozenset().union(*[U for U in Y.opens() if U <= S]) if Y.opens() else frozenset()
    assert Y.interior(S) == best
    everything = frozenset(Y.points)
    assert Y.closure(S) == everything - Y.interior(everything - S)


@given(spaces())
def test_space_from_its_opens(Y):
    assert FinSpace.from_opens(Y.points, Y.opens()) == Y


def test_from_opens_rejects_non_topology():
    with pytest.raises(OrderError):
        FinSpace.from_opens([0, 1], [frozenset(), frozenset({0}), frozenset({1})])


def _brute_meet(L, x, y):
    lower = [z for z in L if L.leq(z, x) and L.leq(z, y)]
    return [z for z in lower if all(L.leq(w, z) for w in lower)][0]


def _brute_join(L, x, y):
    upper = [z for z in L if L.leq(x, z) and L.leq(y, z)]
    return [z for z in upper if all(L.leq(z, w) for w in upper)][0]


@pytest.mark.parametrize("L", [L for n in range(1, 7) for L in lattices_up_to_iso(n)])
def test_meets_and_joins(L):
    for x in L:
        for y in L:
            assert L.meet(x, y) == _brute_meet(L, x, y)
            assert L.join(x, y) == _brute_join(L, x, y)


def test_non_lattice_rejected():
    # two incomparable maximal elements have no join
    with pytest.raises(OrderError):
        FinLattice(FinPoset.from_pairs("0ab", [("0", "a"), ("0", "b")]))


def test_distributivity():
    m3 = FinLattice.from_covers("0abc1", [("0", "a"), ("0", "b"), ("0", "c"),
                                          ("a", "1"), ("b", "1"), ("c", "1")])
    assert not m3.is_distributive()
    assert FinLattice(FinPoset.chain(4)).is_distributive()


@pytest.mark.parametrize("L", [L for n in range(1, 6) for L in lattices_up_to_iso(n)])
def test_scott_opens_definitional(L):
    # every up-set is Scott open in a finite lattice; nothing else is
    ups = {frozenset(U) for U in L.order.up_sets()}
    assert {frozenset(H) for H in scott_opens(L)} == ups
    for S in subsets(L.elements):
        assert is_scott_open(L, S) == (frozenset(S) in ups)
    assert all(way_below(L, u, v) == L.leq(u, v) for u in L for v in L)
    assert is_continuous_lattice(L)


def test_definitional_cap():
    L = FinLattice(FinPoset.chain(DEFINITIONAL_CAP + 1))
    with pytest.raises(CapExceeded):
        scott_opens(L)
