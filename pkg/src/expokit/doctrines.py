"""The five double categories handled by the engine.

=====  ===================  =====================================  =========================
tag    objects              verticals ``X0 -/-> X1``               cell ``m -> n`` over f0, f1
=====  ===================  =====================================  =========================
cat    FinCat               Profunctor                             natural family of maps
top    FinSpace             MeetMap  O(X0) -> O(X1)                f1^-1 n(V) ⊆ m(f0^-1 V)
loc    FinLattice (frame)   MeetMap  X0 -> X1                      f1* n(V) <= m(f0* V)
pos    FinPoset             OrderIdeal ⊆ X0 x X1                   (x0,x1) in m => (f0x0,f1x1) in n
rel    FinPoset (discrete)  Relation ⊆ X0 x X1                     same as pos
=====  ===================  =====================================  =========================

Horizontal maps are dicts on points (top/pos/rel), FinFunctors (cat), and
frame homomorphisms ``f*: Y -> X`` stored as dicts (loc, note the reversed
direction).  All doctrines except cat are flat: a cell is a proposition.
"""

from __future__ import annotations

from enum import Enum
from functools import lru_cache
from typing import NamedTuple

from . import cat as _cat
from .cat import FinCat, FinFunctor, Profunctor
from .enumeration import functions, meet_maps, monotone_maps
from .order import FinLattice, FinPoset, FinSpace, OrderError, open_lattice, sort_key


class Doctrine(str, Enum):
    CAT = "cat"
    TOP = "top"
    LOC = "loc"
    POS = "pos"
    REL = "rel"

    @property
    def flat(self) -> bool:
        return self is not Doctrine.CAT

    def __str__(self):
        return self.value


def as_doctrine(d) -> Doctrine:
    if isinstance(d, Doctrine):
        return d
    try:
        return Doctrine(str(d).lower())
    except ValueError:
        raise ValueError(f"unknown doctrine {d!r}") from None


class DoctrineError(ValueError):
    """Boundary or type mismatch between doctrine data."""


# ---------------------------------------------------------------------------
# Vertical morphism types


class MeetMap:
    """A map between finite lattices preserving the top and binary meets."""

    def __init__(self, source: FinLattice, target: FinLattice, table, check=True):
        self.source = source
        self.target = target
        self.table = dict(table)
        if check:
            problems = self.violations()
            if problems:
                raise DoctrineError(problems[0])

    def violations(self) -> list:
        L0, L1 = self.source, self.target
        out = []
        for x in L0:
            if x not in self.table or self.table[x] not in L1.order:
                out.append(f"no value in the target for {x!r}")
        if out:
            return out
        if self.table[L0.top] != L1.top:
            out.append("top is not preserved")
        for x in L0:
            for y in L0:
                if self.table[L0.meet(x, y)] != L1.meet(self.table[x], self.table[y]):
                    out.append(f"meet of {x!r} and {y!r} is not preserved")
                    return out
        return out

    @classmethod
    def identity(cls, L: FinLattice):
        return cls(L, L, {x: x for x in L}, check=False)

    @classmethod
    def constant_top(cls, L0: FinLattice, L1: FinLattice):
        return cls(L0, L1, {x: L1.top for x in L0}, check=False)

    def __call__(self, x):
        return self.table[x]

    def preimage(self, H) -> frozenset:
        H = set(H)
        return frozenset(x for x in self.source if self.table[x] in H)

    def then(self, other: "MeetMap") -> "MeetMap":
        """``other . self``."""
        if other.source != self.target:
            raise DoctrineError("meet maps are not composable")
        return MeetMap(self.source, other.target,
                       {x: other.table[y] for x, y in self.table.items()}, check=False)

    def __eq__(self, other):
        return (isinstance(other, MeetMap) and self.source == other.source
                and self.target == other.target and self.table == other.table)

    def __hash__(self):
        return hash(frozenset(self.table.items()))

    def __repr__(self):
        items = sorted(self.table.items(), key=lambda kv: sort_key(kv[0]))
        return "MeetMap({" + ", ".join(f"{_show(k)}: {_show(v)}" for k, v in items) + "})"


def _show(x):
    if isinstance(x, frozenset):
        return "{" + ", ".join(_show(i) for i in sorted(x, key=sort_key)) + "}"
    return repr(x)


class OrderIdeal:
    """A subset of ``source x target`` that is down-closed in the source and
    up-closed in the target."""

    def __init__(self, source: FinPoset, target: FinPoset, pairs, check=True):
        self.source = source
        self.target = target
        self.pairs = frozenset(tuple(p) for p in pairs)
        if check:
            problems = self.violations()
            if problems:
                raise DoctrineError(problems[0])

    def violations(self) -> list:
        out = []
        for x0, x1 in self.pairs:
            if x0 not in self.source or x1 not in self.target:
                return [f"pair {(x0, x1)!r} is not well typed"]
        for x0, x1 in self.pairs:
            for y0 in self.source.down_closure([x0]):
                for y1 in self.target.up_closure([x1]):
                    if (y0, y1) not in self.pairs:
                        out.append(f"pair {(y0, y1)!r} is missing (implied by {(x0, x1)!r})")
        return out

    def __contains__(self, pair):
        return tuple(pair) in self.pairs

    def image(self, x0) -> frozenset:
        return frozenset(x1 for (a, x1) in self.pairs if a == x0)

    def __eq__(self, other):
        return (isinstance(other, OrderIdeal) and self.source == other.source
                and self.target == other.target and self.pairs == other.pairs)

    def __hash__(self):
        return hash(self.pairs)

    def __repr__(self):
        return f"{type(self).__name__}({sorted(self.pairs, key=sort_key)!r})"


class Relation(OrderIdeal):
    """A plain relation between finite sets (discrete posets)."""

    def violations(self) -> list:
        for x0, x1 in self.pairs:
            if x0 not in self.source or x1 not in self.target:
                return [f"pair {(x0, x1)!r} is not well typed"]
        return []


# ---------------------------------------------------------------------------
# Object helpers


@lru_cache(maxsize=None)
def opens_of(Y: FinSpace) -> FinLattice:
    """Cached ``open_lattice``."""
    return open_lattice(Y)


@lru_cache(maxsize=None)
def space_of(L: FinLattice) -> FinSpace:
    """Recover the space whose open lattice is ``L`` (elements are point sets)."""
    points = sorted(L.top, key=sort_key)
    return FinSpace.from_opens(points, L.elements)


def join_irreducibles(L: FinLattice) -> list:
    out = []
    for j in L:
        if j == L.bottom:
            continue
        lower = [x for x in L if L.leq(x, j) and x != j]
        if L.join_all(lower) != j:
            out.append(j)
    return out


@lru_cache(maxsize=None)
def frame_space(L: FinLattice) -> FinSpace:
    """Points of a finite distributive lattice: its join-irreducibles.

    With opens as down-sets, element ``a`` corresponds to the open
    ``{j : j <= a}``.
    """
    if not L.is_distributive():
        raise DoctrineError("lattice is not a frame (not distributive)")
    pts = join_irreducibles(L)
    return FinSpace(FinPoset(pts, [(a, b) for a in pts for b in pts if L.leq(a, b)]))


def frame_to_open(L: FinLattice, a) -> frozenset:
    return frozenset(j for j in frame_space(L).points if L.leq(j, a))


def open_to_frame(L: FinLattice, U) -> object:
    return L.join_all(U)


def object_kind(d, X) -> bool:
    d = as_doctrine(d)
    if d is Doctrine.TOP:
        return isinstance(X, FinSpace)
    if d is Doctrine.LOC:
        return isinstance(X, FinLattice)
    if d is Doctrine.CAT:
        return isinstance(X, FinCat)
    if d is Doctrine.REL:
        return isinstance(X, FinPoset) and len(X.relation) == len(X)
    return isinstance(X, FinPoset)


def size(d, X) -> int:
    d = as_doctrine(d)
    if d is Doctrine.CAT:
        return len(X.morphisms)
    return len(X)


# ---------------------------------------------------------------------------
# Vertical structure


def v_identity(d, X):
    d = as_doctrine(d)
    if d is Doctrine.TOP:
        return MeetMap.identity(opens_of(X))
    if d is Doctrine.LOC:
        return MeetMap.identity(X)
    if d is Doctrine.POS:
        return OrderIdeal(X, X, X.relation, check=False)
    if d is Doctrine.REL:
        return Relation(X, X, [(x, x) for x in X.elements], check=False)
    return _cat.hom_profunctor(X)


def v_compose(d, m, n):
    """The composite ``n . m`` of ``m: X0 -/-> X1`` and ``n: X1 -/-> X2``."""
    d = as_doctrine(d)
    if d in (Doctrine.TOP, Doctrine.LOC):
        return m.then(n)
    if d is Doctrine.CAT:
        return _cat.compose_prof(m, n)
    if m.target != n.source:
        raise DoctrineError("verticals are not composable")
    by_mid = {}
    for x1, x2 in n.pairs:
        by_mid.setdefault(x1, []).append(x2)
    pairs = {(x0, x2) for (x0, x1) in m.pairs for x2 in by_mid.get(x1, ())}
    return type(m)(m.source, n.target, pairs, check=False)


def v_source(d, m):
    d = as_doctrine(d)
    if d is Doctrine.TOP:
        return space_of(m.source)
    return m.source


def v_target(d, m):
    d = as_doctrine(d)
    if d is Doctrine.TOP:
        return space_of(m.target)
    return m.target


def verticals(d, X0, X1):
    """Enumerate every vertical ``X0 -/-> X1`` (flat doctrines)."""
    d = as_doctrine(d)
    if d is Doctrine.TOP:
        L0, L1 = opens_of(X0), opens_of(X1)
        for t in meet_maps(L0, L1):
            yield MeetMap(L0, L1, t, check=False)
    elif d is Doctrine.LOC:
        for t in meet_maps(X0, X1):
            yield MeetMap(X0, X1, t, check=False)
    elif d is Doctrine.POS:
        # ideals = up-sets of X0^op x X1
        Q = X0.dual().product(X1)
        for U in Q.up_sets():
            yield OrderIdeal(X0, X1, U, check=False)
    elif d is Doctrine.REL:
        from .enumeration import subsets
        for S in subsets([(a, b) for a in X0.elements for b in X1.elements]):
            yield Relation(X0, X1, S, check=False)
    else:
        raise DoctrineError("vertical enumeration is only available for flat doctrines")


def make_vertical(d, X0, X1, data):
    """Build a vertical from plain data: an open/element table or a pair list."""
    d = as_doctrine(d)
    if d is Doctrine.TOP:
        return MeetMap(opens_of(X0), opens_of(X1),
                       {frozenset(k): frozenset(v) for k, v in dict(data).items()})
    if d is Doctrine.LOC:
        return MeetMap(X0, X1, data)
    if d is Doctrine.POS:
        return OrderIdeal(X0, X1, data)
    if d is Doctrine.REL:
        return Relation(X0, X1, data)
    raise DoctrineError("profunctors are built with cat.Profunctor")


# ---------------------------------------------------------------------------
# Cells


def _pre(f, S):
    """Preimage of a point set along a dict map (``None`` = identity)."""
    if f is None:
        return frozenset(S)
    S = set(S)
    return frozenset(x for x, y in f.items() if y in S)


def cell_exists(d, f0, m, n, f1) -> bool:
    """Whether a cell ``m -> n`` exists over horizontals f0 (source) and f1
    (target).  ``None`` stands for an identity.  Flat doctrines only."""
    d = as_doctrine(d)
    if d is Doctrine.TOP:
        for V in n.source:
            if not _pre(f1, n(V)) <= m(_pre(f0, V)):
                return False
        return True
    if d is Doctrine.LOC:
        for V in n.source:
            lhs = n(V) if f1 is None else f1[n(V)]
            rhs = m(V if f0 is None else f0[V])
            if not m.target.leq(lhs, rhs):
                return False
        return True
    if d in (Doctrine.POS, Doctrine.REL):
        g0 = f0 if f0 is not None else {}
        g1 = f1 if f1 is not None else {}
        return all((g0.get(x0, x0), g1.get(x1, x1)) in n.pairs for (x0, x1) in m.pairs)
    raise DoctrineError("cells in cat carry data; use cell_check")


def special_cell_exists(d, m, n) -> bool:
    return cell_exists(d, None, m, n, None)


def cell_check(d, m, n, data, f0=None, f1=None) -> list:
    """Problems with a cat cell ``m -> n(f0-, f1-)`` given by element data."""
    if as_doctrine(d) is not Doctrine.CAT:
        raise DoctrineError("cell_check is for cat")
    return _cat.is_natural_map(m, n, data, f0, f1)


def special_iso(d, m, n, cap: int = 6) -> bool:
    """Flat: equality of verticals.  Cat: a bijective natural cell exists."""
    d = as_doctrine(d)
    if d.flat:
        return m == n
    return _cat.find_profunctor_iso(m, n, cap) is not None


# ---------------------------------------------------------------------------
# Zero object


def zero_object(d):
    d = as_doctrine(d)
    if d is Doctrine.TOP:
        return FinSpace.empty()
    if d is Doctrine.LOC:
        return opens_of(FinSpace.empty())
    if d is Doctrine.CAT:
        return FinCat.empty()
    return FinPoset((), ())


def to_zero(d, X):
    """The unique vertical ``X -/-> 0``."""
    d = as_doctrine(d)
    Z = zero_object(d)
    if d is Doctrine.TOP:
        L = opens_of(X)
        return MeetMap.constant_top(L, opens_of(Z))
    if d is Doctrine.LOC:
        return MeetMap.constant_top(X, Z)
    if d is Doctrine.CAT:
        return _cat.empty_profunctor(X, Z)
    return (Relation if d is Doctrine.REL else OrderIdeal)(X, Z, (), check=False)


def from_zero(d, X):
    """The unique vertical ``0 -/-> X``."""
    d = as_doctrine(d)
    Z = zero_object(d)
    if d is Doctrine.TOP:
        L = opens_of(X)
        return MeetMap(opens_of(Z), L, {frozenset(): L.top}, check=False)
    if d is Doctrine.LOC:
        return MeetMap(Z, X, {Z.top: X.top}, check=False)
    if d is Doctrine.CAT:
        return _cat.empty_profunctor(Z, X)
    return (Relation if d is Doctrine.REL else OrderIdeal)(Z, X, (), check=False)


def zero_vertical(d, X0, X1):
    """The vertical ``X0 -/-> 0 -/-> X1``."""
    return v_compose(d, to_zero(d, X0), from_zero(d, X1))


def from_zero_horizontal(d, X):
    """The unique horizontal map out of the zero object."""
    d = as_doctrine(d)
    if d is Doctrine.CAT:
        return FinFunctor(FinCat.empty(), X, {}, {}, check=False)
    if d is Doctrine.LOC:
        return {x: zero_object(d).top for x in X}
    return {}


# ---------------------------------------------------------------------------
# Horizontal maps and products


def horizontal_maps(d, X, Y):
    """Enumerate horizontal maps ``X -> Y``."""
    d = as_doctrine(d)
    if d is Doctrine.TOP:
        yield from monotone_maps(X.order, Y.order)
    elif d is Doctrine.POS:
        yield from monotone_maps(X, Y)
    elif d is Doctrine.REL:
        yield from functions(X.elements, Y.elements)
    elif d is Doctrine.CAT:
        yield from _cat.functors(X, Y)
    else:
        PX, PY = frame_space(X), frame_space(Y)
        for f in monotone_maps(PX.order, PY.order):
            yield {b: X.join_all(_pre(f, frame_to_open(Y, b))) for b in Y}


def is_horizontal(d, X, Y, f) -> bool:
    d = as_doctrine(d)
    if d is Doctrine.CAT:
        return not f.violations()
    if d is Doctrine.LOC:
        try:
            MeetMap(Y, X, f)
        except DoctrineError:
            return False
        return all(f[Y.join(a, b)] == X.join(f[a], f[b]) for a in Y for b in Y) and f[Y.bottom] == X.bottom
    P = X.order if d is Doctrine.TOP else X
    Q = Y.order if d is Doctrine.TOP else Y
    if set(f) != set(P.elements) or not all(v in Q for v in f.values()):
        return False
    if d is Doctrine.REL:
        return True
    return all(Q.leq(f[x], f[y]) for (x, y) in P.relation)


class Product(NamedTuple):
    obj: object
    p1: object
    p2: object


def product(d, X, Y) -> Product:
    d = as_doctrine(d)
    if d is Doctrine.TOP:
        P = X.product(Y)
        return Product(P, {p: p[0] for p in P.points}, {p: p[1] for p in P.points})
    if d in (Doctrine.POS, Doctrine.REL):
        P = X.product(Y)
        return Product(P, {p: p[0] for p in P.elements}, {p: p[1] for p in P.elements})
    if d is Doctrine.CAT:
        P = X.product(Y)
        p1 = FinFunctor(P, X, {a: a[0] for a in P.objects}, {f: f[0] for f in P.morphisms}, check=False)
        p2 = FinFunctor(P, Y, {a: a[1] for a in P.objects}, {f: f[1] for f in P.morphisms}, check=False)
        return Product(P, p1, p2)
    SX, SY = frame_space(X), frame_space(Y)
    S = SX.product(SY)
    L = opens_of(S)
    p1 = {a: frozenset(p for p in S.points if p[0] in frame_to_open(X, a)) for a in X}
    p2 = {b: frozenset(p for p in S.points if p[1] in frame_to_open(Y, b)) for b in Y}
    return Product(L, p1, p2)


def product_vertical(d, m, n):
    """The vertical ``m x n`` between products of boundaries.

    Flat doctrines: each vertical is glued into an object over the
    two-element chain, the fibre product over the base is taken, and the
    result is decomposed again.  Cat: componentwise product of profunctors.
    """
    d = as_doctrine(d)
    if d is Doctrine.CAT:
        return _cat.product_profunctor(m, n)
    if d is Doctrine.LOC:
        # the product frame is the open lattice of the product of point spaces
        return product_vertical(Doctrine.TOP, loc_to_top_vertical(m), loc_to_top_vertical(n))
    from .glueing import fiber_product, glue, decompose
    from .laxcat import LaxFunctor
    two = FinPoset.chain(2)
    qs = []
    for v in (m, n):
        F = LaxFunctor(d, two, {0: v_source(d, v), 1: v_target(d, v)}, {(0, 1): v})
        qs.append(glue(F))
    F = decompose(fiber_product(qs[0], qs[1]))
    strip = {}
    for b in (0, 1):
        pts = F.objects[b].points if d is Doctrine.TOP else F.objects[b].elements
        for p in pts:
            strip[p] = (p[0][1], p[1][1])
    obj0 = product(d, v_source(d, m), v_source(d, n)).obj
    obj1 = product(d, v_target(d, m), v_target(d, n)).obj
    v = F.verticals[(0, 1)]
    if d is Doctrine.TOP:
        L0, L1 = opens_of(obj0), opens_of(obj1)
        table = {frozenset(strip[p] for p in U): frozenset(strip[p] for p in W) for U, W in v.table.items()}
        return MeetMap(L0, L1, table, check=False)
    return type(m)(obj0, obj1, {(strip[a], strip[b]) for a, b in v.pairs}, check=False)


def loc_to_top_vertical(m: MeetMap) -> MeetMap:
    """Transport a frame vertical to the open lattices of the point spaces."""
    L0, L1 = m.source, m.target
    O0, O1 = opens_of(frame_space(L0)), opens_of(frame_space(L1))
    return MeetMap(O0, O1, {U: frame_to_open(L1, m(L0.join_all(U))) for U in O0}, check=False)


def top_to_loc_vertical(m: MeetMap, L0: FinLattice, L1: FinLattice) -> MeetMap:
    """Inverse of :func:`loc_to_top_vertical` for given frames."""
    return MeetMap(L0, L1, {a: L1.join_all(m(frame_to_open(L0, a))) for a in L0}, check=False)
