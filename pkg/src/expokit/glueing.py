"""Objects over a base and the glue/decompose equivalence.

``glue`` turns a lax functor over ``B`` into a single object with a
projection onto the base object ``gamma1(B)``; ``decompose`` goes back.
Glued points are tagged ``(b, x)``.

For top the glued space has, as open sets, the tuples ``(U_b)`` of fibre
opens with ``U_c ⊆ X_bc(U_b)`` for all ``b < c``.  Its specialization
order therefore relates ``(b, x) <= (c, y)`` for ``b < c`` exactly when
``y`` lies outside ``X_bc(X_b minus up(x))``.
"""

from __future__ import annotations

from itertools import product as iproduct

from . import doctrines as dct
from .doctrines import Doctrine, MeetMap, OrderIdeal, Relation, as_doctrine, opens_of
from .laxcat import LaxFunctor, strict_pairs, strict_triples
from .order import FinPoset, FinPreorder, FinSpace, OrderError, sort_key


class ObjectOverB:
    """An object of a doctrine with a horizontal map onto the base object.

    ``projection`` is a dict point -> base element for top/pos/rel, a
    FinFunctor onto the base category for cat, and a frame homomorphism
    (down-set of B -> element of the frame) for loc.
    """

    def __init__(self, doctrine, total, base: FinPoset, projection):
        self.doctrine = as_doctrine(doctrine)
        self.total = total
        self.base = base
        self.projection = projection

    def __repr__(self):
        return f"ObjectOverB({self.doctrine.value}, {self.total!r})"

    def __eq__(self, other):
        return (isinstance(other, ObjectOverB) and self.doctrine == other.doctrine
                and self.total == other.total and self.base == other.base
                and self.projection == other.projection)

    def __hash__(self):
        return hash((self.doctrine, self.base))

    @property
    def order(self) -> FinPoset:
        """Specialization order of the total object (top/pos/rel)."""
        return self.total.order if self.doctrine is Doctrine.TOP else self.total

    @property
    def points(self) -> tuple:
        if self.doctrine is Doctrine.CAT:
            return self.total.objects
        return self.order.elements

    def over(self, x):
        if self.doctrine is Doctrine.CAT:
            return self.projection.obj_map[x]
        return self.projection[x]

    def fibre(self, b) -> list:
        return [x for x in self.points if self.over(x) == b]

    def validate(self) -> list:
        d = self.doctrine
        if d is Doctrine.CAT:
            return self.projection.violations()
        if d is Doctrine.LOC:
            return _loc_projection_problems(self)
        P = self.order
        out = []
        for x in P.elements:
            if self.projection.get(x) not in self.base:
                out.append(f"point {x!r} has no image in the base")
        if out:
            return out
        for x, y in P.relation:
            if not self.base.leq(self.projection[x], self.projection[y]):
                out.append(f"projection is not monotone at {x!r} <= {y!r}")
        if d is Doctrine.REL:
            for x, y in P.relation:
                if x != y and self.projection[x] == self.projection[y]:
                    out.append(f"fibre over {self.projection[x]!r} is not discrete")
        return out


def _loc_projection_problems(q) -> list:
    base_frame = gamma1(Doctrine.LOC, q.base)
    if not dct.is_horizontal(Doctrine.LOC, q.total, base_frame, q.projection):
        return ["projection is not a frame homomorphism"]
    return []


# ---------------------------------------------------------------------------
# Base objects


def gamma1(d, B: FinPoset):
    """The object that glues the terminal lax functor over ``B``."""
    d = as_doctrine(d)
    if d is Doctrine.TOP:
        return FinSpace(B)
    if d is Doctrine.LOC:
        return opens_of(FinSpace(B))
    if d is Doctrine.REL:
        return FinPoset(["*"], [])
    if d is Doctrine.CAT:
        from .cat import FinCat
        return FinCat.from_poset(B)
    return B


def identity_over(d, B: FinPoset) -> ObjectOverB:
    """``gamma1(B)`` over itself."""
    d = as_doctrine(d)
    if d is Doctrine.TOP:
        return ObjectOverB(d, FinSpace(B), B, {b: b for b in B.elements})
    if d in (Doctrine.POS, Doctrine.REL):
        # for rel the base is glued as a poset with one-point fibres
        return ObjectOverB(d, B, B, {b: b for b in B.elements})
    if d is Doctrine.LOC:
        L = opens_of(FinSpace(B))
        return ObjectOverB(d, L, B, {D: D for D in L})
    from .cat import FinCat, FinFunctor
    C = FinCat.from_poset(B)
    return ObjectOverB(d, C, B, FinFunctor(C, C, {a: a for a in C.objects},
                                           {f: f for f in C.morphisms}, check=False))


def subset_over(B: FinPoset, A, d=Doctrine.TOP) -> ObjectOverB:
    """The inclusion of a subset ``A`` of the base, as an object over B."""
    d = as_doctrine(d)
    sub = B.subposet(A)
    if d is Doctrine.TOP:
        return ObjectOverB(d, FinSpace(sub), B, {a: a for a in sub.elements})
    if d is Doctrine.CAT:
        from .cat import FinCat, FinFunctor
        C, D = FinCat.from_poset(sub), FinCat.from_poset(B)
        return ObjectOverB(d, C, B, FinFunctor(C, D, {a: a for a in C.objects},
                                               {f: f for f in C.morphisms}, check=False))
    return ObjectOverB(d, sub, B, {a: a for a in sub.elements})


# ---------------------------------------------------------------------------
# Glue


def glued_opens(F: LaxFunctor) -> list:
    """Open sets of the glued top object, straight from the definition.

    Each result is a dict ``b -> U_b``; enumeration runs along a linear
    extension of the base so every constraint is checked once.
    """
    B = F.base
    order = B.linear_extension()
    below = {c: [b for b in order if B.lt(b, c)] for c in order}
    out = []

    def rec(k, U):
        if k == len(order):
            out.append(dict(U))
            return
        c = order[k]
        bound = None
        for b in below[c]:
            img = F.verticals[(b, c)](U[b])
            bound = img if bound is None else bound & img
        for V in opens_of(F.objects[c]):
            if bound is None or V <= bound:
                U[c] = V
                rec(k + 1, U)
        U.pop(c, None)

    rec(0, {})
    return out


def glue(F: LaxFunctor) -> ObjectOverB:
    d = F.doctrine
    B = F.base
    if d is Doctrine.CAT:
        from .catprof import benabou_glue
        return benabou_glue(F)
    if d is Doctrine.LOC:
        q = glue(loc_to_top(F))
        S = q.total
        L = opens_of(S)
        proj = {D: frozenset(p for p in S.points if q.projection[p] in D) for D in gamma1(d, B)}
        return ObjectOverB(d, L, B, proj)
    points = [(b, x) for b in B.elements for x in F.points(b)]
    proj = {p: p[0] for p in points}
    rel = []
    if d is Doctrine.TOP:
        for b in B.elements:
            rel += [((b, x), (b, y)) for (x, y) in F.objects[b].order.relation]
        for b, c in strict_pairs(B):
            Xb = F.objects[b]
            m = F.verticals[(b, c)]
            for x in Xb.points:
                rest = frozenset(Xb.points) - Xb.order.up_closure([x])
                blocked = m(rest)
                rel += [((b, x), (c, y)) for y in F.points(c) if y not in blocked]
        try:
            total = FinSpace(FinPoset(points, rel))
        except OrderError as exc:
            raise OrderError(f"glued space is not T0: {exc}") from None
        return ObjectOverB(d, total, B, proj)
    for b in B.elements:
        rel += [((b, x), (b, y)) for (x, y) in F.objects[b].relation]
    for b, c in strict_pairs(B):
        rel += [((b, x), (c, y)) for (x, y) in F.verticals[(b, c)].pairs]
    return ObjectOverB(d, FinPoset(points, rel), B, proj)


# ---------------------------------------------------------------------------
# Decompose


def decompose(q: ObjectOverB, untag: bool = False) -> LaxFunctor:
    """Fibres and connecting verticals of an object over the base.

    With ``untag`` the glue tags ``(b, x)`` are stripped from fibre points,
    so ``decompose(glue(F), untag=True) == F``.
    """
    d = q.doctrine
    B = q.base
    if d is Doctrine.CAT:
        from .catprof import benabou_decompose
        return benabou_decompose(q)
    if d is Doctrine.LOC:
        # frame points are join-irreducibles, so there are no tags to strip
        return top_to_loc(decompose(loc_over_to_top(q)))
    P = q.order
    fibres = {b: [x for x in P.elements if q.projection[x] == b] for b in B.elements}
    if untag:
        name = {}
        for b, xs in fibres.items():
            for x in xs:
                if not (isinstance(x, tuple) and len(x) == 2 and x[0] == b):
                    raise ValueError(f"point {x!r} does not carry the tag {b!r}")
                name[x] = x[1]
    else:
        name = {x: x for x in P.elements}
    objects = {}
    for b, xs in fibres.items():
        sub = P.subposet(xs).relabel(name)
        objects[b] = FinSpace(sub) if d is Doctrine.TOP else sub
    verts = {}
    for b, c in strict_pairs(B):
        if d is Doctrine.TOP:
            Lb, Lc = opens_of(objects[b]), opens_of(objects[c])
            down = {y: [name[x] for x in fibres[b] if P.leq(x, y)] for y in fibres[c]}
            table = {U: frozenset(name[y] for y in fibres[c] if set(down[y]) <= U) for U in Lb}
            verts[(b, c)] = MeetMap(Lb, Lc, table, check=False)
        else:
            pairs = [(name[x], name[y]) for x in fibres[b] for y in fibres[c] if P.leq(x, y)]
            kind = Relation if d is Doctrine.REL else OrderIdeal
            verts[(b, c)] = kind(objects[b], objects[c], pairs, check=False)
    return LaxFunctor(d, B, objects, verts)


# ---------------------------------------------------------------------------
# Loc <-> Top


def loc_to_top(F: LaxFunctor) -> LaxFunctor:
    objects = {b: dct.frame_space(L) for b, L in F.objects.items()}
    verts = {k: dct.loc_to_top_vertical(v) for k, v in F.verticals.items()}
    return LaxFunctor(Doctrine.TOP, F.base, objects, verts)


def top_to_loc(F: LaxFunctor) -> LaxFunctor:
    objects = {b: opens_of(Y) for b, Y in F.objects.items()}
    return LaxFunctor(Doctrine.LOC, F.base, objects, dict(F.verticals))


def loc_over_to_top(q: ObjectOverB) -> ObjectOverB:
    S = dct.frame_space(q.total)
    B = q.base
    proj = {}
    for j in S.points:
        over = [b for b in B.elements if q.total.leq(j, q.projection[B.down_closure([b])])]
        least = [b for b in over if all(B.leq(b, c) for c in over)]
        if len(least) != 1:
            raise OrderError(f"point {j!r} has no well-defined image in the base")
        proj[j] = least[0]
    return ObjectOverB(Doctrine.TOP, S, B, proj)


# ---------------------------------------------------------------------------
# Restriction, fibre products, pushouts


def restrict_over(q: ObjectOverB, A) -> ObjectOverB:
    """Pullback of ``q`` to the subposet ``A`` of the base."""
    d = q.doctrine
    A = set(A)
    sub = q.base.subposet(A)
    if d is Doctrine.CAT:
        from .catprof import restrict_functor
        return restrict_functor(q, A)
    if d is Doctrine.LOC:
        return top_over_to_loc(restrict_over(loc_over_to_top(q), A))
    keep = [x for x in q.points if q.projection[x] in A]
    P = q.order.subposet(keep)
    total = FinSpace(P) if d is Doctrine.TOP else P
    return ObjectOverB(d, total, sub, {x: q.projection[x] for x in keep})


def top_over_to_loc(q: ObjectOverB) -> ObjectOverB:
    L = opens_of(q.total)
    proj = {D: frozenset(p for p in q.total.points if q.projection[p] in D) for D in gamma1(Doctrine.LOC, q.base)}
    return ObjectOverB(Doctrine.LOC, L, q.base, proj)


def fiber_product(q1: ObjectOverB, q2: ObjectOverB) -> ObjectOverB:
    """``q1 x_B q2``; points are pairs ``(x, y)`` lying over the same element."""
    d = q1.doctrine
    if d is Doctrine.CAT:
        from .catprof import fiber_product_cat
        return fiber_product_cat(q1, q2)
    if d is Doctrine.LOC:
        return top_over_to_loc(fiber_product(loc_over_to_top(q1), loc_over_to_top(q2)))
    P1, P2 = q1.order, q2.order
    pts = [(x, y) for x in P1.elements for y in P2.elements if q1.projection[x] == q2.projection[y]]
    keep = set(pts)
    rel = [((x, y), (x2, y2)) for (x, x2) in P1.relation for (y, y2) in P2.relation
           if (x, y) in keep and (x2, y2) in keep]
    P = FinPoset(pts, rel)
    total = FinSpace(P) if d is Doctrine.TOP else P
    return ObjectOverB(d, total, q1.base, {p: q1.projection[p[0]] for p in pts})


def pushout_preorder(q: ObjectOverB, b, c, e) -> FinPreorder:
    """The pushout of ``Y_bc <- Y_c -> Y_ce`` computed as a preorder on the
    union of the two pieces."""
    Ybc = restrict_over(q, [b, c]).order
    Yce = restrict_over(q, [c, e]).order
    pts = list(dict.fromkeys(list(Ybc.elements) + list(Yce.elements)))
    return FinPreorder.from_pairs(pts, list(Ybc.relation) + list(Yce.relation))


def pushout_test(q: ObjectOverB, b, c, e) -> bool:
    """Whether ``Y_bce`` is the pushout of ``Y_bc <- Y_c -> Y_ce``."""
    d = q.doctrine
    if d is Doctrine.CAT:
        from .catprof import pushout_test_cat
        return pushout_test_cat(q, b, c, e)
    if d is Doctrine.LOC:
        return pushout_test(loc_over_to_top(q), b, c, e)
    glued = pushout_preorder(q, b, c, e)
    whole = restrict_over(q, [b, c, e]).order
    return glued.relation == whole.relation


# ---------------------------------------------------------------------------
# Isomorphisms


def order_isos(P: FinPreorder, Q: FinPreorder, label_p=None, label_q=None):
    """Enumerate label-preserving order isomorphisms ``P -> Q``."""
    if len(P) != len(Q):
        return
    lp = label_p or {}
    lq = label_q or {}
    elems = list(P.elements)

    def sig(R, x, lab):
        return (sort_key(lab.get(x)), bin(R.below[R.index[x]]).count("1"),
                bin(R.above[R.index[x]]).count("1"))

    sp = {x: sig(P, x, lp) for x in elems}
    sq = {y: sig(Q, y, lq) for y in Q.elements}

    def rec(k, f, used):
        if k == len(elems):
            yield dict(f)
            return
        x = elems[k]
        for y in Q.elements:
            if y in used or sq[y] != sp[x]:
                continue
            if all(P.leq(z, x) == Q.leq(f[z], y) and P.leq(x, z) == Q.leq(y, f[z]) for z in elems[:k]):
                f[x] = y
                used.add(y)
                yield from rec(k + 1, f, used)
                used.discard(y)
                del f[x]

    yield from rec(0, {}, set())


def find_iso_over(q1: ObjectOverB, q2: ObjectOverB):
    """An isomorphism of total objects commuting with the projections, or None."""
    d = q1.doctrine
    if d is Doctrine.CAT:
        from .catprof import find_iso_over_cat
        return find_iso_over_cat(q1, q2)
    if d is Doctrine.LOC:
        return find_iso_over(loc_over_to_top(q1), loc_over_to_top(q2))
    if q1.base != q2.base:
        return None
    return next(order_isos(q1.order, q2.order, q1.projection, q2.projection), None)


def _fibre_order(d, X):
    return X.order if d is Doctrine.TOP else X


def lax_iso(F: LaxFunctor, G: LaxFunctor):
    """Fibrewise isomorphisms transporting every vertical of F onto G (flat)."""
    d = F.doctrine
    if d is Doctrine.CAT:
        from .catprof import lax_iso_cat
        return lax_iso_cat(F, G)
    if d is Doctrine.LOC:
        return lax_iso(loc_to_top(F), loc_to_top(G))
    if F.base != G.base:
        return None
    elems = list(F.base.elements)
    options = []
    for b in elems:
        opts = list(order_isos(_fibre_order(d, F.objects[b]), _fibre_order(d, G.objects[b])))
        if not opts:
            return None
        options.append(opts)
    for fs in iproduct(*options):
        f = dict(zip(elems, fs))
        if all(_transports(d, f[b], f[c], F.verticals[(b, c)], G.verticals[(b, c)])
               for (b, c) in strict_pairs(F.base)):
            return f
    return None


def _transports(d, fb, fc, m, n) -> bool:
    if d is Doctrine.TOP:
        return all(n(frozenset(fb[x] for x in U)) == frozenset(fc[y] for y in m(U)) for U in m.source)
    return {(fb[x], fc[y]) for (x, y) in m.pairs} == n.pairs


def pseudo_iff_pushout(q: ObjectOverB) -> bool:
    """Cross-check on one object: pseudo exactly when every triple pushes out."""
    F = decompose(q)
    per = {t: pushout_test(q, *t) for t in strict_triples(q.base)}
    return bool(F.is_pseudo()) == all(per.values())
