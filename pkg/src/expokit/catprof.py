"""Categories over a poset: fibres and profunctors, glueing, the
factorization-lifting test and exponentials in Cat/B.

A category over ``B`` is an :class:`ObjectOverB` whose projection is a
functor onto ``FinCat.from_poset(B)`` (morphisms of the base are pairs
``(b, c)`` with ``b <= c``).
"""

from __future__ import annotations

from typing import NamedTuple

from .cat import CategoryError, FinCat, FinFunctor, Profunctor, functors
from .doctrines import Doctrine
from .glueing import ObjectOverB
from .laxcat import Check, LaxFunctor, strict_pairs, strict_triples
from .order import CapExceeded, FinPoset, sort_key
from .unionfind import UnionFind

ISO_OBJECT_CAP = 8


def over_poset(Y: FinCat, B: FinPoset, obj_map, mor_map=None) -> ObjectOverB:
    """Wrap a functor ``Y -> B`` given on objects (morphisms are forced)."""
    C = FinCat.from_poset(B)
    if mor_map is None:
        mor_map = {f: (obj_map[a], obj_map[b]) for f, (a, b) in Y.morphisms.items()}
    return ObjectOverB(Doctrine.CAT, Y, B, FinFunctor(Y, C, obj_map, mor_map))


def _fibre(Y: FinCat, q: FinFunctor, b) -> FinCat:
    objs = [a for a in Y.objects if q.obj_map[a] == b]
    return Y.full_subcategory(objs)


def benabou_decompose(q: ObjectOverB, untag: bool = False) -> LaxFunctor:
    """Fibre categories, profunctors of morphisms over ``b < c``, and the
    comparisons given by composition in the total category.

    With ``untag``, the tags added by :func:`benabou_glue` are stripped.
    """
    Y, p, B = q.total, q.projection, q.base
    if untag:
        on = {a: a[1] for a in Y.objects}
        mn = {f: f[2] for f in Y.morphisms}
    else:
        on = {a: a for a in Y.objects}
        mn = {f: f for f in Y.morphisms}

    def rename_cat(C):
        return FinCat([on[a] for a in C.objects], {mn[f]: (on[a], on[b]) for f, (a, b) in C.morphisms.items()},
                      {on[a]: mn[i] for a, i in C.identities.items()},
                      {(mn[g], mn[f]): mn[h] for (g, f), h in C.compose.items()}, check=False)

    objects = {b: rename_cat(_fibre(Y, p, b)) for b in B.elements}
    inv = {mn[f]: f for f in Y.morphisms}
    verts = {}
    for b, c in strict_pairs(B):
        Xb, Xc = objects[b], objects[c]
        elems = {mn[f]: (on[s], on[t]) for f, (s, t) in Y.morphisms.items() if p.mor_map[f] == (b, c)}
        left = {(x, g): mn[Y.compose[(inv[x], inv[g])]]
                for x, (s, t) in elems.items() for g in Xb.into(s)}
        right = {(h, x): mn[Y.compose[(inv[h], inv[x])]]
                 for x, (s, t) in elems.items() for h in Xc.out_of(t)}
        verts[(b, c)] = Profunctor(Xb, Xc, elems, left, right, check=False)
    F = LaxFunctor(Doctrine.CAT, B, objects, verts)
    comps = {}
    for t in strict_triples(B):
        b, c, e = t
        comp = F.composite(b, c, e)
        comps[t] = {label: mn[Y.compose[(inv[label[0]], inv[label[1]])]] for label in comp.elements}
    F.comparisons = comps
    return F


def benabou_glue(F: LaxFunctor) -> ObjectOverB:
    """Total category of a lax functor into profunctors.

    Objects are ``(b, a)``; morphisms are ``(b, c, x)`` where x is a
    morphism of ``X_b`` (``b == c``) or an element of ``X_bc``.
    """
    B = F.base
    objects = [(b, a) for b in B.elements for a in F.objects[b].objects]
    mors = {}
    for b in B.elements:
        Xb = F.objects[b]
        for f, (s, t) in Xb.morphisms.items():
            mors[(b, b, f)] = ((b, s), (b, t))
    for b, c in strict_pairs(B):
        for x, (s, t) in F.verticals[(b, c)].elements.items():
            mors[(b, c, x)] = ((b, s), (c, t))
    ids = {(b, a): (b, b, F.objects[b].identities[a]) for (b, a) in objects}
    comp = {}
    for (b, c, x), (s, t) in mors.items():
        for (c2, e, y), (s2, t2) in mors.items():
            if s2 != t:
                continue
            if b == c == e:
                z = F.objects[b].compose[(y, x)]
            elif b == c:
                z = F.verticals[(c, e)].left[(y, x)]
            elif c == e:
                z = F.verticals[(b, c)].right[(y, x)]
            else:
                z = F.comparisons[(b, c, e)][F.composite(b, c, e).pair_class[(y, x)]]
            comp[((c2, e, y), (b, c, x))] = (b, e, z)
    try:
        Y = FinCat(objects, mors, ids, comp)
    except CategoryError as exc:
        raise CategoryError(f"glued category is not a category: {exc}") from None
    C = FinCat.from_poset(B)
    p = FinFunctor(Y, C, {a: a[0] for a in objects}, {f: (f[0], f[1]) for f in mors}, check=False)
    return ObjectOverB(Doctrine.CAT, Y, B, p)


def restrict_functor(q: ObjectOverB, A) -> ObjectOverB:
    A = set(A)
    Y = q.total.full_subcategory([a for a in q.total.objects if q.projection.obj_map[a] in A])
    sub = q.base.subposet(A)
    C = FinCat.from_poset(sub)
    p = FinFunctor(Y, C, {a: q.projection.obj_map[a] for a in Y.objects},
                   {f: q.projection.mor_map[f] for f in Y.morphisms}, check=False)
    return ObjectOverB(Doctrine.CAT, Y, sub, p)


def fiber_product_cat(q1: ObjectOverB, q2: ObjectOverB) -> ObjectOverB:
    Y, Z = q1.total, q2.total
    p1, p2 = q1.projection, q2.projection
    objs = [(y, z) for y in Y.objects for z in Z.objects if p1.obj_map[y] == p2.obj_map[z]]
    mors = {(f, g): ((Y.src(f), Z.src(g)), (Y.tgt(f), Z.tgt(g)))
            for f in Y.morphisms for g in Z.morphisms if p1.mor_map[f] == p2.mor_map[g]}
    ids = {(y, z): (Y.identities[y], Z.identities[z]) for (y, z) in objs}
    comp = {}
    for (f1, g1), (s, t) in mors.items():
        for (f2, g2), (s2, t2) in mors.items():
            if s2 == t:
                comp[((f2, g2), (f1, g1))] = (Y.compose[(f2, f1)], Z.compose[(g2, g1)])
    P = FinCat(objs, mors, ids, comp, check=False)
    C = p1.target
    p = FinFunctor(P, C, {a: p1.obj_map[a[0]] for a in objs}, {f: p1.mor_map[f[0]] for f in mors}, check=False)
    return ObjectOverB(Doctrine.CAT, P, q1.base, p)


# ---------------------------------------------------------------------------
# Factorization lifting


def factorization_failure(Y: FinCat, q: FinFunctor):
    """First ``(alpha, (u, v))`` whose category of lifted factorizations is
    empty or disconnected, or ``None``."""
    C = q.target
    for alpha in Y.sorted_morphisms():
        s, t = Y.src(alpha), Y.tgt(alpha)
        qa = q.mor_map[alpha]
        qs, qt = q.obj_map[s], q.obj_map[t]
        for k in C.objects:
            for u in C.hom(qs, k):
                for v in C.hom(k, qt):
                    if C.compose[(v, u)] != qa:
                        continue
                    lifts = []
                    for y in Y.objects:
                        if q.obj_map[y] != k:
                            continue
                        for a1 in Y.hom(s, y):
                            if q.mor_map[a1] != u:
                                continue
                            for a2 in Y.hom(y, t):
                                if q.mor_map[a2] == v and Y.compose[(a2, a1)] == alpha:
                                    lifts.append((y, a1, a2))
                    if not lifts:
                        return alpha, (u, v), "no factorization lifts"
                    uf = UnionFind(lifts)
                    idk = C.identities[k]
                    for l1 in lifts:
                        for l2 in lifts:
                            for dlt in Y.hom(l1[0], l2[0]):
                                if (q.mor_map[dlt] == idk and Y.compose[(dlt, l1[1])] == l2[1]
                                        and Y.compose[(l2[2], dlt)] == l1[2]):
                                    uf.union(l1, l2)
                    if len(uf.classes()) > 1:
                        return alpha, (u, v), "lifted factorizations are not connected"
    return None


def giraud_conduche(q) -> Check:
    """Factorization lifting for a functor (or a category over a poset).

    The witness is ``(alpha, k)`` -- the morphism and the intermediate
    base object -- when the base is thin, and ``(alpha, (u, v))`` otherwise.
    """
    if isinstance(q, ObjectOverB):
        Y, p = q.total, q.projection
    else:
        Y, p = q.source, q
    bad = factorization_failure(Y, p)
    if bad is None:
        return Check(True, None)
    alpha, (u, v), _ = bad
    if p.target.is_thin():
        return Check(False, (alpha, p.target.tgt(u)))
    return Check(False, (alpha, (u, v)))


# ---------------------------------------------------------------------------
# Pushouts of the pieces over b < c < e


def pushout_test_cat(q: ObjectOverB, b, c, e) -> bool:
    """Whether the pieces over ``{b,c}`` and ``{c,e}`` glue to the part over
    ``{b,c,e}``.

    In the pushout every morphism from the b-fibre to the e-fibre is a
    formal composite through the c-fibre, modulo sliding c-fibre morphisms
    across; the comparison sends such a class to the actual composite.
    The test is that this comparison is bijective.
    """
    Y, p = q.total, q.projection
    over = p.mor_map
    firsts = [f for f in Y.morphisms if over[f] == (b, c)]
    seconds = [g for g in Y.morphisms if over[g] == (c, e)]
    mids = [h for h in Y.morphisms if over[h] == (c, c)]
    uf = UnionFind()
    for f in firsts:
        for g in seconds:
            if Y.tgt(f) == Y.src(g):
                uf.add((g, f))
    for h in mids:
        for f in firsts:
            if Y.tgt(f) != Y.src(h):
                continue
            hf = Y.compose[(h, f)]
            for g in seconds:
                if Y.src(g) == Y.tgt(h):
                    uf.union((Y.compose[(g, h)], f), (g, hf))
    image = {}
    for root in uf.classes():
        g, f = root
        image[root] = Y.compose[(g, f)]
    direct = [a for a in Y.morphisms if over[a] == (b, e)]
    values = list(image.values())
    return len(set(values)) == len(values) and set(values) == set(direct)


# ---------------------------------------------------------------------------
# Isomorphisms over the base


def find_iso_over_cat(q1: ObjectOverB, q2: ObjectOverB):
    """An isomorphism of categories commuting with the projections.

    Returns ``(object_map, morphism_map)`` or ``None``.
    """
    Y, Z = q1.total, q2.total
    p1, p2 = q1.projection, q2.projection
    if len(Y.objects) != len(Z.objects) or len(Y.morphisms) != len(Z.morphisms):
        return None
    if len(Y.objects) > ISO_OBJECT_CAP:
        raise CapExceeded(f"isomorphism search capped at {ISO_OBJECT_CAP} objects")

    def sig(C, p, a):
        return (sort_key(p.obj_map[a]), len(C.out_of(a)), len(C.into(a)), len(C.hom(a, a)))

    ys = list(Y.objects)
    mors = Y.sorted_morphisms()

    def rec_obj(k, om, used):
        if k == len(ys):
            yield dict(om)
            return
        a = ys[k]
        for z in Z.objects:
            if z in used or sig(Z, p2, z) != sig(Y, p1, a):
                continue
            if all(len(Y.hom(a, x)) == len(Z.hom(z, om[x])) and len(Y.hom(x, a)) == len(Z.hom(om[x], z))
                   for x in ys[:k]):
                om[a] = z
                used.add(z)
                yield from rec_obj(k + 1, om, used)
                used.discard(z)
                del om[a]

    def rec_mor(k, om, mm, used):
        if k == len(mors):
            return dict(mm)
        f = mors[k]
        a, b = Y.morphisms[f]
        for g in Z.hom(om[a], om[b]):
            if g in used or p2.mor_map[g] != p1.mor_map[f]:
                continue
            if Y.is_identity(f) != Z.is_identity(g):
                continue
            mm[f] = g
            ok = True
            for f2 in mors[:k + 1]:
                for f1 in mors[:k + 1]:
                    if (f2, f1) in Y.compose:
                        h = Y.compose[(f2, f1)]
                        if h in mm and Z.compose[(mm[f2], mm[f1])] != mm[h]:
                            ok = False
                            break
                if not ok:
                    break
            if ok:
                used.add(g)
                res = rec_mor(k + 1, om, mm, used)
                if res is not None:
                    return res
                used.discard(g)
            del mm[f]
        return None

    for om in rec_obj(0, {}, set()):
        mm = rec_mor(0, om, {}, set())
        if mm is not None:
            return om, mm
    return None


def lax_iso_cat(F: LaxFunctor, G: LaxFunctor):
    """Isomorphism of lax functors, decided through their total categories."""
    return find_iso_over_cat(benabou_glue(F), benabou_glue(G))


# ---------------------------------------------------------------------------
# Exponentials


class NotExponentiable(Exception):
    """The object is not exponentiable; ``witness`` locates the failure."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class VerificationFailed(Exception):
    """A constructed exponential was rejected by the adjunction oracle."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class Exponential(NamedTuple):
    """``obj`` over B together with the evaluation ``E x_B Y -> Z``."""

    obj: ObjectOverB
    evaluation: object
    report: object = None


def _families(Y, Z, sigma, tau, xs, pY, pZ, b, c):
    """Natural families t: x |-> t(x) for morphisms x of Y over (b, c)."""
    fib_b = [g for g in Y.morphisms if pY.mor_map[g] == (b, b)]
    fib_c = [k for k in Y.morphisms if pY.mor_map[k] == (c, c)]
    xs = sorted(xs, key=sort_key)

    def candidates(x):
        s, t = Y.morphisms[x]
        return [z for z in Z.hom(sigma.obj_map[s], tau.obj_map[t]) if pZ.mor_map[z] == (b, c)]

    def propagate(tv, x, z):
        stack = [(x, z)]
        added = []
        while stack:
            a, w = stack.pop()
            if a in tv:
                if tv[a] != w:
                    for r in added:
                        del tv[r]
                    return None
                continue
            tv[a] = w
            added.append(a)
            s, t = Y.morphisms[a]
            for g in fib_b:
                if Y.tgt(g) == s:
                    stack.append((Y.compose[(a, g)], Z.compose[(w, sigma.mor_map[g])]))
            for k in fib_c:
                if Y.src(k) == t:
                    stack.append((Y.compose[(k, a)], Z.compose[(tau.mor_map[k], w)]))
        return added

    def rec(tv):
        free = [x for x in xs if x not in tv]
        if not free:
            yield dict(tv)
            return
        x = free[0]
        for z in candidates(x):
            added = propagate(tv, x, z)
            if added is None:
                continue
            yield from rec(tv)
            for r in added:
                del tv[r]

    yield from rec({})


def cat_exponential(Y: ObjectOverB, Z: ObjectOverB, verify: bool = True, test_cap: int = 5) -> Exponential:
    """``Z^Y`` in categories over a poset.

    Objects over ``b`` are functors ``Y_b -> Z_b``; a morphism from
    ``(b, s)`` to ``(c, t)`` is a family assigning to each morphism ``x`` of
    Y over ``b <= c`` a morphism of Z over ``b <= c``, natural in both
    fibres.  Composites are computed through any factorization of ``x``
    over the middle element, which exists and is unambiguous exactly under
    factorization lifting.
    """
    gc = giraud_conduche(Y)
    if not gc:
        raise NotExponentiable("factorization lifting fails", gc.witness)
    B = Y.base
    pY, pZ = Y.projection, Z.projection
    YT, ZT = Y.total, Z.total
    fibY = {b: _fibre(YT, pY, b) for b in B.elements}
    fibZ = {b: _fibre(ZT, pZ, b) for b in B.elements}
    objs = {}
    for b in B.elements:
        for i, s in enumerate(functors(fibY[b], fibZ[b])):
            objs[(b, i)] = s
    over_pair = {}
    for x in YT.morphisms:
        over_pair.setdefault(pY.mor_map[x], []).append(x)
    mors = {}
    data = {}
    for (b, i), s in objs.items():
        for (c, j), t in objs.items():
            if not B.leq(b, c):
                continue
            xs = over_pair.get((b, c), [])
            for k, fam in enumerate(_families(YT, ZT, s, t, xs, pY, pZ, b, c)):
                name = ((b, i), (c, j), k)
                mors[name] = ((b, i), (c, j))
                data[name] = fam
    ids = {}
    for (b, i), s in objs.items():
        want = {x: s.mor_map[x] for x in over_pair.get((b, b), [])}
        ids[(b, i)] = next(n for n, fam in data.items() if mors[n] == ((b, i), (b, i)) and fam == want)
    lookup = {}
    for n, fam in data.items():
        lookup[(mors[n], tuple(sorted(fam.items(), key=sort_key)))] = n
    # a factorization x = x2 . x1 through the middle fibre
    splits = {}
    for x1 in YT.morphisms:
        for x2 in YT.out_of(YT.tgt(x1)):
            splits.setdefault(YT.compose[(x2, x1)], []).append((x1, x2))
    comp = {}
    for n1, (a1, a2) in mors.items():
        for n2, (a2b, a3) in mors.items():
            if a2b != a2:
                continue
            b, c, e = a1[0], a2[0], a3[0]
            fam = {}
            for x in over_pair.get((b, e), []):
                x1, x2 = next((x1, x2) for (x1, x2) in splits[x]
                              if pY.obj_map[YT.tgt(x1)] == c)
                fam[x] = ZT.compose[(data[n2][x2], data[n1][x1])]
            key = ((a1, a3), tuple(sorted(fam.items(), key=sort_key)))
            if key not in lookup:
                raise VerificationFailed("composite family is not natural")
            comp[(n2, n1)] = lookup[key]
    E = FinCat(list(objs), mors, ids, comp)
    C = FinCat.from_poset(B)
    pE = FinFunctor(E, C, {a: a[0] for a in objs}, {n: (a[0], b2[0]) for n, (a, b2) in mors.items()})
    Eq = ObjectOverB(Doctrine.CAT, E, B, pE)
    EY = fiber_product_cat(Eq, Y)
    ev = FinFunctor(EY.total, ZT,
                    {(a, y): objs[a].obj_map[y] for (a, y) in EY.total.objects},
                    {(n, x): data[n][x] for (n, x) in EY.total.morphisms})
    result = Exponential(Eq, ev, None)
    if verify:
        from .oracle import verify_adjunction
        report = verify_adjunction(Y, result, Z, size_cap=test_cap)
        if not report.verdict:
            raise VerificationFailed("adjunction oracle rejected the exponential", report)
        result = Exponential(Eq, ev, report)
    return result


# ---------------------------------------------------------------------------
# Small categories over a poset, for tests and oracles


def small_categories(max_morphisms: int) -> list:
    """A deterministic family of small categories.

    Thin categories of posets, free categories on acyclic multigraphs, and
    one-object or two-object categories with a non-trivial idempotent or
    involution, all with at most ``max_morphisms`` morphisms.
    """
    from itertools import combinations_with_replacement
    from .enumeration import posets_up_to_iso
    out = []
    seen = set()

    def add(C):
        if len(C.morphisms) > max_morphisms:
            return
        key = _cat_key(C)
        if key in seen:
            return
        seen.add(key)
        out.append(C)

    for n in range(0, min(max_morphisms, 5) + 1):
        for P in posets_up_to_iso(n):
            if len(P.relation) <= max_morphisms:
                add(FinCat.from_poset(P))
    if max_morphisms >= 6:
        add(FinCat.from_poset(FinPoset.discrete(range(6))))
    # free categories on acyclic multigraphs with edges i -> j (i < j)
    for n in range(1, 4):
        slots = [(i, j) for i in range(n) for j in range(i + 1, n)]
        for m in range(1, 4):
            for multi in combinations_with_replacement(slots, m):
                if len(set(multi)) == len(multi):
                    continue  # simple graphs are covered by posets/free below
                edges = [(f"e{k}", i, j) for k, (i, j) in enumerate(multi)]
                try:
                    add(FinCat.free(range(n), edges))
                except CategoryError:
                    pass
        for m in range(1, 4):
            for simple in _subsets_of(slots, m):
                edges = [(f"e{k}", i, j) for k, (i, j) in enumerate(simple)]
                add(FinCat.free(range(n), edges))
    # monoids of order two
    add(FinCat.monoid(["1", "e"], lambda g, f: "1" if (g, f) == ("1", "1") else "e", "1"))
    add(FinCat.monoid(["1", "s"], lambda g, f: "1" if g == f else "s", "1"))
    for extra in _two_object_nonthin():
        add(extra)
    return out


def _subsets_of(xs, m):
    from itertools import combinations
    return combinations(xs, m)


def _cat_key(C: FinCat):
    # exact structural identity; isomorphic duplicates only cost time
    return (tuple(C.objects), frozenset(C.morphisms.items()), frozenset(C.compose.items()))


def _two_object_nonthin():
    """An idempotent at the source of an arrow, and at its target."""
    out = []
    # e: a -> a idempotent, f: a -> b with f.e = f
    objs = ["a", "b"]
    mors = {"1a": ("a", "a"), "e": ("a", "a"), "1b": ("b", "b"), "f": ("a", "b")}
    ids = {"a": "1a", "b": "1b"}
    comp = {("1a", "1a"): "1a", ("e", "1a"): "e", ("1a", "e"): "e", ("e", "e"): "e",
            ("1b", "1b"): "1b", ("f", "1a"): "f", ("1b", "f"): "f", ("f", "e"): "f"}
    out.append(FinCat(objs, mors, ids, comp))
    # f, g: a -> b with an idempotent e on b sending both to g
    mors = {"1a": ("a", "a"), "1b": ("b", "b"), "e": ("b", "b"), "f": ("a", "b"), "g": ("a", "b")}
    comp = {("1a", "1a"): "1a", ("1b", "1b"): "1b", ("e", "1b"): "e", ("1b", "e"): "e", ("e", "e"): "e",
            ("f", "1a"): "f", ("g", "1a"): "g", ("1b", "f"): "f", ("1b", "g"): "g",
            ("e", "f"): "g", ("e", "g"): "g"}
    out.append(FinCat(objs, mors, ids, comp))
    return out


def _shape_over(q: ObjectOverB):
    C, P = q.total, q.projection
    return (tuple(sorted((P.obj_map[a] for a in C.objects), key=sort_key)),
            tuple(sorted(((P.obj_map[C.src(f)], P.obj_map[C.tgt(f)]) for f in C.morphisms), key=sort_key)))


def iso_representatives(objs) -> list:
    """One object per isomorphism class over the base, in input order."""
    buckets = {}
    reps = []
    for q in objs:
        bucket = buckets.setdefault(_shape_over(q), [])
        if any(find_iso_over_cat(q, r) is not None for r in bucket):
            continue
        bucket.append(q)
        reps.append(q)
    return reps


def categories_over(B: FinPoset, max_morphisms: int):
    """All functors from the small family into ``B``, as objects over B.

    Isomorphic copies are not merged."""
    C = FinCat.from_poset(B)
    for Y in small_categories(max_morphisms):
        for q in functors(Y, C):
            yield ObjectOverB(Doctrine.CAT, Y, B, q)
