"""Brute-force verifiers.

These never call the deciders.  Each one enumerates test objects up to a
size cap and checks a universal property directly; a passing report means
"holds for every test object within the cap", and the cap travels with the
report.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .cat import FinCat, FinFunctor, functors
from .doctrines import Doctrine, as_doctrine
from .enumeration import monotone_maps, objects_over, posets_up_to_iso, preorders_up_to_iso
from .glueing import ObjectOverB, restrict_over
from .order import FinPoset, FinPreorder, FinSpace, sort_key
from .unionfind import UnionFind


@dataclass
class OracleReport:
    verdict: bool
    counterexample: object = None
    statistics: dict = field(default_factory=dict)
    cap: int = 0
    inconclusive: bool = False

    @property
    def status(self) -> str:
        if self.inconclusive:
            return "inconclusive"
        return "pass" if self.verdict else "fail"

    def to_dict(self) -> dict:
        return {"status": self.status, "verdict": self.verdict, "cap": self.cap,
                "statistics": dict(self.statistics),
                "counterexample": None if self.counterexample is None else repr(self.counterexample)}


# ---------------------------------------------------------------------------
# Pushouts


@dataclass
class Span:
    """``left <- apex -> right`` given by point maps."""

    apex: FinPreorder
    left: FinPreorder
    right: FinPreorder
    to_left: dict
    to_right: dict


@dataclass
class Cocone:
    vertex: FinPreorder
    from_left: dict
    from_right: dict


def _order(X):
    return X.order if isinstance(X, FinSpace) else X


def pushout_diagram(q: ObjectOverB, b, c, e):
    """The pieces over ``{b,c}``, ``{c}``, ``{c,e}`` and the part over
    ``{b,c,e}`` with their inclusions, as a span and a cocone."""
    Ybc = restrict_over(q, [b, c]).order
    Yc = restrict_over(q, [c]).order
    Yce = restrict_over(q, [c, e]).order
    Y = restrict_over(q, [b, c, e]).order
    ident = lambda P: {x: x for x in P.elements}
    return (Span(Yc, Ybc, Yce, ident(Yc), ident(Yc)),
            Cocone(Y, ident(Ybc), ident(Yce)))


def _test_objects(d, cap):
    d = as_doctrine(d)
    for n in range(cap + 1):
        if d is Doctrine.TOP:
            yield from preorders_up_to_iso(n)
        elif d is Doctrine.REL:
            yield FinPoset.discrete(range(n))
            yield from (P for P in posets_up_to_iso(n) if len(P.relation) > n)
        else:
            yield from posets_up_to_iso(n)


def verify_pushout(d, span: Span, cocone: Cocone, cap: int = 4) -> OracleReport:
    """Check that the cocone is a pushout against every test object W with at
    most ``cap`` points: each compatible pair ``(h1, h2)`` into W must factor
    through the vertex by exactly one map."""
    d = as_doctrine(d)
    if d is Doctrine.CAT:
        raise NotImplementedError("pushout oracle covers the order-based doctrines")
    P = cocone.vertex
    stats = {"test_objects": 0, "cocones": 0}
    for x in span.apex.elements:
        if cocone.from_left[span.to_left[x]] != cocone.from_right[span.to_right[x]]:
            return OracleReport(False, ("cocone does not commute", x), stats, cap)
    for W in _test_objects(d, cap):
        stats["test_objects"] += 1
        for h1 in monotone_maps(span.left, W):
            fixed = {span.to_right[x]: h1[span.to_left[x]] for x in span.apex.elements}
            for h2 in monotone_maps(span.right, W, fixed=fixed):
                stats["cocones"] += 1
                forced = {}
                clash = False
                for src, g, h in ((span.left, cocone.from_left, h1), (span.right, cocone.from_right, h2)):
                    for x in src.elements:
                        p = g[x]
                        if forced.setdefault(p, h[x]) != h[x]:
                            clash = True
                n = 0
                if not clash:
                    for _ in monotone_maps(P, W, fixed=forced):
                        n += 1
                        if n > 1:
                            break
                if n != 1:
                    return OracleReport(False, {"W": W, "h1": h1, "h2": h2, "mediating": n}, stats, cap)
    return OracleReport(cap > 0, None, stats, cap, inconclusive=cap <= 0)


# ---------------------------------------------------------------------------
# Adjunction


def _maps_over(X: FinPreorder, px: dict, T: FinPreorder, pt: dict):
    fibres = {}
    for t in T.elements:
        fibres.setdefault(pt[t], []).append(t)
    return monotone_maps(X, T, allowed=lambda x: fibres.get(px[x], []))


def _fibre_product(X: FinPreorder, px: dict, Y: FinPreorder, py: dict):
    pts = [(x, y) for x in X.elements for y in Y.elements if px[x] == py[y]]
    keep = set(pts)
    rel = [((x, y), (x2, y2)) for (x, x2) in X.relation for (y, y2) in Y.relation
           if (x, y) in keep and (x2, y2) in keep]
    return FinPreorder(pts, rel), {p: px[p[0]] for p in pts}


def _test_objects_over(d, B, cap):
    """Posets over B, restricted to discrete fibres for rel."""
    for P, q in objects_over(B, cap):
        if d is Doctrine.REL and any(x != y and q[x] == q[y] for (x, y) in P.relation):
            continue
        yield P, q


def verify_adjunction(Y: ObjectOverB, E, Z: ObjectOverB, size_cap: int = 3) -> OracleReport:
    """Check that ``g |-> ev . (g x_B Y)`` is a bijection
    ``Hom(X, E) -> Hom(X x_B Y, Z)`` for every test X over B, natural in X.

    ``E`` is an :class:`~expokit.catprof.Exponential` (object and evaluation).
    """
    d = Y.doctrine
    if d is Doctrine.CAT:
        return _verify_adjunction_cat(Y, E, Z, size_cap)
    if d is Doctrine.LOC:
        raise NotImplementedError("convert loc objects to top before calling the oracle")
    B = Y.base
    EO, ev = E.obj, E.evaluation
    PE, pe = EO.order, EO.projection
    PY, py = Y.order, Y.projection
    PZ, pz = Z.order, Z.projection
    stats = {"test_objects": 0, "hom_pairs": 0, "naturality_checks": 0}
    EY, pey = _fibre_product(PE, pe, PY, py)
    for (a, b2) in EY.relation:
        if not PZ.leq(ev[a], ev[b2]):
            return OracleReport(False, ("evaluation is not monotone", a, b2), stats, size_cap)
    for p in EY.elements:
        if pz[ev[p]] != pey[p]:
            return OracleReport(False, ("evaluation is not over the base", p), stats, size_cap)
    transposes = {}
    for X, px in _test_objects_over(d, B, size_cap):
        stats["test_objects"] += 1
        XY, pxy = _fibre_product(X, px, PY, py)
        lhs = list(_maps_over(X, px, PE, pe))
        rhs = {_freeze(h) for h in _maps_over(XY, pxy, PZ, pz)}
        image = {}
        for g in lhs:
            t = _freeze({(x, y): ev[(g[x], y)] for (x, y) in XY.elements})
            if t not in rhs:
                return OracleReport(False, {"X": X, "over": px, "map": g, "problem": "transpose is not a map over B"},
                                    stats, size_cap)
            if t in image:
                return OracleReport(False, {"X": X, "over": px, "maps": (image[t], g), "problem": "not injective"},
                                    stats, size_cap)
            image[t] = g
        stats["hom_pairs"] += len(lhs)
        if len(image) != len(rhs):
            missing = next(iter(rhs - set(image)))
            return OracleReport(False, {"X": X, "over": px, "missing": dict(missing), "problem": "not surjective"},
                                stats, size_cap)
        transposes[(X, tuple(sorted(px.items(), key=sort_key)))] = (X, px, image)
    # naturality along maps k: X' -> X over B between small test objects
    small = [v for v in transposes.values() if len(v[0]) <= min(size_cap, 2)]
    for X2, px2, _ in small:
        for X, px, image in small:
            inverse = {_freeze(g): t for t, g in image.items()}
            for k in _maps_over(X2, px2, X, px):
                for g_key, t in inverse.items():
                    g = dict(g_key)
                    stats["naturality_checks"] += 1
                    gk = {x: g[k[x]] for x in X2.elements}
                    lhs = {(x, y): ev[(gk[x], y)] for x in X2.elements for y in PY.elements if px2[x] == py[y]}
                    tt = dict(t)
                    rhs = {(x, y): tt[(k[x], y)] for (x, y) in lhs}
                    if lhs != rhs:
                        return OracleReport(False, {"X'": X2, "X": X, "k": k, "problem": "naturality"},
                                            stats, size_cap)
    return OracleReport(size_cap > 0, None, stats, size_cap, inconclusive=size_cap <= 0)


def _freeze(m: dict):
    return frozenset(m.items())


_CAT_TESTS = {}


def _cat_test_objects(B: FinPoset, size_cap: int) -> list:
    """Categories over B with at most ``size_cap`` objects, one per iso class."""
    key = (B, size_cap)
    if key not in _CAT_TESTS:
        from .catprof import categories_over, iso_representatives
        found = [X for X in categories_over(B, 2 * size_cap) if len(X.total.objects) <= size_cap]
        _CAT_TESTS[key] = iso_representatives(found)
    return _CAT_TESTS[key]


def _verify_adjunction_cat(Y, E, Z, size_cap):
    from .catprof import fiber_product_cat
    B = Y.base
    EO, ev = E.obj, E.evaluation
    stats = {"test_objects": 0, "hom_pairs": 0, "naturality_checks": 0}
    if ev.violations():
        return OracleReport(False, ("evaluation is not a functor", ev.violations()[0]), stats, size_cap)
    tests = _cat_test_objects(B, size_cap)
    kept = []
    for X in tests:
        stats["test_objects"] += 1
        XY = fiber_product_cat(X, Y)
        lhs = list(functors(X.total, EO.total, base=(X.projection, EO.projection)))
        rhs = {_ffreeze(h) for h in functors(XY.total, Z.total, base=(XY.projection, Z.projection))}
        image = {}
        for g in lhs:
            t = _transpose_cat(g, XY, ev)
            key = _ffreeze(t)
            if key not in rhs:
                return OracleReport(False, {"X": X.total, "problem": "transpose is not a functor over B"},
                                    stats, size_cap)
            if key in image:
                return OracleReport(False, {"X": X.total, "problem": "not injective"}, stats, size_cap)
            image[key] = g
        stats["hom_pairs"] += len(lhs)
        if len(image) != len(rhs):
            return OracleReport(False, {"X": X.total, "problem": "not surjective",
                                        "expected": len(rhs), "found": len(image)}, stats, size_cap)
        if len(X.total.objects) <= 2:
            kept.append((X, XY, image))
    for X2, XY2, _ in kept:
        for X, XY, image in kept:
            for k in functors(X2.total, X.total, base=(X2.projection, X.projection)):
                for g in image.values():
                    stats["naturality_checks"] += 1
                    gk = k.then(g)
                    left = _transpose_cat(gk, XY2, ev)
                    t = _transpose_cat(g, XY, ev)
                    right_obj = {(a, y): t.obj_map[(k.obj_map[a], y)] for (a, y) in XY2.total.objects}
                    right_mor = {(f, x): t.mor_map[(k.mor_map[f], x)] for (f, x) in XY2.total.morphisms}
                    if left.obj_map != right_obj or left.mor_map != right_mor:
                        return OracleReport(False, {"X'": X2.total, "X": X.total, "problem": "naturality"},
                                            stats, size_cap)
    return OracleReport(size_cap > 0, None, stats, size_cap, inconclusive=size_cap <= 0)


def _transpose_cat(g: FinFunctor, XY, ev: FinFunctor) -> FinFunctor:
    obj = {(a, y): ev.obj_map[(g.obj_map[a], y)] for (a, y) in XY.total.objects}
    mor = {(f, x): ev.mor_map[(g.mor_map[f], x)] for (f, x) in XY.total.morphisms}
    return FinFunctor(XY.total, ev.target, obj, mor, check=False)


def _ffreeze(h: FinFunctor):
    return (frozenset(h.obj_map.items()), frozenset(h.mor_map.items()))


# ---------------------------------------------------------------------------
# Mutations for oracle self-tests


def mutate_exponential(E, rng: random.Random):
    """Corrupt a flat exponential: drop a covering pair, duplicate a point,
    or delete a point.  Returns ``(mutant, description)``."""
    from .catprof import Exponential
    obj = E.obj
    P = obj.order
    kinds = ["drop-cover", "duplicate", "delete"]
    if not P.covers():
        kinds.remove("drop-cover")
    if not P.elements:
        kinds = []
    if not kinds:
        raise ValueError("nothing to corrupt")
    kind = rng.choice(kinds)
    rel = set(P.relation)
    pts = list(P.elements)
    proj = dict(obj.projection)
    ev = dict(E.evaluation)
    if kind == "drop-cover":
        pair = rng.choice(P.covers())
        rel.discard(pair)
        desc = (kind, pair)
    elif kind == "duplicate":
        x = rng.choice(pts)
        dup = ("dup", x)
        pts.append(dup)
        proj[dup] = proj[x]
        rel |= {(a if a != x else dup, b if b != x else dup) for (a, b) in P.relation if x in (a, b)}
        rel.add((dup, dup))
        rel.discard((dup, x))
        rel.discard((x, dup))
        for (e, y), z in list(ev.items()):
            if e == x:
                ev[(dup, y)] = z
        desc = (kind, x)
    else:
        x = rng.choice(pts)
        pts.remove(x)
        rel = {(a, b) for (a, b) in rel if x not in (a, b)}
        del proj[x]
        ev = {k: v for k, v in ev.items() if k[0] != x}
        desc = (kind, x)
    Q = FinPoset(pts, rel)
    total = FinSpace(Q) if obj.doctrine is Doctrine.TOP else Q
    return Exponential(ObjectOverB(obj.doctrine, total, obj.base, proj), ev, None), desc


# ---------------------------------------------------------------------------
# Quotient maps


def _final_preorder(X: FinPreorder, p: dict, points) -> FinPreorder:
    return FinPreorder.from_pairs(points, [(p[a], p[b]) for (a, b) in X.relation])


def _partitions(items, same):
    """Set partitions of ``items`` whose blocks satisfy ``same`` pairwise."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _partitions(rest, same):
        for i, block in enumerate(part):
            if all(same(first, x) for x in block):
                yield part[:i] + [[first] + block] + part[i + 1:]
        yield [[first]] + part


def verify_quotient_preservation(Y: ObjectOverB, size_cap: int = 4) -> OracleReport:
    """Search for a quotient map ``X -> X'`` over B (X with at most
    ``size_cap`` points) whose pullback along ``Y`` is not a quotient map.

    A witness gives a failing report.  Without one the report is a pass
    only when ``size_cap >= 4``: a failure of interpolation at a triple
    ``b < c < e`` -- the only way a finite object over B can fail -- is
    always exposed by two glued two-point chains, which have four points.
    Smaller caps (or an empty search) give an inconclusive report.
    """
    if Y.doctrine is Doctrine.LOC:
        from .glueing import loc_over_to_top
        Y = loc_over_to_top(Y)
    B = Y.base
    PY, py = Y.order, Y.projection
    stats = {"spaces": 0, "quotients": 0}
    for X, px in objects_over(B, size_cap):
        stats["spaces"] += 1
        for part in _partitions(X.elements, lambda a, b: px[a] == px[b]):
            if len(part) == len(X):
                continue
            stats["quotients"] += 1
            cls = {x: i for i, block in enumerate(part) for x in block}
            Xq = _final_preorder(X, cls, range(len(part)))
            pq = {cls[x]: px[x] for x in X.elements}
            XY, pxy = _fibre_product(X, px, PY, py)
            XqY, _ = _fibre_product(Xq, pq, PY, py)
            image = {(x, y): (cls[x], y) for (x, y) in XY.elements}
            final = _final_preorder(XY, image, XqY.elements)
            if final.relation != XqY.relation:
                bad = sorted(XqY.relation - final.relation, key=sort_key)[0]
                return OracleReport(False, {"space": X, "over": px, "blocks": part, "unreflected": bad},
                                    stats, size_cap)
    inconclusive = size_cap < 4 or stats["quotients"] == 0
    return OracleReport(not inconclusive, None, stats, size_cap, inconclusive=inconclusive)
